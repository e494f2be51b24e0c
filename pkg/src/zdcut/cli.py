"""Command-line front end.

Usage::

    zdcut validate      --net FILE
    zdcut feasible      --net FILE --profile FILE --seq 1,2,3 [--all-sequences]
    zdcut capacity-dmc  --net FILE [--tol BITS]
    zdcut capacity-awgn --net FILE [--rates R1,..,RN] [--starts K]
    zdcut member        --net FILE --rates R1,..,RN
    zdcut cutset        --net FILE [--inputs FILE] [--rates R1,..,RN]
    zdcut simulate      --scenario NAME [--param KEY=VALUE ...] [--code NAME]
                        [--profile default|positive|FILE] [--seq 1,2,..]
                        [--slots N] [--trials N] [--seed S] [--bits B] [--lag L]

``--net`` takes a network description file (grammar in :mod:`zdcut.network`)
or ``builtin:NAME`` for a built-in scenario.  Delay profile files follow
:mod:`zdcut.schedule`.  A ``--inputs`` file is a YAML list with one entry per
block: the flattened joint input pmf of that block, or ``null`` for uniform.

Reports are ``key: value`` lines followed by one line per cut inequality.
Exit status: 0 for success, inside and feasible verdicts; 1 for outside,
undecided and infeasible verdicts; 2 for usage or input errors, each
prefixed ``usage error:``, ``input error:``, ``guard error:`` or
``sandbox error:``.  The default seed comes from ``ZDCUT_SEED`` (0 when
unset); ``--seed`` overrides it.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np
import yaml

from . import infocalc
from .errors import GuardError, InfeasibleProfileError, NetworkError, SandboxViolation
from .network import load_network
from .schedule import (
    feasible_sequences,
    is_feasible,
    load_profile,
    parse_sequence,
    positive_profile,
)
from .sim import codes as simcodes
from .sim import engine, scenarios

SEED_ENV = "ZDCUT_SEED"

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x: float) -> str:
    return f"{x:.9f}"


def _fmt_set(T) -> str:
    return "{" + ",".join(str(v) for v in sorted(T)) + "}"


def _load_net(arg: str):
    if arg.startswith("builtin:"):
        return scenarios.builtin_scenario(arg.split(":", 1)[1]).network
    return load_network(arg)


def _parse_rates(text: str, n: int) -> np.ndarray:
    try:
        rates = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise NetworkError(f"malformed rate tuple {text!r}") from None
    if rates.shape != (n,):
        raise NetworkError(f"rate tuple needs {n} entries, got {rates.size}")
    return rates


def _inequality_lines(bounds, rates=None):
    lines = []
    for b in bounds:
        T, bound = (b.cut, b.bound) if hasattr(b, "cut") else b
        lhs = " + ".join(f"R{v}" for v in sorted(T))
        line = f"cut {_fmt_set(T)}: {lhs} <= {_fmt(bound)}"
        if hasattr(b, "slack"):
            line += f"  (slack {_fmt(b.slack)})"
        lines.append(line)
    return lines


def _membership_lines(m) -> list[str]:
    lines = [f"verdict: {m.verdict}", f"min slack: {_fmt(m.slack)}"]
    if m.cut is not None:
        lines.append(f"tightest cut: {_fmt_set(m.cut)}")
    return lines


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args, out):
    net = _load_net(args.net)
    out.append("valid: yes")
    out.append(f"nodes: {net.n_nodes}")
    out.append(f"blocks: {net.alpha}")
    out.append(f"kind: {'awgn' if net.is_awgn else 'discrete'}")
    for h, (block, ch) in enumerate(zip(net.partition.blocks, net.channels), start=1):
        edges = " ".join(f"({i},{j})" for i, j in block)
        out.append(f"block {h}: {ch.kind} {edges}")
    return EXIT_OK


def cmd_feasible(args, out):
    net = _load_net(args.net)
    profile = load_profile(args.profile, net.n_nodes)
    seq = parse_sequence(args.seq, net.alpha)
    verdict = is_feasible(profile, seq, net.partition)
    if verdict:
        out.append("feasible: yes")
    else:
        out.append(f"feasible: no, witness ({','.join(map(str, verdict.witness))})")
    if args.all_sequences:
        for s in feasible_sequences(profile, net.partition):
            out.append(f"feasible sequence: {','.join(map(str, s))}")
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_capacity_dmc(args, out):
    net = _load_net(args.net)
    C = infocalc.edge_capacities(net, tol=args.tol)
    out.append(f"nodes: {net.n_nodes}")
    for i in range(1, net.n_nodes + 1):
        for j in range(1, net.n_nodes + 1):
            if not net.is_trivial((i, j)):
                out.append(f"C({i},{j}): {_fmt(C[i - 1, j - 1])}")
    out.extend(_inequality_lines(infocalc.dmc_region(C, net.demand)))
    return EXIT_OK


def _awgn_report(net, rates, args, out):
    m = infocalc.network_awgn_membership(rates, net, starts=args.starts, seed=args.seed)
    out.extend(_membership_lines(m))
    if m.witness is not None:
        for i in range(1, net.n_nodes + 1):
            for j in range(1, net.n_nodes + 1):
                if m.witness[i - 1, j - 1] > 0:
                    out.append(f"S({i},{j}): {_fmt(m.witness[i - 1, j - 1])}")
    out.extend(_inequality_lines(m.bounds))
    return m


def cmd_capacity_awgn(args, out):
    net = _load_net(args.net)
    if not net.is_awgn:
        raise NetworkError("capacity-awgn needs an AWGN network")
    rates = _parse_rates(args.rates, net.n_nodes) if args.rates else np.zeros(net.n_nodes)
    m = _awgn_report(net, rates, args, out)
    return EXIT_OK if m.inside else EXIT_NEGATIVE


def cmd_member(args, out):
    net = _load_net(args.net)
    rates = _parse_rates(args.rates, net.n_nodes)
    if net.is_awgn:
        m = _awgn_report(net, rates, args, out)
    else:
        C = infocalc.edge_capacities(net, tol=args.tol)
        m = infocalc.dmc_region_membership(rates, C, net.demand)
        out.extend(_membership_lines(m))
        out.extend(_inequality_lines(m.bounds))
    return EXIT_OK if m.inside else EXIT_NEGATIVE


def _load_inputs(path, net):
    if path is None:
        return infocalc.uniform_inputs(net)
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, list) or len(raw) != net.alpha:
        raise NetworkError(f"inputs file needs a list of {net.alpha} entries")
    uniform = infocalc.uniform_inputs(net)
    return [uniform[h] if p is None else np.array(p, dtype=float) for h, p in enumerate(raw)]


def cmd_cutset(args, out):
    net = _load_net(args.net)
    inputs = _load_inputs(args.inputs, net)
    try:
        region = infocalc.product_cutset_region(net, inputs)
    except ValueError as exc:
        raise NetworkError(str(exc)) from None
    out.append(f"nodes: {net.n_nodes}")
    out.append(f"blocks: {net.alpha}")
    if args.rates:
        rates = _parse_rates(args.rates, net.n_nodes)
        m = infocalc.product_cutset_membership(rates, net, inputs)
        out.extend(_membership_lines(m))
        out.extend(_inequality_lines(m.bounds))
        return EXIT_OK if m.inside else EXIT_NEGATIVE
    out.extend(_inequality_lines(region))
    return EXIT_OK


def _make_code(args, n):
    name = args.code
    if name == "default":
        s = scenarios.builtin_scenario(args.scenario, **_params(args.param))
        return scenarios.default_code(s, n, args.bits)
    if name == "silent":
        return simcodes.SilentCode()
    if name == "cancellation":
        return simcodes.CancellationCode(n, args.lag)
    if name == "repetition":
        links = {
            "bsc_if": {(1, 2): args.bits, (2, 1): args.bits},
            "bsc_cf": {(1, 2): args.bits, (2, 1): args.bits},
        }.get(args.scenario, {(1, 4): args.bits})
        return simcodes.RepetitionCode(links, n)
    raise UsageError(f"unknown code {name!r}")


def _params(pairs):
    params = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        params[key] = yaml.safe_load(value)
    return params


def cmd_simulate(args, out):
    s = scenarios.builtin_scenario(args.scenario, **_params(args.param))
    n_nodes = s.network.n_nodes
    if args.profile in (None, "default"):
        profile = s.profile
    elif args.profile == "positive":
        profile = positive_profile(n_nodes)
    else:
        profile = load_profile(args.profile, n_nodes)
    seq = parse_sequence(args.seq, s.partition.alpha) if args.seq else s.sequence
    code = _make_code(args, args.slots)
    probe = None
    if args.probe:
        src, edge = args.probe.split(":")
        i, j = (int(v) for v in edge.split(","))
        probe = (int(src), (i, j))
    report = engine.run(s, seq, profile, code, args.slots, args.trials, args.seed, probe=probe)
    summary = report.summary()
    out.append(f"scenario: {s.name}")
    out.append(f"code: {code.name}")
    out.append(f"sequence: {','.join(map(str, seq))}")
    out.append("profile zeros: " + (" ".join(f"({l},{i},{j})" for l, i, j in sorted(profile.zeros)) or "none"))
    out.append(f"seed: {args.seed}")
    for key in ("trials", "slots", "errors"):
        out.append(f"{key}: {summary[key]}")
    out.append(f"p_err: {_fmt(summary['p_err'])}")
    out.append("rates: " + ",".join(_fmt(r) for r in summary["rates"]))
    for (i, j), cnt in summary["pair_errors"].items():
        out.append(f"errors({i}->{j}): {cnt}")
    if "mi_bits" in summary:
        out.append(f"mi: {_fmt(summary['mi_bits'])}")
        out.append(f"mi bias bound: {_fmt(summary['mi_bias_bound'])}")
        out.append(f"mi samples: {summary['mi_samples']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    env_seed = int(os.environ.get(SEED_ENV, "0"))
    p = _Parser(prog="zdcut", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("validate", cmd_validate, "check a network description")
    sp.add_argument("--net", required=True)

    sp = add("feasible", cmd_feasible, "check a delay profile against an operation sequence")
    sp.add_argument("--net", required=True)
    sp.add_argument("--profile", required=True)
    sp.add_argument("--seq", required=True)
    sp.add_argument("--all-sequences", action="store_true")

    sp = add("capacity-dmc", cmd_capacity_dmc, "per-edge capacities and cut inequalities")
    sp.add_argument("--net", required=True)
    sp.add_argument("--tol", type=float, default=1e-9)

    for name, fn, help_ in (
        ("capacity-awgn", cmd_capacity_awgn, "power allocation and cut inequalities for AWGN networks"),
        ("member", cmd_member, "rate tuple membership in the capacity region"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--net", required=True)
        sp.add_argument("--rates", required=(name == "member"))
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--starts", type=int, default=8)
        sp.add_argument("--seed", type=int, default=env_seed)

    sp = add("cutset", cmd_cutset, "cut-set inequalities for a product input law")
    sp.add_argument("--net", required=True)
    sp.add_argument("--inputs")
    sp.add_argument("--rates")

    sp = add("simulate", cmd_simulate, "Monte-Carlo run of a code on a built-in scenario")
    sp.add_argument("--scenario", required=True, choices=scenarios.SCENARIOS)
    sp.add_argument("--param", action="append")
    sp.add_argument("--code", default="default")
    sp.add_argument("--profile", default="default")
    sp.add_argument("--seq")
    sp.add_argument("--slots", type=int, default=1000)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=env_seed)
    sp.add_argument("--bits", type=int, default=1)
    sp.add_argument("--lag", type=int, default=0)
    sp.add_argument("--probe", help="SOURCE:I,J pairs message bits with Y(I,J)")
    return p


def dispatch(argv, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    out: list[str] = []
    try:
        args = build_parser().parse_args(argv)
        status = args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_ERROR
    except GuardError as exc:
        print(f"guard error: {exc}", file=stderr)
        return EXIT_ERROR
    except SandboxViolation as exc:
        print(f"sandbox error: {exc}", file=stderr)
        return EXIT_ERROR
    except InfeasibleProfileError as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_ERROR
    except (NetworkError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_ERROR
    for line in out:
        print(line, file=stdout)
    return status


def main(argv=None) -> int:
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
