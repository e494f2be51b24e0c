"""Slot-by-slot Monte-Carlo execution of codes on a network.

Trials run vectorized in batches: every array carries a leading trial axis.
Trial ``t`` draws its messages and channel noise from its own Philox stream
(key ``seed``, counter offset ``t``), so results do not depend on batch size
or on the order in which trials are processed.

Slots and nodes are 1-based in every callback a code receives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import InfeasibleProfileError, SandboxViolation
from ..network import Network
from ..schedule import DelayProfile, available_inputs, is_feasible
from .estimate import MIEstimate, mi_from_counts
from .laws import TableLaw

DEFAULT_BATCH = 256


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream for one trial."""
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, int(trial), 0, 0]))


class ReceiveView:
    """What node ``i`` may read when encoding ``X(i, j)`` in slot ``k``.

    Only the incoming edges of node ``i`` up to their permitted slot are
    reachable; anything else raises :class:`SandboxViolation`.
    """

    __slots__ = ("_y", "_row", "_k")

    def __init__(self, y_store, row, k):
        self._y = y_store
        self._row = row
        self._k = k

    @property
    def slot(self) -> int:
        return self._k

    @property
    def incoming(self):
        return self._row.incoming

    def latest(self, edge) -> int:
        """Last readable slot of ``edge`` (0 when nothing is readable yet)."""
        if edge not in self._row.delay:
            raise SandboxViolation(self._row.edge, tuple(edge), self._k)
        return self._row.latest_slot(edge, self._k)

    def symbol(self, edge, slot: int) -> np.ndarray:
        """``Y(edge)`` at ``slot`` for every trial in the batch."""
        edge = tuple(edge)
        if not self._row.allows(edge, slot, self._k):
            raise SandboxViolation(self._row.edge, edge, slot)
        return self._y[edge][:, slot - 1].copy()

    def history(self, edge) -> np.ndarray:
        """All readable slots of ``Y(edge)``, shape ``(batch, latest)``."""
        last = self.latest(tuple(edge))
        return self._y[tuple(edge)][:, :max(last, 0)].copy()


@dataclass
class SimReport:
    """Outcome of :func:`run`; reports over disjoint trials merge by :meth:`merge`."""

    trials: int
    slots: int
    n_nodes: int
    message_bits: dict
    errors: int = 0
    pair_errors: dict = field(default_factory=dict)
    probe_counts: Optional[np.ndarray] = None
    trace: Optional[dict] = None

    @property
    def p_err(self) -> float:
        return self.errors / self.trials if self.trials else 0.0

    @property
    def rates(self) -> tuple:
        """``log2(M_i) / n`` per node, in bits per slot."""
        return tuple(self.message_bits.get(v, 0) / self.slots for v in range(1, self.n_nodes + 1))

    @property
    def mi(self) -> Optional[MIEstimate]:
        if self.probe_counts is None:
            return None
        return mi_from_counts(self.probe_counts)

    def merge(self, other: "SimReport") -> "SimReport":
        if (self.slots, self.message_bits) != (other.slots, other.message_bits):
            raise ValueError("reports come from different codes")
        pairs = dict(self.pair_errors)
        for k, v in other.pair_errors.items():
            pairs[k] = pairs.get(k, 0) + v
        counts = None
        if self.probe_counts is not None:
            counts = self.probe_counts + other.probe_counts
        trace = None
        if self.trace is not None and other.trace is not None:
            trace = {
                key: {e: np.concatenate([a[e], other.trace[key][e]]) for e in a}
                for key, a in self.trace.items()
            }
        return SimReport(
            self.trials + other.trials, self.slots, self.n_nodes, dict(self.message_bits),
            self.errors + other.errors, pairs, counts, trace,
        )

    def summary(self) -> dict:
        out = {
            "trials": self.trials,
            "slots": self.slots,
            "errors": self.errors,
            "p_err": self.p_err,
            "rates": self.rates,
            "pair_errors": dict(sorted(self.pair_errors.items())),
        }
        if self.probe_counts is not None:
            est = self.mi
            out["mi_bits"] = est.bits
            out["mi_bias_bound"] = est.bias_bound
            out["mi_samples"] = est.samples
        return out


def as_law(model):
    """Accept a :class:`Network`, a scenario or a law."""
    if isinstance(model, Network):
        return TableLaw(model)
    if hasattr(model, "law"):
        return model.law
    return model


def _check_symbols(values, law, edge, batch):
    arr = np.broadcast_to(np.asarray(values), (batch,))
    if law.is_continuous(edge):
        arr = arr.astype(float)
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"encoder for {edge} produced non-finite symbols")
        return arr
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError(f"encoder for {edge} produced non-integer symbols")
    arr = arr.astype(np.int32)
    size = law.input_size(edge)
    if np.any(arr < 0) or np.any(arr >= size):
        raise ValueError(f"encoder for {edge} left the input alphabet of size {size}")
    return arr


def _check_power(law, x_store, n):
    power = law.power
    if power is None:
        return
    N = law.n_nodes
    energy = np.zeros((next(iter(x_store.values())).shape[0], N, N))
    for (i, j), arr in x_store.items():
        energy[:, i - 1, j - 1] = (arr.astype(float) ** 2).sum(axis=1) / n
    slack = 1e-9
    if np.any(energy > power.per_edge[None] * (1 + slack) + slack):
        raise ValueError("code violates a per-edge power constraint")
    if np.any(energy.sum(axis=2) > power.per_node[None] * (1 + slack) + slack):
        raise ValueError("code violates a per-node power constraint")
    if np.any(energy.sum(axis=(1, 2)) > power.total * (1 + slack) + slack):
        raise ValueError("code violates the total power constraint")


def _run_batch(law, seq, rows, code, n, trials, seed, bits, probe, record):
    batch = len(trials)
    N = law.n_nodes
    demand = law.demand
    edges = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]
    live = [e for e in edges if not law.is_trivial(e)]

    messages = {v: np.zeros((batch, bits.get(v, 0)), dtype=np.uint8) for v in range(1, N + 1)}
    noise_rows = []
    for b, t in enumerate(trials):
        rng = trial_generator(seed, t)
        for v in sorted(bits):
            messages[v][b] = rng.integers(0, 2, size=bits[v], dtype=np.uint8)
        noise_rows.append(law.draw(rng, n))
    noise = {key: np.stack([r[key] for r in noise_rows]) for key in noise_rows[0]} if noise_rows else {}
    for arr in messages.values():
        arr.setflags(write=False)

    def store_dtype(e):
        return float if law.is_continuous(e) else np.int32

    x_store = {e: np.zeros((batch, n), dtype=store_dtype(e)) for e in edges}
    y_store = {e: np.zeros((batch, n), dtype=store_dtype(e)) for e in edges}

    blocks = law.partition.blocks
    for k in range(1, n + 1):
        x_now, y_now = {}, {}
        noise_now = {key: arr[:, k - 1] for key, arr in noise.items()}
        for h in seq:
            block = blocks[h - 1]
            if not any(e in live for e in block):
                continue
            for e in block:
                view = ReceiveView(y_store, rows[e], k)
                sym = code.encode(e, k, messages[e[0]], view) if e in live else 0
                x_now[e] = _check_symbols(sym, law, e, batch)
                x_store[e][:, k - 1] = x_now[e]
            out = law.sample(h, x_now, y_now, noise_now)
            for e, val in out.items():
                y_now[e] = val
                y_store[e][:, k - 1] = val

    _check_power(law, x_store, n)

    wrong = np.zeros(batch, dtype=bool)
    pair_errors = {}
    for j in sorted(demand.destinations):
        received = {(l, j): y_store[(l, j)].copy() for l in range(1, N + 1)}
        estimates = code.decode(j, messages[j], received) or {}
        for i in sorted(demand.sources):
            if bits.get(i, 0) == 0:
                pair_errors[(i, j)] = 0
                continue
            est = messages[i] if i == j and i not in estimates else estimates.get(i)
            if est is None:
                bad = np.ones(batch, dtype=bool)
            else:
                est = np.asarray(est).reshape(batch, -1)
                if est.shape[1] != bits[i]:
                    bad = np.ones(batch, dtype=bool)
                else:
                    bad = np.any(est != messages[i], axis=1)
            pair_errors[(i, j)] = int(bad.sum())
            wrong |= bad

    counts = None
    if probe is not None:
        source, edge = probe
        size = law.output_size(edge)
        if law.is_continuous(edge):
            raise ValueError("MI probe needs a discrete output edge")
        m = min(bits.get(source, 0), n)
        counts = np.zeros((2, size))
        np.add.at(counts, (messages[source][:, :m].ravel(), y_store[edge][:, :m].ravel()), 1)

    trace = {"x": x_store, "y": y_store} if record else None
    return SimReport(batch, n, N, dict(bits), int(wrong.sum()), pair_errors, counts, trace)


def run(
    model,
    seq,
    profile: DelayProfile,
    code,
    n: int,
    trials: int,
    seed: int = 0,
    batch_size: int = DEFAULT_BATCH,
    probe=None,
    record: bool = False,
) -> SimReport:
    """Simulate ``trials`` independent uses of ``code`` over ``n`` slots.

    In every slot the blocks fire in the order ``seq``; the encoder of each
    edge in a block is called with a :class:`ReceiveView` limited to what
    the delay profile allows, then the block's channel produces its outputs.
    A trial errs when any destination misdecodes any source message.

    ``probe=(source, edge)`` pairs bit ``k`` of the source message with
    ``Y(edge)`` in slot ``k`` and accumulates their joint counts for an
    empirical mutual information estimate.  ``record=True`` keeps every
    input and output in ``report.trace``.
    """
    law = as_law(model)
    seq = tuple(seq)
    verdict = is_feasible(profile, seq, law.partition)
    if not verdict:
        raise InfeasibleProfileError(verdict.witness)
    if n < 1 or trials < 1:
        raise ValueError("need at least one slot and one trial")
    bits = {int(v): int(b) for v, b in code.message_bits.items() if b}
    for v in bits:
        if v not in law.demand.sources:
            raise ValueError(f"node {v} is not a source but carries a message")
    N = law.n_nodes
    rows = {
        (i, j): available_inputs((i, j), law.partition, seq, profile)
        for i in range(1, N + 1)
        for j in range(1, N + 1)
    }
    report = None
    for start in range(0, trials, batch_size):
        ids = range(start, min(trials, start + batch_size))
        part = _run_batch(law, seq, rows, code, n, ids, seed, bits, probe, record)
        report = part if report is None else report.merge(part)
    return report
