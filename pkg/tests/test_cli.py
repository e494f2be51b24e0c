import io
import subprocess
import sys
from pathlib import Path

import pytest

from zdcut.cli import dispatch

HERE = Path(__file__).parent
DATA = HERE / "data"

GOLDEN = {
    "validate_bsc_if": ["validate", "--net", "data/bsc_if.net"],
    "feasible_123": ["feasible", "--net", "data/bsc_if.net", "--profile", "data/b121.dp", "--seq", "1,2,3"],
    "feasible_213": ["feasible", "--net", "data/bsc_if.net", "--profile", "data/b121.dp",
                     "--seq", "2,1,3", "--all-sequences"],
    "capacity_dmc_trn_in": ["capacity-dmc", "--net", "data/trn_in.net"],
    "member_outside": ["member", "--net", "data/trn_in.net", "--rates", "0.532,0,0,0"],
    "cutset_trn_cn": ["cutset", "--net", "builtin:trn_cn"],
    "simulate_trn_cn": ["simulate", "--scenario", "trn_cn", "--slots", "64", "--trials", "16", "--seed", "5"],
    "simulate_bsc_if": ["simulate", "--scenario", "bsc_if", "--param", "p=0.3", "--bits", "2", "--slots", "6",
                        "--trials", "200", "--seed", "3", "--probe", "1:1,2"],
}
EXIT = {"feasible_213": 1, "member_outside": 1}


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def in_tests_dir(monkeypatch):
    monkeypatch.chdir(HERE)
    monkeypatch.delenv("ZDCUT_SEED", raising=False)


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden(name):
    code, out, err = call(GOLDEN[name])
    assert err == ""
    assert code == EXIT.get(name, 0)
    assert out == (HERE / "golden" / f"{name}.txt").read_text()


def test_member_inside_and_awgn():
    assert call(["member", "--net", "data/trn_in.net", "--rates", "0.53,0,0,0"])[0] == 0
    code, out, _ = call(["capacity-awgn", "--net", "data/awgn_relay.net", "--rates", "1,0,0,0"])
    assert code == 0
    assert "verdict: inside" in out and "S(1,4):" in out
    code, out, _ = call(["member", "--net", "data/awgn_relay.net", "--rates", "3,0,0,0"])
    assert code == 1 and "verdict: outside" in out


def test_cutset_with_inputs(tmp_path):
    inputs = tmp_path / "in.yaml"
    inputs.write_text("- [0.5, 0.5]\n- null\n- null\n")
    code, out, _ = call(["cutset", "--net", "data/bsc_if.net", "--inputs", str(inputs), "--rates", "0.5,0.5"])
    assert code == 0 and "verdict: inside" in out
    inputs.write_text("- [0.5, 0.5]\n")
    code, _, err = call(["cutset", "--net", "data/bsc_if.net", "--inputs", str(inputs)])
    assert code == 2 and err.startswith("input error:")


def test_seed_from_environment(monkeypatch):
    argv = ["simulate", "--scenario", "bsc_if", "--param", "p=0.3", "--slots", "3", "--trials", "50"]
    monkeypatch.setenv("ZDCUT_SEED", "3")
    env = call(argv)[1]
    assert "seed: 3" in env
    assert env == call(argv + ["--seed", "3"])[1]
    assert env != call(argv + ["--seed", "4"])[1]


@pytest.mark.parametrize("argv, prefix", [
    (["frobnicate"], "usage error:"),
    (["feasible", "--net", "data/bsc_if.net"], "usage error:"),
    (["simulate", "--scenario", "bsc_if", "--param", "p"], "usage error:"),
    (["validate", "--net", "data/missing.net"], "input error:"),
    (["validate", "--net", "data/b121.dp"], "input error:"),
    (["member", "--net", "data/trn_in.net", "--rates", "0.1,0.1"], "input error:"),
    (["feasible", "--net", "data/bsc_if.net", "--profile", "data/b121.dp", "--seq", "1,1,3"], "input error:"),
    (["capacity-awgn", "--net", "data/trn_in.net"], "input error:"),
    (["simulate", "--scenario", "trn_cn", "--profile", "positive"], "sandbox error:"),
])
def test_errors_exit_two(argv, prefix):
    code, out, err = call(argv)
    assert code == 2
    assert out == ""
    assert err.startswith(prefix)


def test_guard_error_prefix(tmp_path):
    lines = ["nodes: 21", "demand: {sources: [1], destinations: [2]}", "channels:",
             "  - edges: [" + ", ".join(f"[{i}, {j}]" for i in range(1, 22) for j in range(1, 22)) + "]",
             "    kind: trivial"]
    net = tmp_path / "big.net"
    net.write_text("\n".join(lines) + "\n")
    code, _, err = call(["capacity-dmc", "--net", str(net)])
    assert code == 2 and err.startswith("guard error:")


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "zdcut.cli", "feasible", "--net", str(DATA / "bsc_if.net"),
         "--profile", str(DATA / "b121.dp"), "--seq", "2,1,3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert proc.stdout == "feasible: no, witness (1,2,1)\n"
