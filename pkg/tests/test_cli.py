import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from xstates.channels import dephasing_channel, dumps_channel
from xstates.cli import main
from xstates.xstate import loads_state, make_werner


def run(argv, stdin="", capsys=None, monkeypatch=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(capsys, monkeypatch):
    return lambda argv, stdin="": run(argv, stdin, capsys, monkeypatch)


def test_pipeline_make_params_reconstruct(cli):
    code, state, _ = cli(["xstate", "make", "--random", "4", "--center", "XY"])
    assert code == 0
    code, params, _ = cli(["xstate", "params", "--center", "XY"], state)
    assert code == 0
    obj = json.loads(params)
    assert obj["center"] == "XY" and obj["x_pattern"] is True and len(obj["values"]) == 7
    code, rebuilt, _ = cli(["xstate", "reconstruct"], params)
    assert code == 0
    assert np.abs(loads_state(rebuilt) - loads_state(state)).max() <= 1e-9


def test_subprocess_pipe():
    exe = [sys.executable, "-m", "xstates"]
    state = subprocess.run(exe + ["xstate", "make", "--werner", "0.7"], capture_output=True,
                           text=True, check=True).stdout
    out = subprocess.run(exe + ["concurrence", "--method", "all"], input=state,
                         capture_output=True, text=True, check=True).stdout
    res = json.loads(out)
    for v in res["concurrences"].values():
        assert v == pytest.approx(0.55, abs=1e-10)
    bad = subprocess.run(exe + ["xstate", "params"], input="nope", capture_output=True, text=True)
    assert bad.returncode != 0 and "error" in json.loads(bad.stderr)


def test_subalgebras_commands(cli):
    code, out, _ = cli(["subalgebras", "list", "--format", "json"])
    assert code == 0 and len(json.loads(out)) == 15
    code, out, _ = cli(["subalgebras", "list"])
    assert code == 0 and len(out.splitlines()) == 15
    code, out, _ = cli(["subalgebras", "fano", "--center", "ZZ"])
    assert code == 0 and "{2,3,4} anticommuting X2*X3 = +i X4" in out
    code, out, _ = cli(["subalgebras", "fano", "--center", "XX", "--graph"])
    assert code == 0 and sum(ln.startswith("line") for ln in out.splitlines()) == 7
    code, out, _ = cli(["subalgebras", "fano", "--format", "json"])
    assert json.loads(out)["members"][3] == "-YY"


@pytest.mark.parametrize("method", ["closed", "entrywise", "oracle"])
def test_concurrence_single_method(cli, method):
    _, state, _ = cli(["xstate", "make", "--bell", "psi-"])
    code, out, _ = cli(["concurrence", "--method", method, "--verbose"], state)
    obj = json.loads(out)
    assert code == 0 and obj["concurrence"] == pytest.approx(1, abs=1e-10) and len(obj["spectrum"]) == 4


def test_concurrence_needs_projection(cli, rng):
    rho = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = rho @ rho.conj().T
    rho /= np.trace(rho).real
    state = json.dumps({"basis": "std", "rho": [[[z.real, z.imag] for z in row] for row in rho]})
    code, _, err = cli(["concurrence", "--method", "closed"], state)
    assert code == 1 and json.loads(err)["error"] == "pattern" and "project" in err
    code, projected, _ = cli(["xstate", "project"], state)
    assert code == 0
    code, out, _ = cli(["concurrence", "--method", "all"], projected)
    assert code == 0 and json.loads(out)["max_deviation"] <= 1e-8


def test_validate_command(cli):
    _, state, _ = cli(["xstate", "make", "--werner", "0.2"])
    code, out, _ = cli(["xstate", "validate"], state)
    assert code == 0 and json.loads(out)["ok"] is True
    bad = json.dumps({"basis": "std", "rho": [[[1 if i == j and i < 3 else 0, 0] for j in range(4)]
                                             for i in range(4)]})
    code, out, err = cli(["xstate", "validate"], bad)
    assert code == 1 and json.loads(err)["error"] == "invalid_state"


def test_sweep_werner(cli):
    code, out, _ = cli(["sweep", "werner", "--steps", "101"])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 101
    for r in rows:
        target = max(0.0, (3 * float(r["p"]) - 1) / 2)
        assert abs(float(r["C_oracle"]) - target) <= 1e-8
    code, _, err = cli(["sweep", "werner", "--steps", "1"])
    assert code == 1


def test_sweep_custom(cli, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"center": "ZZ", "values": [[-0.8, 0, 0, 0.8, 0, 0, -0.8], [0] * 7]}))
    code, out, _ = cli(["sweep", "custom", "--g-path", str(path)])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(rows[0]["C_closed"]) == pytest.approx(0.7)
    code, _, err = cli(["sweep", "custom", "--g-path", str(tmp_path / "missing.json")])
    assert code == 1 and json.loads(err)["error"] == "io"


def test_evolve(cli, tmp_path):
    ch = tmp_path / "ch.json"
    ch.write_text(dumps_channel(dephasing_channel("ZZ", 0.1, i=6)))
    _, state, _ = cli(["xstate", "make", "--bell", "phi+"])
    out_path = tmp_path / "trace.csv"
    code, _, _ = cli(["evolve", "--channel", str(ch), "--steps", "3", "--output", str(out_path)], state)
    rows = list(csv.DictReader(out_path.open()))
    assert code == 0 and [r["step"] for r in rows] == ["0", "1", "2", "3"]
    assert float(rows[3]["concurrence"]) == pytest.approx(0.8 ** 3, abs=1e-10)


@pytest.mark.parametrize("argv,stdin,kind", [
    (["xstate", "make", "--bell", "chi"], "", "argument"),
    (["xstate", "make", "--werner", "0.5", "--center", "QQ"], "", "parse"),
    (["xstate", "params"], "{", "format"),
    (["xstate", "reconstruct"], json.dumps({"values": [2, 0, 0, 0, 0, 0, 0]}), "invalid_state"),
    (["xstate", "reconstruct"], json.dumps({"vals": []}), "format"),
    (["concurrence"], json.dumps({"basis": "std", "rho": [[[0, 0]] * 4] * 4}), "invalid_state"),
    (["bogus"], "", "usage"),
])
def test_structured_errors(cli, argv, stdin, kind):
    code, _, err = cli(argv, stdin)
    assert code != 0
    assert json.loads(err.strip().splitlines()[-1])["error"] == kind


def test_werner_state_file_round_trip(cli, tmp_path):
    path = tmp_path / "w.json"
    code, _, _ = cli(["xstate", "make", "--werner", "0.3", "--output", str(path)])
    assert code == 0
    np.testing.assert_array_equal(loads_state(path.read_text()), make_werner(0.3))
