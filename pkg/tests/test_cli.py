import json

import numpy as np
import pytest

from hillgreen.cli import parse_potential, run
from hillgreen.errors import PotentialDomain


def _json(capsys, argv):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


def test_fundamental(capsys):
    code, out = _json(capsys, ["fundamental", "--potential", "inline:constant:-1"])
    assert code == 0
    assert out["phi1_1"] == pytest.approx(np.cosh(1.0), abs=1e-12)


def test_green_eval(capsys):
    code, out = _json(capsys, ["green", "eval", "--bc", "d", "--potential", "inline:constant:0",
                               "--t", "0.25", "--s", "0.5"])
    assert code == 0
    assert out["G"] == pytest.approx(-0.125, abs=1e-13)


def test_green_table_csv(capsys):
    assert run(["green", "table", "--bc", "p", "--grid", "3", "--out", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "t,s,G,dGdt,dGds" and len(lines) == 10


def test_verify_identity_all(capsys):
    code, rows = _json(capsys, ["verify", "identity", "--all", "--grid", "21"])
    assert code == 0 and len(rows) == 36


def test_resonant_exit(capsys):
    lam = str(1 + np.pi**2)
    assert run(["verify", "identity", "--id", "P_from_D", "--lambda", lam]) == 2


def test_eigen(capsys):
    code, out = _json(capsys, ["eigen", "--bc", "dirichlet", "--potential", "inline:constant:0"])
    assert code == 0
    assert out["lambda0"] == pytest.approx(np.pi**2, abs=1e-6)
    assert set(out) == {"bc", "lambda0", "char_residual"}


def test_not_found_exit(capsys):
    assert run(["eigen", "--bc", "d", "--lambda-max", "-50"]) == 4


def test_hypothesis_exit(capsys):
    assert run(["nonlinear", "distance", "--c", "0.6"]) == 3


def test_usage_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["fundamental", "--bogus"])
    assert exc.value.code == 64


def test_io_exit(capsys, tmp_path):
    assert run(["fundamental", "--potential", str(tmp_path / "missing.json")]) == 5


def test_potential_file(capsys, tmp_path):
    f = tmp_path / "pot.json"
    f.write_text(json.dumps({"kind": "sampled", "samples": [[0, -1], [1, -1]], "interp": "linear"}))
    code, out = _json(capsys, ["fundamental", "--potential", str(f)])
    assert code == 0 and out["phi1_1"] == pytest.approx(np.cosh(1.0), abs=1e-10)


def test_bad_inline_potential():
    with pytest.raises(PotentialDomain):
        parse_potential("inline:tan:1")


def test_example_csv(capsys):
    run(["nonlinear", "example", "--out", "csv"])
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "quantity,computed,paper,rel_err"
    assert {ln.split(",")[0] for ln in lines[1:]} >= {"K1", "K2", "K3", "P_P", "Q_P", "P_D", "Q_D", "threshold"}


def test_output_file(tmp_path, capsys):
    out = tmp_path / "o.json"
    assert run(["zeros", "--basis", "r1", "--lambda", "40", "--potential", "inline:constant:0", "--output", str(out)]) == 0
    # 4 pi^2 < 40 < 9 pi^2
    assert json.loads(out.read_text())["zeros"] == 2
