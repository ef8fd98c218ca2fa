import json
import subprocess
import sys

import pytest

from lorentz_bounds.cli import dumps, run
from lorentz_bounds.finite_space import load_space, space_to_dict

from golden_cases import CHECKS, SPACES, check_key, golden_path, golden_text


def make_space(tmp_path, name):
    out = tmp_path / f"{name}.space.json"
    assert run(SPACES[name][0] + ["--out", str(out)]) == 0
    return out


@pytest.mark.parametrize("name", sorted(SPACES))
def test_golden_in_process(name):
    assert golden_text(name) == golden_path(name).read_text()
    assert golden_text(name) == golden_text(name)


@pytest.mark.parametrize("name", sorted(SPACES))
def test_cli_matches_golden(tmp_path, name):
    golden = json.loads(golden_path(name).read_text())
    space = make_space(tmp_path, name)
    assert dumps(space_to_dict(load_space(space))) == dumps(golden["space"])
    rep = tmp_path / "validate.json"
    assert run(["validate", "--in", str(space), "--out", str(rep)]) == 0
    assert rep.read_text() == dumps(golden["validate"])
    for sense, bound, K in CHECKS[name]:
        want = golden["checks"][check_key(sense, bound, K)]
        code = run(["check", "--in", str(space), "--sense", sense, "--bound", bound, "--k", repr(K),
                    "--out", str(rep)])
        assert rep.read_text() == dumps(want)
        assert code == {"PASS": 0, "FAIL": 1, "VACUOUS": 3}[want["verdict"]]


def test_exit_codes(tmp_path, capsys):
    space = make_space(tmp_path, "flat_lattice")
    assert run(["check", "--in", str(space), "--sense", "triangle", "--bound", "lower", "--k", "0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "PASS" and out["violations"] == []
    assert run(["check", "--in", str(space), "--sense", "four-point-timelike", "--bound", "lower",
                "--k", "-0.5"]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["violations"] and set(out["violations"][0]) == {"ids", "lhs", "rhs"}
    assert run(["check", "--in", str(space), "--sense", "curvature", "--bound", "lower", "--k", "0"]) == 2
    assert "unknown sense" in capsys.readouterr().err
    assert run(["check", "--in", str(space)]) == 2
    assert run([]) == 2


def test_empty_space_and_bad_files(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"points": [], "tau": []}))
    assert run(["validate", "--in", str(empty)]) == 0
    capsys.readouterr()
    assert run(["check", "--in", str(empty), "--sense", "triangle", "--bound", "upper", "--k", "0"]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"points": [{"id": "x"}], "tau": [[0]]}))
    assert run(["validate", "--in", str(bad)]) == 2
    assert "points/0/id" in capsys.readouterr().err
    (tmp_path / "junk.json").write_text("{")
    assert run(["validate", "--in", str(tmp_path / "junk.json")]) == 2
    assert run(["validate", "--in", str(tmp_path / "missing.json")]) == 2


def test_validate_reports_violations(tmp_path, capsys):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"points": [{"id": i} for i in range(3)],
                             "tau": [[0, 1, 1.5], [0, 0, 1], [0, 0, 0]]}))
    assert run(["validate", "--in", str(f)]) == 1
    out = json.loads(capsys.readouterr().out)
    assert {"kind": "reverse_triangle", "witness": [0, 1, 2]} in out["violations"]


def test_estimate_k(tmp_path, capsys):
    space = tmp_path / "ds.json"
    assert run(["lattice", "--k", "1", "--m", "4", "--out", str(space)]) == 0
    assert run(["estimate-k", "--in", str(space), "--sense", "four-point-timelike", "--bound", "lower",
                "--lo", "0", "--hi", "2", "--tol-k", "0.05"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["K_fail"] <= 1.0 <= out["K_pass"] and out["K_pass"] - out["K_fail"] <= 0.05
    sprinkled = tmp_path / "sp.json"
    assert run(["sprinkle", "--k", "0", "--n", "10", "--seed", "1", "--out", str(sprinkled)]) == 0
    assert run(["estimate-k", "--in", str(sprinkled), "--sense", "triangle", "--bound", "lower"]) == 3
    capsys.readouterr()
    assert run(["estimate-k", "--in", str(space), "--sense", "triangle", "--bound", "lower",
                "--lo", "-50", "--hi", "0"]) == 2


def test_cross_validate_and_refine(tmp_path, capsys):
    plan = {"space": {"generator": "lattice", "K": 0.0, "params": {"m": 2}}, "senses": ["triangle", "hinge"],
            "K_grid": [-0.5, 0.0], "bound": "LOWER"}
    p = tmp_path / "plan.json"
    p.write_text(json.dumps(plan))
    csv = tmp_path / "m.csv"
    assert run(["cross-validate", "--plan", str(p), "--csv", str(csv)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdicts"]["TRIANGLE"] == ["FAIL", "PASS"] and out["flagged"] == ["HINGE"]
    assert csv.read_text().startswith("sense,-0.5,0.0\n")
    assert run(["refine", "--k0", "1", "--sense", "angle", "--m-list", "2,4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("m,") and len(lines) == 3


def test_module_entry_point(tmp_path):
    out = tmp_path / "s.json"
    proc = subprocess.run([sys.executable, "-m", "lorentz_bounds", "lattice", "--k", "0", "--m", "1",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0 and out.exists()
    proc = subprocess.run([sys.executable, "-m", "lorentz_bounds", "check", "--in", str(out), "--sense",
                           "triangle", "--bound", "upper", "--k", "0"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"] == "PASS"
