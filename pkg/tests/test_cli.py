import json
from itertools import product
import subprocess
import sys

import pytest

from bnflow.cli import main

TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_s_trefoil(capsys):
    assert run(capsys, "s", "--pd", TREFOIL, "--coeffs", "Q")[:2] == (0, "2\n")


def test_s_json(capsys):
    code, out, _ = run(capsys, "s", "--pd", "figure_eight", "--coeffs", "F2", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["schema"] == 1 and rep["s"] == 0 and rep["s_max"] - rep["s_min"] == 2


def test_empty_homology(capsys):
    code, out, _ = run(capsys, "homology", "--pd", "")
    assert code == 0
    assert json.loads(out)["groups"] == [{"degree": 0, "rank": 1, "torsion": []}]


def test_khovanov_torsion(capsys):
    code, out, _ = run(capsys, "homology", "--pd", "trefoil", "--theory", "khovanov")
    groups = {g["degree"]: g for g in json.loads(out)["groups"]}
    assert code == 0 and groups[3]["torsion"] == [2]


def test_verify_frames(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "frame-assignments", "--n", "5")
    assert code == 0
    assert "PASS frame-assignments: standard pair n=5  80 2-faces, 40 3-faces" in out
    assert out.rstrip().splitlines()[-1].startswith("PASS")


@pytest.mark.parametrize("argv", [
    ["s", "--pd", "X[1,2,3]"],
    ["s", "--pd", "hopf"],
    ["moves", "--pd", "trefoil", "--script", "__SCRIPT__"],
])
def test_domain_errors_exit_1(capsys, tmp_path, argv):
    script = tmp_path / "m.txt"
    script.write_text("r1+ c1\n")
    argv = [str(script) if a == "__SCRIPT__" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("bnflow: ")


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["s"],
    ["s", "--pd", "trefoil", "--coeffs", "F5"],
    ["verify", "--suite", "nope"],
    ["moves", "--pd", "trefoil", "--script", "/nonexistent/file"],
    ["s", "--pd", "trefoil", "--sign", "random"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_deterministic_output(capsys):
    argv = ["export", "--pd", "figure_eight"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    doc = json.loads(first)
    assert doc["schema"] == 1 and doc["s"] == 0


def test_out_file(capsys, tmp_path):
    target = tmp_path / "c.json"
    code, out, _ = run(capsys, "complex", "--pd", "hopf", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["schema"] == 1


def test_sign_file(capsys, tmp_path):
    from bnflow.cube import standard_sign, vertex_coboundary

    b = {v: int(v in ((0, 0, 0), (1, 0, 1))) for v in product((0, 1), repeat=3)}
    s = standard_sign(3).plus(vertex_coboundary(3, b))
    path = tmp_path / "sign.json"
    path.write_text(json.dumps(s.values))
    code, out, _ = run(capsys, "homology", "--pd", TREFOIL, "--sign", f"file:{path}")
    assert code == 0
    _, ref, _ = run(capsys, "homology", "--pd", TREFOIL)
    assert out == ref
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({k: 0 for k in s.values}))
    assert run(capsys, "homology", "--pd", TREFOIL, "--sign", f"file:{bad}")[0] == 1


def test_flowcat_census(capsys, tmp_path):
    code, out, _ = run(capsys, "flowcat", "--pd", "hopf_negative", "--stage", "eliminated", "--census")
    assert code == 0 and json.loads(out)["objects"] > 0
    script = tmp_path / "s.txt"
    script.write_text("cancel nothing here\n")
    assert run(capsys, "flowcat", "--pd", "hopf", "--script", str(script))[0] == 1


def test_moves_and_canonical(capsys, tmp_path):
    script = tmp_path / "m.txt"
    script.write_text("r1+ e2\nr1+ c4\n")
    code, out, _ = run(capsys, "moves", "--pd", "trefoil", "--script", str(script))
    steps = json.loads(out)["steps"]
    assert code == 0 and all(s["chain_map"] and s["quasi_isomorphism"] for s in steps)
    code, out, _ = run(capsys, "canonical", "--pd", "trefoil", "--script", str(script))
    degrees = {(d["source"], d["target"]): d["degree"] for d in json.loads(out)["degrees"]}
    assert degrees == {("alpha", "alpha"): "1", ("alpha", "beta"): "0",
                       ("beta", "alpha"): "0", ("beta", "beta"): "1"}


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bnflow", "s", "--pd", "trefoil_left"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "-2\n"
