import json
import subprocess
import sys

import pytest

from symcrystal.cli import main, parse_expr


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("expr,want", [
    ("F(1) vac+", "1 * [1]"),
    ("K(1) [1]", "(1/q) * [-1]"),
    ("tE(1) vac+", "0"),
    ("tF(1) vac-", "1 * [-1]"),
    ("sigma [1,1]", "1 * [1,-1]"),
    ("bar [1]", "1 * [1]"),
    ("F(1) [1]", "((q^2+1)/q^2) * [1,1] + ((q^2+1)/q) * [-1,-1]"),
])
def test_apply(capsys, expr, want):
    code, out = run(capsys, "apply", expr)
    assert code == 0 and out.strip() == want


def test_apply_enlarges_window(capsys):
    code, out = run(capsys, "apply", "F(11) vac+")
    assert code == 0 and out.strip() == "1 * [11]"


@pytest.mark.parametrize("argv", [
    ["crystal", "--datum", "aff:3", "--depth", "2"],
    ["crystal", "--datum", "ainf", "--depth", "-1"],
    ["apply", "F(1 vac+"],
    ["apply", "F(1) [1,2]", "--datum", "ainf:3"],
    ["verify", "--suite", "hecke", "--n", "1"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        main(["crystal", "--nope"])
    assert exc.value.code == 2


def test_crystal_json_and_dot(capsys, tmp_path):
    j, d = tmp_path / "g.json", tmp_path / "g.dot"
    code, out = run(capsys, "crystal", "--datum", "ainf", "--depth", "1", "--json", str(j), "--dot", str(d))
    assert code == 0
    data = json.loads(j.read_text())
    assert len(data["nodes"]) == 6 and len(data["edges"]) == 8
    assert set(data) == {"datum", "depth", "nodes", "edges", "sigma", "report"}
    assert set(data["nodes"][0]) == {"id", "weight", "vac_side", "coords", "path"}
    dot = d.read_text()
    assert dot.startswith("digraph") and "style=dashed" in dot
    assert "level 1: 4 nodes" in out


def test_crystal_depth0(capsys, tmp_path):
    j = tmp_path / "g.json"
    assert main(["crystal", "--depth", "0", "--json", str(j)]) == 0
    data = json.loads(j.read_text())
    assert len(data["nodes"]) == 2 and data["edges"] == [] and data["sigma"] == [[0, 1]]


def test_verify_hecke(capsys, tmp_path):
    j = tmp_path / "r.json"
    code, out = run(capsys, "verify", "--suite", "hecke", "--n", "3", "--deg", "1", "--json", str(j))
    assert code == 0 and "all checks pass" in out
    data = json.loads(j.read_text())
    assert data["ok"] and all(c["anchor"] for s in data["suites"] for c in s["checks"])


def test_verify_fault_exit(capsys):
    code, out = run(capsys, "verify", "--suite", "hecke", "--n", "2", "--deg", "1", "--inject-fault", "hecke-cross")
    assert code == 1 and "witness" in out


def test_global_basis_cmd(capsys):
    code, out = run(capsys, "global-basis", "--datum", "aff:2", "--depth", "1")
    assert code == 0 and "G(node 0) = 1 * vac+" in out


def test_parse_expr():
    ops, word = parse_expr("tF(1) F(-3) [1,3]")
    assert ops == [("tF", 1), ("F", -3)] and word == (1, 3)


def test_entry_point():
    r = subprocess.run([sys.executable, "-m", "symcrystal.cli", "apply", "E(1) [1]"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "1 * vac+"
