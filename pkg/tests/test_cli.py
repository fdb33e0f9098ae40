import json

import pytest

from exclusion_hopf.cli import Report, main, parse_scalar, run
from exclusion_hopf.scalar import cyc_root, rational


def test_spectrum_fermion_limit(capsys):
    code, report = run(["spectrum", "--k", "2", "--type", "fermionic", "--B", "sqrt-half", "--n", "1"])
    assert code == 0
    assert "a_1^2 = 1" in capsys.readouterr().out
    assert report.overall_pass


def test_verify_hopf_passes(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify-hopf", "--k", "3", "--type", "bosonic", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["overall_pass"] and data["command"] == "verify-hopf"
    names = {c["name"].split(" (")[0] for c in data["checks"]}
    assert len({n for n in names if n.startswith("axiom: ")}) >= 14
    assert {c["kind"] for c in data["checks"]} == {"exact", "float"}


def test_verify_hopf_tampered_q1(capsys):
    code, report = run(["verify-hopf", "--k", "3", "--q1", "i"])
    assert code == 1
    assert "failing axioms:" in capsys.readouterr().out
    assert not report.overall_pass


@pytest.mark.parametrize("argv", [
    ["spectrum", "--k", "1"],
    ["spectrum", "--type", "anyonic"],
    ["spectrum", "--B", "minus"],
    ["spectrum", "--k", "3", "--n", "7"],
    ["verify-hopf", "--q1", "2"],
    ["frobnicate"],
    ["confluence", "--max-overlap-len", "2"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    err = capsys.readouterr().err.strip()
    assert err.startswith("error:") and "\n" not in err


def test_malformed_grid(tmp_path):
    bad = tmp_path / "grid.json"
    bad.write_text("{not json")
    assert main(["solve", "--grid", str(bad)]) == 2
    bad.write_text(json.dumps({"k": 2, "bogus": 1}))
    assert main(["solve", "--grid", str(bad)]) == 2


def test_solve_with_grid(tmp_path):
    cfg = tmp_path / "grid.json"
    cfg.write_text(json.dumps({"k": 2, "z_roots": [0], "q1_roots": [0]}))
    code, report = run(["solve", "--grid", str(cfg)])
    assert code == 0
    assert report.parameters["k"] == 2
    assert any("classes (z, Q1): (1, 1)" == n for n in report.notes)


def test_json_is_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["verify-algebra", "--k", "3", "--type", "fermionic", "--json", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    text = paths[0].read_text()
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n" == text


def test_confluence_oscillator_and_t_matrix():
    assert main(["confluence", "--k", "3", "--type", "fermionic"]) == 0
    code, report = run(["confluence", "--k", "2", "--system", "t-matrix"])
    assert code == 1
    assert report.checks[0].residual == "20 failing"


def test_confluence_presentation(tmp_path):
    pres = tmp_path / "p.txt"
    pres.write_text("gen x\ngen y\ny x = zeta(4,1) x y\n")
    assert main(["confluence", "--presentation", str(pres)]) == 0
    pres.write_text("gen x\nx x = y\n")
    assert main(["confluence", "--presentation", str(pres)]) == 2


def test_verify_covariance():
    code, report = run(["verify-covariance", "--k", "2"])
    assert code == 0
    assert any(c.name.startswith("derived identity") for c in report.checks)


def test_report_overall_pass_is_conjunction():
    r = Report("x", {})
    r.exact("a", "0")
    assert r.overall_pass
    r.float("b", 0.5, False)
    assert not r.overall_pass
    r.float("c", float("inf"), True)
    assert r.to_dict()["checks"][-1]["residual"] == "inf"


def test_parse_scalar():
    assert parse_scalar("i") == cyc_root(4, 1)
    assert parse_scalar("-i") == -cyc_root(4, 1)
    assert parse_scalar("-1") == rational(-1)
    assert parse_scalar("zeta(8, 3)") == cyc_root(8, 3)
    assert parse_scalar("3/4") == rational(3) / 4
