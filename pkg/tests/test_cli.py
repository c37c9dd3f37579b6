import json

import pytest

from exforge.cli import EXIT_BUILD, EXIT_MISMATCH, EXIT_OK, main


def _json_lines(out):
    return [json.loads(l) for l in out.strip().splitlines()]


def test_list(capsys):
    assert main(["list"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 42
    assert "6g4 | Z_2×Z_3^3 | (26,26)" in lines
    assert "8g13-z5 | Z_5^3 | (0,124)" in lines


def test_list_all_json(capsys):
    assert main(["--format", "json", "list", "--all"]) == EXIT_OK
    rows = _json_lines(capsys.readouterr().out)
    assert len(rows) > 42
    z4 = [r for r in rows if r["id"] == "z4-remark"][0]
    assert "not-fine" in z4["flags"]


def test_build(capsys, tmp_path):
    out = tmp_path / "c.json"
    assert main(["--format", "json", "build", "C", "--json", str(out)]) == EXIT_OK
    row = _json_lines(capsys.readouterr().out)[0]
    assert row["dim"] == 8 and row["kind"] == "composition"
    assert json.loads(out.read_text())["dim"] == 8


def test_build_constructions(capsys):
    assert main(["--format", "json", "build", "g:pK:pC"]) == EXIT_OK
    assert _json_lines(capsys.readouterr().out)[0]["dim"] == 78
    assert main(["--format", "json", "build", "tits:C:F"]) == EXIT_OK
    assert _json_lines(capsys.readouterr().out)[0]["dim"] == 14


def test_grade(capsys):
    assert main(["--format", "json", "grade", "6g4"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["type"] == [26, 26]
    assert sum(c["dim"] for c in data["components"]) == 78


def test_verify_pass(capsys):
    assert main(["verify", "6g12"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("PASS: 6g12")


def test_identify(capsys):
    assert main(["--format", "json", "identify", "g:pK:pK"]) == EXIT_OK
    row = _json_lines(capsys.readouterr().out)[0]
    assert row["type"] == "A2+A2" and row["simple"] is False and row["semisimple"] is True


@pytest.mark.parametrize("argv", [["verify", "9g99"], ["build", "nope"], ["identify", "C"], ["report", "other"]])
def test_build_errors(argv, capsys):
    assert main(argv) == EXIT_BUILD
    assert "error" in capsys.readouterr().err


def test_export_round_trip_and_mismatch(capsys, tmp_path):
    path = tmp_path / "6g4.json"
    assert main(["export", "6g4", "--json", str(path)]) == EXIT_OK
    capsys.readouterr()
    assert main(["--format", "json", "verify", "6g4", "--from-json", str(path)]) == EXIT_OK
    r = json.loads(capsys.readouterr().out)
    assert r["type"] == [26, 26] and r["ok"]
    # move one component to another degree: the grading check must fail
    data = json.loads(path.read_text())
    comps = data["grading"]["components"]
    comps[0]["degree"] = comps[1]["degree"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert main(["verify", "6g4", "--from-json", str(bad)]) == EXIT_MISMATCH
    assert capsys.readouterr().out.startswith("FAIL")
