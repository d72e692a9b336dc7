import json

import pytest

from cdga import __version__
from cdga.cli import main

FORMAL_DOC = """\
max_degree 10

algebra A
  gen x:2 y:5
  d y = x^3
"""

NONFORMAL_DOC = """\
max_degree 12

algebra H
  gen x:3 y:3 z:5
  d z = x*y
"""

FIBRATION_DOC = """\
max_degree 8

algebra B
  gen u:4 w:7
  d w = u^2

fibration F
  base B
  fiber even 2
  u = u
"""


@pytest.fixture
def formal_file(tmp_path):
    p = tmp_path / "formal.cdga"
    p.write_text(FORMAL_DOC)
    return str(p)


@pytest.fixture
def nonformal_file(tmp_path):
    p = tmp_path / "nonformal.cdga"
    p.write_text(NONFORMAL_DOC)
    return str(p)


@pytest.fixture
def fibration_file(tmp_path):
    p = tmp_path / "fibration.cdga"
    p.write_text(FIBRATION_DOC)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate(formal_file, capsys):
    code, out, err = run(capsys, "validate", formal_file)
    assert code == 0
    assert "validated" in out


def test_validate_reports_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.cdga"
    p.write_text("algebra A\n  gen x:2\n  d x = x +\n")
    code, out, err = run(capsys, "validate", str(p))
    assert code == 1
    assert "error:" in err


def test_missing_file_is_an_error(capsys):
    code, out, err = run(capsys, "validate", "/no/such/file.cdga")
    assert code == 1
    assert "error:" in err


def test_cohomology_text_and_json(formal_file, capsys):
    code, out, _ = run(capsys, "cohomology", formal_file)
    assert code == 0
    assert "betti: [1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0]" in out
    code, out, _ = run(capsys, "cohomology", formal_file, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "cohomology"
    assert payload["result"]["betti"][:6] == [1, 0, 1, 0, 1, 0]
    assert payload["version"] == __version__
    assert set(payload) == {"command", "input", "max_degree", "result",
                            "witnesses", "version"}


def test_minimal_model_output(fibration_file, capsys):
    code, out, _ = run(capsys, "minimal-model", fibration_file, "--block", "B")
    assert code == 0
    assert "minimal model" in out
    assert "v4_0:4" in out and "v7_0:7" in out


def test_formality_exit_codes(formal_file, nonformal_file, capsys):
    code, out, _ = run(capsys, "formality", formal_file)
    assert code == 0
    assert "verdict: Formal" in out
    assert "certificate:" in out
    code, out, _ = run(capsys, "formality", nonformal_file)
    assert code == 2
    assert "verdict: NonFormal" in out
    assert "witness element:" in out


def test_formality_json_contains_witness(nonformal_file, capsys):
    code, out, _ = run(capsys, "formality", nonformal_file, "--json")
    assert code == 2
    payload = json.loads(out)
    assert payload["result"]["verdict"] == "NonFormal"
    wit = payload["witnesses"][0]
    assert wit["kind"] == "massey"
    assert wit["degree"] == 8
    assert wit["element"]


def test_fibration_reduction_output(fibration_file, capsys):
    code, out, _ = run(capsys, "fibration", fibration_file, "--block", "F")
    assert code == 0
    assert "primitive: True" in out
    assert "reduced model" in out
    assert "phi quasi-isomorphism: True" in out


def test_massey_command(nonformal_file, capsys):
    code, out, _ = run(capsys, "massey", nonformal_file, "x", "x", "y")
    assert code == 0
    assert "degree: 8" in out
    assert "contains zero: False" in out


def test_fixture_command_with_checks(capsys):
    code, out, _ = run(capsys, "fixture", "twistor:hpn:1", "--check")
    assert code == 0
    assert "[ok]" in out and "FAIL" not in out


def test_fixture_unknown_name(capsys):
    code, out, err = run(capsys, "fixture", "nope")
    assert code == 1
    assert "error:" in err


def test_max_degree_flag_beats_env(formal_file, capsys, monkeypatch):
    monkeypatch.setenv("CDGA_MAX_DEGREE", "6")
    code, out, _ = run(capsys, "cohomology", formal_file, "--json")
    assert json.loads(out)["max_degree"] == 6
    code, out, _ = run(capsys, "cohomology", formal_file, "--json",
                       "--max-degree", "8")
    assert json.loads(out)["max_degree"] == 8


def test_bad_env_value_is_an_error(formal_file, capsys, monkeypatch):
    monkeypatch.setenv("CDGA_MAX_DEGREE", "many")
    code, out, err = run(capsys, "cohomology", formal_file)
    assert code == 1
    assert "CDGA_MAX_DEGREE" in err
