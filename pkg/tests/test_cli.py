import json
import os

import pytest

from qeslab.cli import run_command


def run_json(capsys, argv):
    code = run_command(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_rep_verify_exit_codes(capsys):
    code, rep = run_json(capsys, ["rep", "verify", "--algebra", "sl2", "--n", "3"])
    assert code == 0 and rep["ok"] and rep["schema"] == 1


def test_param_count_payload(capsys):
    code, rep = run_json(capsys, ["param-count", "--algebra", "sl2",
                                  "--n", "7/2", "--degree", "2"])
    assert code == 0
    assert rep["payload"]["rank"] == 9 and rep["payload"]["paper"] == 9


def test_invariance_failure_exit_code(capsys):
    code, rep = run_json(capsys, ["invariance", "--space", "tri:3",
                                  "--op", "x^3*Dx"])
    assert code == 1
    assert not rep["payload"]["preserved"]
    assert rep["payload"]["escapes"]


def test_usage_error_exit_code(capsys):
    assert run_command(["no-such-command"]) == 2
    assert run_command(["param-count"]) == 2          # missing --algebra
    assert run_command(["parse", "--op", "x +"]) == 2  # syntax error


def test_spectrum_command(capsys):
    code, rep = run_json(capsys, [
        "spectrum", "--algebra", "sl2", "--n", "1",
        "--op", "0 - 4*J0*J- + 4*J0 - 4*J- + 3", "--space", "int:1"])
    assert code == 0
    assert rep["payload"]["charpoly"] == ["1", "-6", "5"]


def test_reduce_csv(tmp_path, capsys):
    out = tmp_path / "red.csv"
    code, rep = run_json(capsys, ["reduce", "--sextic", "n=1,k=0,a=1,b=0",
                                  "--csv", str(out), "--zmax", "1.0"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "z,V,A"
    assert len(lines) > 100


def test_matrix_example_command(capsys):
    code, rep = run_json(capsys, ["matrix-example", "--alpha", "2",
                                  "--beta", "1", "--n", "1"])
    assert code == 0
    p = rep["payload"]
    assert p["preserved"] and p["hermitian"] and p["dimension"] == 3


def test_classify_command(tmp_path, capsys):
    coeffs = tmp_path / "c.json"
    coeffs.write_text(json.dumps({"c_+0": "1", "c_+": "1", "c_0-": "2"}))
    code, rep = run_json(capsys, ["classify", "--algebra", "sl2", "--n", "4",
                                  "--coeffs", str(coeffs)])
    assert code == 0
    hits = rep["payload"]["matched_rules"]
    assert [h["id"] for h in hits] == ["Lemma1.3"]
    assert "interval:1" in rep["payload"]["confirmed_spaces"]


def test_identity_command(capsys):
    code, rep = run_json(capsys, ["identity", "--id", "A12", "--n", "2",
                                  "--q", "3/2"])
    assert code == 0 and rep["ok"]


def test_report_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run_command(["verify", "--suite", "relations",
                            "--seed", "777", "--json", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_env_override(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("QESLAB_SEED", "424242")
    code, rep = run_json(capsys, ["grading", "--algebra", "sl2", "--n", "1",
                                  "--word", "J+"])
    assert code == 0 and rep["seed"] == 424242


def test_burnside_command(capsys):
    code, rep = run_json(capsys, ["burnside", "--degree", "3"])
    assert code == 0
    assert all(r["ok"] for r in rep["payload"]["rows"])
