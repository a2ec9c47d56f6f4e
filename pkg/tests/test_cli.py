import json

import pytest

from pcgen.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_gen_fo(capsys):
    code, out = run_cli(capsys, "gen", "fo", "--input", "00010110")
    doc = json.loads(out)
    assert code == 0 and doc["output"] == "100010110" and doc["w0"] == "1000"


def test_gen_prop(capsys):
    code, out = run_cli(capsys, "gen", "prop", "--input", "000" + "0" * 13, "--system", "sch")
    doc = json.loads(out)
    assert code == 0 and doc["output"].startswith("1000") and doc["step_report"]["ok"]
    code, out = run_cli(capsys, "gen", "prop", "--input", "000" + "0" * 13, "--system", "tt")
    assert json.loads(out)["output"].startswith("0000")


def test_scan_range(capsys, tmp_path):
    out_file = tmp_path / "scan.jsonl"
    code, out = run_cli(capsys, "scan-range", "--n", "3..5", "--out", str(out_file))
    assert code == 0 and json.loads(out)["passed"]
    assert len(out_file.read_text().splitlines()) == 1


def test_hit_test_and_incompleteness(capsys):
    code, _ = run_cli(capsys, "hit-test", "--phi", "BEGINS_WITH_1", "--n", "8,9")
    assert code == 0
    code, out = run_cli(capsys, "incompleteness-demo", "--horizon", "10")
    assert code == 0 and json.loads(out)["results"]["unproved_true"]


def test_hit_test_failure_exit_code(capsys):
    # EVEN_LENGTH misses at n = 8, so the hit assertion fails
    code, _ = run_cli(capsys, "hit-test", "--phi", "EVEN_LENGTH", "--n", "8")
    assert code == 1


def test_translate_formats(capsys):
    code, out = run_cli(capsys, "translate", "--phi", "BEGINS_WITH_1", "--w", "01", "--n", "3")
    assert code == 0 and len(json.loads(out)["atoms"]) == 4
    code, out = run_cli(capsys, "translate", "--phi", "BEGINS_WITH_1", "--w", "01", "--n", "3",
                        "--format", "cnf")
    assert code == 0 and "p cnf" in out


def test_enum_circuits(capsys):
    code, out = run_cli(capsys, "enum-circuits", "--inputs", "1", "--size", "2", "--count")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 6 == doc["closed_form"]
    code, out = run_cli(capsys, "enum-circuits", "--inputs", "2", "--size", "1", "--list", "3")
    assert "g0 = NOT x0" in json.loads(out)["circuits"][2]["text"]


def test_audit_spec_file(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "TRANSLATE_AUDIT", "params": {"max_w": 1, "max_n": 2}, "seed": 3}))
    code, out = run_cli(capsys, "audit", "--spec", str(spec))
    assert code == 0 and json.loads(out)["spec"]["seed"] == 3


def test_config_file_and_env(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"backend": "EMPTY"}))
    code, out = run_cli(capsys, "gen", "fo", "--input", "00010110", "--config", str(cfg))
    assert json.loads(out)["w0"] == "0000"
    other = tmp_path / "other.json"
    other.write_text(json.dumps({"backend": "CERT"}))
    monkeypatch.setenv("PCGEN_CONFIG", str(other))
    code, out = run_cli(capsys, "gen", "fo", "--input", "00010110", "--config", str(cfg))
    assert json.loads(out)["w0"] == "1000"
    # explicit flags beat the file
    code, out = run_cli(capsys, "--backend", "empty", "gen", "fo", "--input", "00010110")
    assert json.loads(out)["w0"] == "0000"


def test_errors_exit_2(capsys):
    assert main(["gen", "fo", "--input", "0021"]) == 2
    assert main(["scan-range", "--n", "30"]) == 2
    with pytest.raises(SystemExit):
        main(["gen", "sat", "--input", "0"])


def test_verifier_named_by_name_or_index(capsys):
    by_name = run_cli(capsys, "translate", "--phi", "SIGMA1_REF", "--param", "begins-with-11",
                      "--w", "0111", "--n", "4")
    by_index = run_cli(capsys, "translate", "--phi", "SIGMA1_REF", "--param", "3",
                       "--w", "0111", "--n", "4")
    assert by_name == by_index and by_name[0] == 0
    code, out = run_cli(capsys, "hit-test", "--phi", "SIGMA1_REF", "--param", "has-a-1-bit",
                        "--n", "12", "--cap", "4")
    assert code == 0 and json.loads(out)["results"]["rows"][0]["hit"]


def test_unknown_verifier_name_is_usage_error(capsys):
    assert main(["hit-test", "--phi", "SIGMA1_REF", "--param", "nope", "--n", "12"]) == 2
    assert "no verifier named" in capsys.readouterr().err
