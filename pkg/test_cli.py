import argparse
import json

import pytest

from src.database import Database
from src.dataset import F_POLY
from src.main import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, resolve_seed
from src.verification import KH_POLY


def write_config(directory, record_runs=False, **overrides):
    config = {
        "log_dir": None,
        "log_level": "WARNING",
        "database_path": str(directory / "runs.db"),
        "record_runs": record_runs,
    }
    config.update(overrides)
    path = directory / "config.json"
    path.write_text(json.dumps(config))
    return str(path)


@pytest.fixture
def config(tmp_path):
    return write_config(tmp_path)


@pytest.fixture(scope="module")
def dataset_file(tmp_path_factory):
    directory = tmp_path_factory.mktemp("dataset")
    path = directory / "example.json"
    code = main(["--config", write_config(directory), "dataset", "generate", "--output", str(path)])
    assert code == EXIT_OK
    return path


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_field_info(capsys, config):
    code, out = run(capsys, "--config", config, "field", "info", "--poly", "[-2, 0, 1]")
    assert code == EXIT_OK
    info = json.loads(out)
    assert info["degree"] == 2
    assert info["signature"] == [2, 0]
    assert info["discriminant"] == "8"
    assert info["certificate"]["verdict"] == "Irreducible"


def test_field_info_without_a_number_field(capsys, config):
    code, out = run(capsys, "--config", config, "field", "info", "--poly", "[1, 0, 2]")
    assert code == EXIT_OK
    info = json.loads(out)
    assert info["discriminant"] == "-8"
    assert info["signature"] == [0, 1]

    code, out = run(capsys, "--config", config, "field", "info", "--poly", "[1, -2, 1]")
    info = json.loads(out)
    assert info["certificate"]["verdict"] == "Reducible"
    assert info["discriminant"] == "0"
    assert info["signature"] is None


def test_field_factor(capsys, config):
    code, out = run(capsys, "--config", config, "field", "factor", "--poly", json.dumps(list(F_POLY)), "--prime", "2")
    assert code == EXIT_OK
    (P,) = json.loads(out)["primes"]
    assert (P["e"], P["f"]) == (8, 1)


def test_field_factor_index_divisor(capsys, config):
    code, out = run(capsys, "--config", config, "field", "factor", "--poly", json.dumps(list(KH_POLY)), "--prime", "2")
    assert code == EXIT_FAIL
    assert json.loads(out)["error"] == "IndexDivisor"


@pytest.mark.parametrize("argv", [
    ["field", "info", "--poly", "1,x"],
    ["field", "factor", "--poly", "[-2, 0, 1]"],
    ["field", "info"],
    ["certify", "--poly", "[-2, 0, 1]", "--group", "alternating:2"],
    ["certify", "--poly", "[-2, 0, 1]", "--group", "cyclic:3"],
    ["orbits", "analyze", "--input", "no/such/file.json"],
    ["frobnicate"],
])
def test_usage_errors(capsys, config, argv):
    code, _ = run(capsys, "--config", config, *argv)
    assert code == EXIT_USAGE


def test_poly_file(capsys, config, tmp_path):
    path = tmp_path / "quadratic.txt"
    path.write_text("# x^2 - 2\n-2, 0,\n1\n")
    code, out = run(capsys, "--config", config, "field", "info", "--poly-file", str(path))
    assert code == EXIT_OK
    assert json.loads(out)["poly"] == [-2, 0, 1]


def test_certify_exit_codes(capsys, config, tmp_path):
    report = tmp_path / "cert.json"
    code, out = run(capsys, "--config", config, "certify", "--poly", "[-2, 0, 1]", "--group", "cyclic:2",
                    "--max-prime", "1000", "--report", str(report))
    assert code == EXIT_OK
    assert "verdict: CONSISTENT" in out
    assert json.loads(report.read_text())["verdict"] == "CONSISTENT"

    trinomial = json.dumps([-1, -1] + [0] * 15 + [1])
    code, out = run(capsys, "--config", config, "certify", "--poly", trinomial, "--group", "frobenius:17",
                    "--max-prime", "10000")
    assert code == EXIT_FAIL
    assert "verdict: CONTRADICTED" in out


def test_runs_are_recorded(capsys, tmp_path):
    config = write_config(tmp_path, record_runs=True)
    run(capsys, "--config", config, "certify", "--poly", "[-2, 0, 1]", "--group", "cyclic:2", "--max-prime", "200")
    run(capsys, "--config", config, "field", "info", "--poly", "1,x")
    db = Database(str(tmp_path / "runs.db"))
    try:
        assert db.get_run_stats() == {"total_runs": 2, "failed_runs": 1, "certifications": 1}
        field_run, certify_run = db.get_recent_runs()
        assert (field_run.command, field_run.summary) == ("field", None)
        assert certify_run.command == "certify"
        assert json.loads(certify_run.summary)["verdict"] == "CONSISTENT"
        (cert,) = db.get_certifications()
        assert (cert.group_name, cert.verdict, cert.max_prime) == ("C2", "CONSISTENT", 200)
        assert db.get_certifications("CONTRADICTED") == []
    finally:
        db.close()
    code, out = run(capsys, "--config", config, "history", "--limit", "5")
    assert code == EXIT_OK
    assert "certify" in out and "field" in out


def test_orbits_analyze_bundled_example(capsys, config, tmp_path):
    report = tmp_path / "orbits.json"
    code, out = run(capsys, "--config", config, "orbits", "analyze", "--report", str(report))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["orbit_action"]["partition"] == [["f", "f'"], ["g", "g'"], ["h"]]
    assert (data["genus"]["total"], data["genus"]["quotient"]) == (40, 16)
    assert data["failures"] == []
    assert json.loads(report.read_text()) == data


def test_orbits_analyze_is_deterministic(capsys, config, dataset_file):
    first = run(capsys, "--config", config, "orbits", "analyze", "--input", str(dataset_file))
    second = run(capsys, "--config", config, "orbits", "analyze", "--input", str(dataset_file))
    assert first[0] == EXIT_OK
    assert first == second


def test_violated_identity_exits_one(capsys, config, dataset_file, tmp_path):
    data = json.loads(dataset_file.read_text())
    data["identities"][1]["tau_image"] = [0, 1, 0, 0]
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(data))
    code, out = run(capsys, "--config", config, "orbits", "analyze", "--input", str(broken))
    assert code == EXIT_FAIL
    assert [f["error"] for f in json.loads(out)["failures"]] == ["HomomorphismViolation"]


@pytest.mark.parametrize("corrupt", [
    lambda d: d["constituents"][0].pop("dim"),
    lambda d: d["constituents"][0].update(dim=5),
    lambda d: d["constituents"][0]["eigenvalues"].update({"2.1": ["1/x", 0, 0, 0]}),
    lambda d: d["identities"][0].update({"to": "nobody"}),
    lambda d: d.pop("base_field"),
])
def test_schema_errors_exit_two(capsys, config, dataset_file, tmp_path, corrupt):
    data = json.loads(dataset_file.read_text())
    corrupt(data)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, _ = run(capsys, "--config", config, "orbits", "analyze", "--input", str(bad))
    assert code == EXIT_USAGE


def test_invalid_json_exits_two(capsys, config, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(capsys, "--config", config, "orbits", "analyze", "--input", str(bad))
    assert code == EXIT_USAGE


def test_seed_precedence(monkeypatch):
    config = {"seed": 42}
    args = argparse.Namespace(seed=5)
    monkeypatch.delenv("HOL_SEED", raising=False)
    assert resolve_seed(argparse.Namespace(seed=None), config) == 42
    assert resolve_seed(args, config) == 5
    monkeypatch.setenv("HOL_SEED", "7")
    assert resolve_seed(args, config) == 7


def test_bad_seed_variable(capsys, config, monkeypatch):
    monkeypatch.setenv("HOL_SEED", "seven")
    code, _ = run(capsys, "--config", config, "field", "info", "--poly", "[-2, 0, 1]")
    assert code == EXIT_USAGE


def test_paper_verify_fields(capsys, config, tmp_path):
    report = tmp_path / "verify.json"
    code, out = run(capsys, "--config", config, "paper-verify", "--section", "fields", "--report", str(report))
    assert code == EXIT_OK
    data = json.loads(report.read_text())
    assert data["summary"]["fail"] == 0
    statuses = {c["id"]: c["status"] for c in data["checks"]}
    assert statuses["fields.tau_g_stated"] == "SKIP"
    assert statuses["fields.tau_g"] == "PASS"
    assert statuses["fields.kh_index_divisor"] == "PASS"


def test_paper_verify_orbits(capsys, config):
    code, out = run(capsys, "--config", config, "paper-verify", "--section", "orbits")
    assert code == EXIT_OK


@pytest.mark.slow
def test_paper_verify_f17(capsys, config):
    code, out = run(capsys, "--config", config, "paper-verify", "--section", "f17")
    assert code == EXIT_OK
