"""Test the command-line surface and its exit codes."""
import csv
import json

import pytest

from src.exceptions import DomainError
from src.main import EXIT_CONFIG, EXIT_FAILED, EXIT_IO, EXIT_OK, cli_ledger, main
from src.models.run import RunAction

FAST = ["--restarts", "2", "--seed", "5"]


def test_families_lists_catalog():
    assert main(["families", "--points", "3"]) == EXIT_OK


def test_verify_family_grid():
    assert main(["verify", "n3_E2", "--points", "5"]) == EXIT_OK


def test_verify_single_point():
    assert main(["verify", "mix52", "--param", "x=0.5"]) == EXIT_OK


def test_verify_out_of_domain_parameter_fails():
    assert main(["verify", "pi52_asym", "--param", "c0_sq=0.1"]) == EXIT_FAILED


def test_verify_unknown_family():
    assert main(["verify", "n7_nothing"]) == EXIT_CONFIG


def test_verify_malformed_parameter():
    assert main(["verify", "c522", "--param", "t"]) == EXIT_CONFIG


def test_unknown_study_rejected_by_parser():
    with pytest.raises(SystemExit) as exc:
        main(["study", "table-ix"])
    assert exc.value.code == 2


def test_scan_needs_a_problem():
    assert main(["scan", "--K", "2"]) == EXIT_CONFIG


def test_scan_bad_config_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["scan", "--config", str(path)]) == EXIT_CONFIG


def test_scan_config_schema_error(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"problem": {"n": 2, "K": 2}}), encoding="utf-8")
    assert main(["scan", "--config", str(path)]) == EXIT_CONFIG


def test_scan_inconsistent_rank(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"problem": {"n": 2, "K": 5, "paulis": ["IX"]}}), encoding="utf-8")
    assert main(["scan", "--config", str(path)]) == EXIT_CONFIG


def test_scan_unsupported_permutation_size_is_config_error():
    """Test a pi_projector scan beyond the Schur-Weyl range exits cleanly."""
    code = main(["scan", "--paulis", "XIIIIIIII", "--K", "2", "--mode", "pi_projector", *FAST])
    assert code == EXIT_CONFIG
    event = cli_ledger.events_for(RunAction.ERROR_OCCURRED)[-1]
    assert event.subject == "scan"
    assert event.data["error_type"] == "SymmetryError"


def test_scan_domain_error_is_config_error(mocker):
    mocker.patch("src.main.build_problem", side_effect=DomainError("parameter outside domain"))
    assert main(["scan", "--paulis", "IX", "--K", "2", *FAST]) == EXIT_CONFIG
    assert cli_ledger.events_for(RunAction.ERROR_OCCURRED)[-1].data["kind"] == "config_error"


def test_scan_unwritable_output(tmp_path, mocker):
    mocker.patch("pathlib.Path.write_text", side_effect=OSError("disk full"))
    out = tmp_path / "result.json"
    code = main(["scan", "--paulis", "IX", "--K", "2", "--grid", "0", *FAST, "--out", str(out)])
    assert code == EXIT_IO


@pytest.mark.slow
def test_scan_writes_json_with_config_snapshot(tmp_path):
    out = tmp_path / "result.json"
    assert main(["scan", "--paulis", "IX", "--K", "2", "--grid", "0", *FAST, "--out", str(out)]) == EXIT_OK
    document = json.loads(out.read_text(encoding="utf-8"))
    assert document["shape"] == "unclassified"
    assert document["config"]["optimizer"]["seed"] == 5
    assert document["config"]["problem"]["paulis"] == ["IX"]
    assert all(isinstance(row["kl_residual"], str) for row in document["rows"] if row["record"] == "value")

    # a result file reproduces its run
    again = tmp_path / "again.json"
    assert main(["scan", "--config", str(out), "--out", str(again)]) == EXIT_OK
    rerun = json.loads(again.read_text(encoding="utf-8"))
    assert rerun["rows"] == document["rows"]


@pytest.mark.slow
def test_scan_writes_csv(tmp_path):
    out = tmp_path / "result.csv"
    code = main(["scan", "--paulis", "IX", "--K", "2", "--grid", "0", *FAST, "--out", str(out), "--format", "csv"])
    assert code == EXIT_OK
    with out.open(encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    assert rows
    assert {row["record"] for row in rows} == {"value"}
    assert all(row["mode"] == "unrestricted" for row in rows)
