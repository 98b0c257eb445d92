"""Tests for the command-line interface."""

import json

import pytest

from src.bispec.cli import main, parse_args
from src.bispec.config import ENV_FIELDS, POLICY_ENV_FIELDS


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Remove BISPEC_* variables so each run starts from defaults."""
    for var in [*ENV_FIELDS, *POLICY_ENV_FIELDS, "BISPEC_CONFIG"]:
        monkeypatch.delenv(var, raising=False)


def test_parse_args_mass():
    """Quantum numbers land on the namespace."""
    args = parse_args(["mass", "--F", "1", "--N", "1", "--Y", "1", "--i", "0.5"])
    assert (args.command, args.F, args.N, args.Y, args.i) == ("mass", 1, 1, 1, 0.5)
    assert args.i3 is None


def test_parse_args_compare_without_path():
    """--compare alone selects the bundled file."""
    args = parse_args(["table", "--compare"])
    assert args.compare == "bundled"


def test_mass_command(capsys):
    """The nucleon at mu2 = 0.067."""
    code = main(["mass", "--F", "1", "--N", "1", "--Y", "1", "--i", "0.5", "--mu2", "0.067"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["mass_gev"] == pytest.approx(1.144, abs=1e-3)
    assert payload["virton_mass_gev"] == pytest.approx(5440**0.5)


def test_mass_complex_branch_exit_code(capsys):
    """A complex branch exits with 2 and reports the discriminant."""
    code = main(["mass", "--F", "0", "--N", "0", "--mu2", "0.9"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 2
    assert payload["error"] == "ComplexBranch"
    assert payload["discriminant"] < 0


def test_mass_invalid_quantum_numbers(capsys):
    """N = -1 without --synthetic is a validation error."""
    code = main(["mass", "--F", "1", "--N", "-1", "--i", "-0.5"])
    assert code == 2
    assert json.loads(capsys.readouterr().out)["error"] == "ValidationError"


def test_table_csv_with_comparison(capsys):
    """CSV on stdout with the statistics block."""
    code = main(["table", "--format", "csv", "--compare", "--n-max", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("family,n,N,theoretical_gev,experimental_gev,abs_dev\n")
    assert "\n\nstatistic,value\n" in out
    assert "worst_cell,N:0" in out


def test_table_to_file(tmp_path, capsys):
    """--output writes the file and leaves stdout empty."""
    target = tmp_path / "table.md"
    code = main(["table", "--n-max", "1", "--output", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8").startswith("## Bare hadron masses")


def test_calibrate_command(capsys):
    """The default calibration passes."""
    code = main(["calibrate"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["passed"] is True


def test_verify_specfun(capsys):
    """The special-function suite passes."""
    code = main(["verify", "--suite", "specfun"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["suite"] == "specfun"
    assert all(c["passed"] for c in payload["checks"])


def test_probabilities_command(capsys):
    """Eight octet states with the sum-rule diagnostic."""
    code = main(["probabilities"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert len(payload["states"]) == 8
    assert payload["sum_rule"]["dominant_nucleon"] == pytest.approx(1.0, rel=1e-6)


def test_params_command(capsys):
    """Flags show up in the effective configuration."""
    code = main(["params", "--model", "h8", "--lambda2", "10"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["model"] == "h8"
    assert payload["lambda2"] == 10


def test_bad_config_file_exit_code(tmp_path, capsys):
    """An unparsable config file exits with 3."""
    path = tmp_path / "bad.json"
    path.write_text("{")
    code = main(["params", "--config", str(path)])
    assert code == 3
    assert json.loads(capsys.readouterr().out)["error"] == "ParseError"


def test_config_policy_reaches_verify_and_probabilities(tmp_path, capsys):
    """max_terms from --config truncates the series behind verify and probabilities."""
    path = tmp_path / "short.json"
    path.write_text(json.dumps({"policy": {"max_terms": 2}}))

    code = main(["verify", "--suite", "specfun", "--config", str(path)])
    payload = json.loads(capsys.readouterr().out)
    assert code == 1
    assert payload["passed"] is False

    code = main(["probabilities", "--config", str(path)])
    assert code == 1
    assert json.loads(capsys.readouterr().out)["error"] == "NonConvergent"
