"""Tests for run configuration layering."""

import json

import pytest
from pydantic import ValidationError

from src.bispec.config import ENV_FIELDS, POLICY_ENV_FIELDS, EvalPolicy, RunConfig
from src.bispec.amplitudes import n_factor
from src.bispec.errors import IoError, NonConvergent, ParseError
from src.bispec.models import ModelKind, OutputFormat, QuantumNumbers


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Remove BISPEC_* variables so each test starts from defaults."""
    for var in [*ENV_FIELDS, *POLICY_ENV_FIELDS, "BISPEC_CONFIG"]:
        monkeypatch.delenv(var, raising=False)


def test_defaults():
    """h16, Lambda^2 = 136 and the table mu2 fallback."""
    config = RunConfig()
    assert config.model == ModelKind.H16
    assert config.lambda2 == 136
    assert config.mu2 is None
    assert config.table_mu2 == 0.065
    assert config.n_max == 10
    assert config.format == OutputFormat.MARKDOWN
    assert config.policy.max_terms == 400


def test_from_env(monkeypatch):
    """Environment variables are coerced by the model."""
    monkeypatch.setenv("BISPEC_MODEL", "h8")
    monkeypatch.setenv("BISPEC_MU2", "0.067")
    monkeypatch.setenv("BISPEC_N_MAX", "4")
    config = RunConfig.from_env()
    assert config.model == ModelKind.H8
    assert config.mu2 == 0.067
    assert config.n_max == 4


def test_layers_file_env_flags(monkeypatch, tmp_path):
    """Flags beat the environment, which beats the file."""
    path = tmp_path / "bispec.json"
    path.write_text(json.dumps({"mu2": 0.063, "lambda2": 10, "format": "csv"}))
    monkeypatch.setenv("BISPEC_LAMBDA2", "21")
    config = RunConfig.load(path, {"mu2": 0.066, "n_max": None})
    assert config.mu2 == 0.066
    assert config.lambda2 == 21
    assert config.format == OutputFormat.CSV
    assert config.n_max == 10


def test_config_path_from_env(monkeypatch, tmp_path):
    """BISPEC_CONFIG names the file when no path is given."""
    path = tmp_path / "bispec.json"
    path.write_text(json.dumps({"chi": 0.5}))
    monkeypatch.setenv("BISPEC_CONFIG", str(path))
    assert RunConfig.load().chi == 0.5


def test_invalid_json(tmp_path):
    """Malformed JSON is a parse error with a line number."""
    path = tmp_path / "bad.json"
    path.write_text('{\n  "mu2": ,\n}')
    with pytest.raises(ParseError) as e:
        RunConfig.load(path)
    assert e.value.line == 2


def test_non_object_config(tmp_path):
    """The top level must be an object."""
    path = tmp_path / "list.json"
    path.write_text("[1, 2]")
    with pytest.raises(ParseError):
        RunConfig.from_file(path)


def test_missing_config_file(tmp_path):
    """An unreadable file is an I/O error."""
    with pytest.raises(IoError):
        RunConfig.load(tmp_path / "absent.json")


def test_invalid_values():
    """Out-of-range values are rejected by validation."""
    with pytest.raises(ValidationError):
        RunConfig.load(None, {"mu2": -0.1})
    with pytest.raises(ValidationError):
        RunConfig(lambda2=1)


def test_eval_policy_limits():
    """Positive tolerance and at least one term."""
    with pytest.raises(ValidationError):
        EvalPolicy(target_abs_tol=0)
    with pytest.raises(ValidationError):
        EvalPolicy(max_terms=0)


def test_policy_from_file_reaches_series(tmp_path):
    """A max_terms override in the config file truncates the Bessel series."""
    path = tmp_path / "short.json"
    path.write_text(json.dumps({"policy": {"max_terms": 2}}))
    config = RunConfig.load(path)
    assert config.policy.max_terms == 2
    nucleon = QuantumNumbers(F=1, N=1, Y=1, i=0.5)
    with pytest.raises(NonConvergent):
        n_factor(nucleon, 1.14, 0.067, policy=config.policy)


def test_policy_env_merges_with_file(monkeypatch, tmp_path):
    """BISPEC_TARGET_ABS_TOL overrides one policy field and keeps the file's other."""
    path = tmp_path / "policy.json"
    path.write_text(json.dumps({"policy": {"max_terms": 50}}))
    monkeypatch.setenv("BISPEC_TARGET_ABS_TOL", "1e-8")
    config = RunConfig.load(path)
    assert config.policy.max_terms == 50
    assert config.policy.target_abs_tol == 1e-8
    monkeypatch.setenv("BISPEC_MAX_TERMS", "7")
    assert RunConfig.from_env().policy.max_terms == 7
