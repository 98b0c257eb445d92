"""Tests for the main module."""

import pytest
from fastapi.testclient import TestClient

from src.bispec.api import get_config
from src.bispec.config import EvalPolicy, RunConfig
from src.bispec.main import app

client = TestClient(app)


def test_root_endpoint():
    """Test the root endpoint."""
    response = client.get("/")
    assert response.status_code == 200
    data = response.json()
    assert "message" in data
    assert "version" in data
    assert data["bispec_endpoints"]["table"] == "/bispec/table"


def test_health_endpoint():
    """Test the health endpoint."""
    response = client.get("/health")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "ok"


def test_mass_endpoint():
    """Test the nucleon mass at mu2 = 0.067."""
    response = client.post(
        "/bispec/mass", json={"F": 1, "N": 1, "Y": 1, "i": 0.5, "mu2": 0.067}
    )
    assert response.status_code == 200
    data = response.json()
    assert data["mass_gev"] == pytest.approx(1.144, abs=1e-3)
    assert data["model"] == "h16"


def test_mass_endpoint_complex_branch():
    """Test that a complex branch is a 422."""
    response = client.post("/bispec/mass", json={"F": 0, "N": 0, "mu2": 0.9})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "ComplexBranch"


def test_mass_endpoint_invalid_quantum_numbers():
    """Test that N = -1 without the synthetic flag is a 422."""
    response = client.post("/bispec/mass", json={"F": 1, "N": -1, "i": -0.5})
    assert response.status_code == 422


def test_table_endpoint():
    """Test the table joined to the experimental column."""
    response = client.get("/bispec/table", params={"n_max": 2, "compare": "experimental"})
    assert response.status_code == 200
    data = response.json()
    assert data["mu2"] == 0.065
    assert len(data["rows"]) == 24
    assert data["stats"]["count_compared"] > 0


def test_calibration_endpoint():
    """Test the default calibration."""
    response = client.get("/bispec/calibration")
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True
    assert data["params"]["mu2"] == pytest.approx(0.067270, abs=1e-6)


def test_probabilities_endpoint():
    """Test the octet creation probabilities."""
    response = client.get("/bispec/probabilities")
    assert response.status_code == 200
    data = response.json()
    labels = {s["charge_state"] for s in data["states"]}
    assert {"p", "n", "Sigma+", "Xi-"} <= labels


def test_verify_endpoint():
    """Test the special-function suite."""
    response = client.get("/bispec/verify/specfun")
    assert response.status_code == 200
    assert response.json()["passed"] is True


def test_verify_unknown_suite():
    """Test that an unknown suite is rejected."""
    response = client.get("/bispec/verify/everything")
    assert response.status_code == 422


def test_config_policy_reaches_endpoints():
    """Test that the configured series policy is used by the service."""
    app.dependency_overrides[get_config] = lambda: RunConfig(policy=EvalPolicy(max_terms=2))
    try:
        response = client.get("/bispec/verify/specfun")
        assert response.status_code == 200
        assert response.json()["passed"] is False

        response = client.get("/bispec/probabilities")
        assert response.status_code == 500
        assert response.json()["detail"]["error"] == "NonConvergent"
    finally:
        app.dependency_overrides.clear()
