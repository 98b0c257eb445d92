"""Tests for the calibration chain."""

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from src.bispec.calibrate import (
    NUCLEON,
    LOrdering,
    L_column,
    build_V,
    calibrate,
    epsilon_modulus,
    eta_parameter,
    form_minimum_slope,
    isovector_A,
    minkowski_norm_exact,
    mu2_minimum,
    mu2_minimum_numeric,
    proton_neutron_ratio,
    unimodular_residuals,
    zbarz_from_sum_rule,
)
from src.bispec.errors import BracketFailure, InvalidInput
from src.bispec.models import ModelParams
from src.bispec.spectrum import mass_gev


def test_mu2_minimum_closed_form():
    """(15 - sqrt(217))/4."""
    assert mu2_minimum() == pytest.approx(0.067270, abs=1e-6)
    assert mu2_minimum() == pytest.approx((15 - math.sqrt(217)) / 4, abs=1e-15)


def test_mu2_minimum_numeric_agrees():
    """brentq on the slope finds the same root."""
    assert mu2_minimum_numeric() == pytest.approx(mu2_minimum(), abs=1e-12)


def test_mu2_minimum_bad_bracket():
    """The bracket must be ordered and positive."""
    with pytest.raises(InvalidInput):
        mu2_minimum_numeric((0.2, 0.1))


def test_mu2_minimum_bracket_without_sign_change():
    """A bracket past the root raises BracketFailure with the sign pattern."""
    with pytest.raises(BracketFailure) as info:
        mu2_minimum_numeric((0.5, 0.9))
    assert info.value.sign_pattern == "--"
    assert info.value.exit_code == 2


def test_least_value_slope_changes_sign():
    """Negative slope below the minimum, positive above."""
    assert form_minimum_slope(0.05) < 0
    assert form_minimum_slope(0.08) > 0


def test_zbarz_from_sum_rule():
    """zbar z at M_N = 1.14, mu2 = 0.067."""
    zbarz = zbarz_from_sum_rule(1.14, 0.067)
    assert zbarz == pytest.approx(8.1e4, rel=0.1)
    assert zbarz / 3 == pytest.approx(0.28e5, rel=0.05)


def test_zbarz_rejects_nonpositive_mass():
    """M_N must be positive."""
    with pytest.raises(InvalidInput):
        zbarz_from_sum_rule(0.0, 0.067)


def test_eta_symmetric_toy():
    """T_f = T_fdot = 1 gives eta = 3."""
    params = ModelParams.from_mu2_zbarz(mu2=3.0, zbar_z=3.0, eps_modulus=1.0)
    assert params.T_f == params.T_fdot == 1.0
    assert eta_parameter(params) == 3.0


def test_model_params_enforce_temperatures():
    """mu2 must equal 3 T_f T_fdot."""
    with pytest.raises(ValueError):
        ModelParams(mu2=1.0, T_f=1.0, T_fdot=1.0, zbar_z=3.0, eps_modulus=1.0)


def test_epsilon_modulus():
    """|epsilon| with an exact radicand."""
    assert epsilon_modulus(136) ** 2 == sp.Rational(137, 135)
    assert float(epsilon_modulus(136)) == pytest.approx(1.0073801, abs=1e-7)
    assert epsilon_modulus(2) == sp.sqrt(3)


def test_epsilon_modulus_rejects_small_lambda():
    """Lambda^2 must be at least 2."""
    with pytest.raises(InvalidInput):
        epsilon_modulus(1)


def test_proton_neutron_ratio():
    """(Lambda^2 + 1)/(Lambda^2 - 1)."""
    assert proton_neutron_ratio(136) == Fraction(137, 135)
    assert proton_neutron_ratio(2) == 3


def test_build_V_at_zero_phase():
    """The calibrated rotation matrix."""
    V = build_V(136, 0.0).V
    expected = np.array(
        [[math.sqrt(135), math.sqrt(137)], [-math.sqrt(137), -math.sqrt(135)]]
    ) / math.sqrt(2)
    assert np.allclose(V, expected, rtol=0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    lambda2=st.integers(min_value=2, max_value=200),
    chi=st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_V_is_unimodular_square_root_of_minus_one(lambda2, chi):
    """V^2 = -1 and det V = 1 for every Lambda^2 and phase."""
    V = build_V(lambda2, chi).V
    det_residual, square_residual = unimodular_residuals(V)
    assert det_residual <= 1e-12
    assert square_residual <= 1e-12
    assert np.allclose(V @ V, -np.eye(2), rtol=0, atol=1e-12 * np.linalg.norm(V) ** 2)


def test_unimodular_residuals_are_relative():
    """The residuals scale with |V|^2, so a 1e-12 bound holds at any Lambda^2."""
    for lambda2 in (2, 136, 10**6):
        det_residual, square_residual = unimodular_residuals(build_V(lambda2, 0.3).V)
        assert max(det_residual, square_residual) < 1e-14
    off = np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex)
    det_residual, square_residual = unimodular_residuals(off)
    assert det_residual == pytest.approx(0.0, abs=1e-15)
    assert square_residual == pytest.approx(math.sqrt(2), rel=1e-12)


def test_isovector_A_at_zero_phase():
    """(sqrt(Lambda^4 - 1), 0, 0, Lambda^2)."""
    A = isovector_A(build_V(136, 0.0))
    assert np.allclose(A, [math.sqrt(136**2 - 1), 0, 0, 136], rtol=0, atol=1e-9)


def test_isovector_A_quarter_phase():
    """At chi = pi/2 the isovector turns into the second component."""
    A = isovector_A(build_V(136, math.pi / 2))
    assert abs(A[0]) < 1e-9
    assert abs(A[1]) == pytest.approx(math.sqrt(136**2 - 1), abs=1e-9)


def test_minkowski_norm_exact():
    """A_0^2 - |A|^2 = 1 exactly."""
    assert minkowski_norm_exact(136) == 1


def test_L_column():
    """L_00 = Lambda^2, L_30 = 0 and |L_+-0| = sqrt(Lambda^4 - 1)."""
    L = L_column(build_V(136, 0.0))
    assert L[0] == pytest.approx(136, abs=1e-9)
    assert abs(L[1]) < 1e-9
    assert abs(L[2]) == pytest.approx(math.sqrt(136**2 - 1), abs=1e-6)
    assert abs(L[3]) == pytest.approx(135.996, abs=1e-3)


def test_L_column_ordering_flips_sign():
    """Inverting V^+ V instead of V V^+ flips L_+0."""
    rot = build_V(136, 0.0)
    first = L_column(rot, LOrdering.V_VDAG)
    second = L_column(rot, LOrdering.VDAG_V)
    assert second[2] == pytest.approx(-first[2])


def test_calibrate_default_run():
    """The default chain passes every check with the expected parameters."""
    result = calibrate()
    params = result.params
    assert result.passed
    assert params.mu2 == pytest.approx(0.067270, abs=1e-6)
    assert result.nucleon_mass_gev == pytest.approx(1.1466, abs=1e-3)
    assert params.zbar_z == pytest.approx(8.76e4, rel=0.02)
    assert params.T_f == pytest.approx(0.78e-6, rel=0.15)
    assert params.eps_modulus**2 == pytest.approx(137 / 135, rel=1e-12)
    assert 1e11 / 1.3 < result.eta < 1e11 * 1.3
    names = {c.name for c in result.checks}
    assert {"V_squared", "det_V", "A_minkowski_norm", "L_column"} <= names


def test_nucleon_mass_at_each_mu2():
    """1.144 GeV at mu2 = 0.067 and 1.1466 GeV at the calibrated minimum."""
    assert mass_gev(NUCLEON, 0.067) == pytest.approx(1.144, abs=1e-3)
    assert mass_gev(NUCLEON, mu2_minimum()) == pytest.approx(1.1466, abs=1e-3)
    assert calibrate(mu2=0.067).nucleon_mass_gev == pytest.approx(1.144, abs=1e-3)


def test_calibrate_report():
    """to_report lists parameters and checks."""
    report = calibrate(mu2=0.065).to_report()
    assert report["params"]["mu2"] == 0.065
    assert report["passed"] is True
    assert all("name" in c for c in report["checks"])


def test_calibrate_rejects_small_lambda():
    """Lambda^2 = 1 has no epsilon."""
    with pytest.raises(InvalidInput):
        calibrate(lambda2=1)
