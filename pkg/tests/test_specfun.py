"""Tests for the special-function series."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from src.bispec.config import EvalPolicy
from src.bispec.errors import InvalidInput, NonConvergent
from src.bispec.specfun import (
    bessel_derivative_identity,
    bessel_j,
    bessel_j_exact,
    bessel_multiplication_lhs,
    binomial_exact,
    hyp2f1_terminating,
    jacobi_p,
    jacobi_p_exact,
    jacobi_via_hyp2f1_exact,
    laguerre_l,
    laguerre_l_exact,
    pochhammer,
    scaled_bessel_j,
)


def test_bessel_at_zero():
    """J_0(0) = 1 and J_1(0) = 0."""
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0


def test_bessel_j2_reference_value():
    """J_2(1.14) to six places."""
    assert bessel_j(2, 1.14) == pytest.approx(0.1455559, abs=1e-6)


def test_bessel_exact_is_rational():
    """The exact evaluation returns a Fraction."""
    assert isinstance(bessel_j_exact(1, Fraction(1, 2)), Fraction)


@settings(max_examples=40, deadline=None)
@given(
    order=st.integers(min_value=0, max_value=12),
    x=st.floats(min_value=0.0, max_value=20.0, allow_nan=False),
)
def test_bessel_matches_scipy(order, x):
    """The power series agrees with scipy's jv."""
    assert bessel_j(order, x) == pytest.approx(special.jv(order, x), abs=1e-10)


def test_scaled_bessel_is_regular_at_zero():
    """x^-n J_n(x) at 0 is 1/(2^n n!)."""
    assert scaled_bessel_j(0, 0.0) == 1.0
    assert scaled_bessel_j(1, 0.0) == 0.5
    assert scaled_bessel_j(2, 0.0) == pytest.approx(1 / 8)


def test_scaled_bessel_matches_quotient():
    """x^-n J_n(x) away from 0."""
    assert scaled_bessel_j(2, 1.5) == pytest.approx(special.jv(2, 1.5) / 1.5**2, rel=1e-12)


@pytest.mark.parametrize("order,x", [(-1, 1.0), (201, 1.0), (1, -0.5), (1, 51.0)])
def test_bessel_rejects_bad_arguments(order, x):
    """Order and argument ranges are enforced."""
    with pytest.raises(InvalidInput):
        bessel_j(order, x)


def test_bessel_rejects_nonfinite():
    """inf is not a valid argument."""
    with pytest.raises(InvalidInput):
        bessel_j(1, float("inf"))


def test_bessel_nonconvergent_with_tiny_budget():
    """A two-term budget cannot settle the series at x = 20."""
    with pytest.raises(NonConvergent):
        bessel_j(0, 20.0, EvalPolicy(max_terms=2))


@pytest.mark.parametrize("nu,m", [(0, 1), (1, 1), (1, 2), (2, 3)])
@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_bessel_derivative_identity(nu, m, x):
    """Both sides of the derivative identity agree."""
    left, right = bessel_derivative_identity(nu, m, x)
    assert left == pytest.approx(right, rel=1e-10, abs=1e-12)


def test_jacobi_degree_zero():
    """P_0 is 1 for any parameters."""
    assert jacobi_p_exact(0, 3, 2, Fraction(1, 3)) == 1


def test_jacobi_legendre_endpoint():
    """P_2^(0,0)(1) = 1."""
    assert jacobi_p(2, 0, 0, 1.0) == 1.0


def test_jacobi_small_case():
    """P_1^(1,0)(0) = 1/2 exactly."""
    assert jacobi_p_exact(1, 1, 0, 0) == Fraction(1, 2)


@pytest.mark.parametrize("n,alpha,beta", [(1, 0, 0), (3, 1, 2), (4, 2, 0), (5, 0, 3)])
@pytest.mark.parametrize("x", [-0.7, 0.0, 0.3, 0.9])
def test_jacobi_matches_scipy(n, alpha, beta, x):
    """The binomial sum agrees with scipy's eval_jacobi."""
    assert jacobi_p(n, alpha, beta, x) == pytest.approx(
        special.eval_jacobi(n, alpha, beta, x), abs=1e-12
    )


@pytest.mark.parametrize("n,alpha,beta", [(2, 0, 0), (3, 1, 2), (4, 2, 1), (3, 0, 2)])
@pytest.mark.parametrize("x", [Fraction(-1, 2), Fraction(0), Fraction(1, 3), Fraction(3, 4)])
def test_jacobi_gauss_form_agrees(n, alpha, beta, x):
    """The Gauss-series form equals the binomial sum exactly."""
    assert jacobi_via_hyp2f1_exact(n, alpha, beta, x) == jacobi_p_exact(n, alpha, beta, x)


def test_jacobi_gauss_form_excludes_minus_one():
    """x = -1 is outside the Gauss form."""
    with pytest.raises(InvalidInput):
        jacobi_via_hyp2f1_exact(2, 0, 0, -1)


def test_jacobi_rejects_bad_parameters():
    """Negative degree and n + alpha < 0 are rejected."""
    with pytest.raises(InvalidInput):
        jacobi_p(-1, 0, 0, 0.0)
    with pytest.raises(InvalidInput):
        jacobi_p(1, -2, 0, 0.0)


def test_laguerre_values():
    """L_0 = 1, L_1(1) = 0 and L_2^1(2) = -1."""
    assert laguerre_l_exact(0, 3, Fraction(7, 2)) == 1
    assert laguerre_l(1, 0, 1.0) == 0.0
    assert laguerre_l(2, 1, 2.0) == -1.0


@pytest.mark.parametrize("n,alpha", [(3, 0), (4, 2), (6, 1)])
def test_laguerre_matches_scipy(n, alpha):
    """The finite sum agrees with scipy's eval_genlaguerre."""
    assert laguerre_l(n, alpha, 1.7) == pytest.approx(
        special.eval_genlaguerre(n, alpha, 1.7), rel=1e-12
    )


def test_hyp2f1_values():
    """Single-term, two-term and three-term series."""
    assert hyp2f1_terminating(0, 5, 3, 0.9) == 1.0
    assert hyp2f1_terminating(-1, 1, 1, 0.5) == 0.5
    assert hyp2f1_terminating(-2, -1, 2, 1.0) == 2.0


def test_hyp2f1_requires_termination():
    """a > 0 does not terminate."""
    with pytest.raises(InvalidInput):
        hyp2f1_terminating(1, 1, 1, 0.5)


def test_hyp2f1_rejects_vanishing_denominator():
    """(c)_k = 0 for c = 0."""
    with pytest.raises(InvalidInput):
        hyp2f1_terminating(-2, 1, 0, 0.5)


def test_binomial_values():
    """C(5,2) = 10, C(n,0) = 1, C(3,5) = 0."""
    assert binomial_exact(5, 2) == 10
    assert binomial_exact(17, 0) == 1
    assert binomial_exact(3, 5) == 0


def test_binomial_negative_upper():
    """C(-1, k) = (-1)^k."""
    assert [binomial_exact(-1, k) for k in range(4)] == [1, -1, 1, -1]


def test_binomial_rejects_negative_lower():
    """k must be nonnegative."""
    with pytest.raises(InvalidInput):
        binomial_exact(3, -1)


def test_pochhammer():
    """(3)_2 = 12 and (-2)_3 = 0."""
    assert pochhammer(3, 2) == 12
    assert pochhammer(-2, 3) == 0


def test_multiplication_theorem_t_zero():
    """Only the m = 0 term survives at t = 0."""
    assert bessel_multiplication_lhs(1.3, 0.0, 5) == pytest.approx(bessel_j(1, 1.3), abs=1e-15)


@pytest.mark.parametrize("z,t", [(1.0, 0.5), (2.0, -0.5)])
def test_multiplication_theorem(z, t):
    """The series side equals z/(z+t) J_1(z+t)."""
    expected = z / (z + t) * bessel_j(1, z + t)
    assert bessel_multiplication_lhs(z, t, 40) == pytest.approx(expected, abs=1e-10)


def test_multiplication_theorem_rejects_bad_input():
    """z must be positive and terms at least 1."""
    with pytest.raises(InvalidInput):
        bessel_multiplication_lhs(0.0, 0.5, 10)
    with pytest.raises(InvalidInput):
        bessel_multiplication_lhs(1.0, 0.5, 0)
