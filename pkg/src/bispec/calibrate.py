"""Calibration of the free parameters: mu^2, zbar z, temperatures, epsilon and V."""

import math
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
import sympy as sp
from loguru import logger
from scipy import optimize

from src.bispec.config import EvalPolicy
from src.bispec.errors import (
    BracketFailure,
    ConstraintViolation,
    DecompositionResidual,
    InvalidInput,
    SingularMatrix,
)
from src.bispec.models import (
    CalibrationCheck,
    CalibrationResult,
    IsoRotation,
    ModelKind,
    ModelParams,
    QuantumNumbers,
)
from src.bispec.physops.operators import PAULI
from src.bispec.specfun import bessel_j
from src.bispec.spectrum import mass_gev, sign_pattern_of

MATRIX_TOL = 1e-12
COMPONENT_TOL = 1e-9

NUCLEON = QuantumNumbers(F=1, N=1, Y=1, i=0.5)

# tau_0 = 1 followed by the Pauli matrices
TAU = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class LOrdering(str, Enum):
    """Which Hermitian product of V is inverted for L_n0."""

    V_VDAG = "V_Vdag"
    VDAG_V = "Vdag_V"


def form_minimum_value(u: float) -> float:
    """Least value -4 u^2 (u^2 - 10 u + 1) of the branch quadratic at N = -1, i = -1/2."""
    return -4 * u * u * (u * u - 10 * u + 1)


def form_minimum_slope(u: float) -> float:
    """d/du of form_minimum_value, -8 u (2 u^2 - 15 u + 1)."""
    return -8 * u * (2 * u * u - 15 * u + 1)


def mu2_minimum() -> float:
    """
    mu^2 from the minimum principle: the smaller root of 2 u^2 - 15 u + 1 = 0.

    The closed form (15 - sqrt(217))/4 is cross-checked against
    (15/4)(1 - sqrt(1 - 8/225)), and the slope of the least value must
    change from negative to positive across the root.

    Raises:
        ConstraintViolation: If either cross-check fails
    """
    u = (15 - math.sqrt(217)) / 4
    alternative = 15 / 4 * (1 - math.sqrt(1 - 8 / 225))
    if abs(u - alternative) > 1e-14:
        raise ConstraintViolation(f"Closed forms disagree: {u} vs {alternative}")
    if not (form_minimum_slope(0.9 * u) < 0 < form_minimum_slope(1.1 * u)):
        raise ConstraintViolation(f"mu2={u} is not a minimum of the least value")
    return u


def mu2_minimum_numeric(bracket: Tuple[float, float] = (0.01, 0.2)) -> float:
    """
    Minimum-principle root by brentq on the slope within a bracket inside (0, 0.5).

    Raises:
        InvalidInput: If the bracket is not ordered and positive
        BracketFailure: If the slope keeps its sign across the bracket
    """
    lo, hi = bracket
    if not 0 < lo < hi:
        raise InvalidInput(f"Invalid bracket {bracket}")

    # u = 0 is a trivial zero of the slope; drop the factor -8u
    def reduced(u: float) -> float:
        return 2 * u * u - 15 * u + 1

    ends = (reduced(lo), reduced(hi))
    if ends[0] * ends[1] > 0:
        raise BracketFailure(
            f"Slope does not change sign on {bracket}",
            sign_pattern=sign_pattern_of(ends),
        )
    return optimize.brentq(reduced, lo, hi, xtol=1e-15)


def zbarz_from_sum_rule(
    M_N: float, mu2: float, policy: Optional[EvalPolicy] = None
) -> float:
    """
    zbar z from the dominant-nucleon sum rule zbar z (2/M)^4 J_2(M)^2 exp(-M^2/2mu^2) = 1.
    """
    if M_N <= 0:
        raise InvalidInput(f"M_N must be positive, got {M_N}")
    weight = (2 / M_N) ** 4 * bessel_j(2, M_N, policy) ** 2 * math.exp(-(M_N**2) / (2 * mu2))
    return 1 / weight


def eta_parameter(params: ModelParams) -> float:
    """eta = 3 T_fdot / T_f."""
    return 3 * params.T_fdot / params.T_f


def _check_lambda2(lambda2: int) -> None:
    if lambda2 <= 1:
        raise InvalidInput(f"lambda2 must be at least 2, got {lambda2}")


def epsilon_modulus(lambda2: int) -> sp.Expr:
    """|epsilon| = sqrt((Lambda^2 + 1)/(Lambda^2 - 1)) with an exact radicand."""
    _check_lambda2(lambda2)
    return sp.sqrt(sp.Rational(lambda2 + 1, lambda2 - 1))


def proton_neutron_ratio(lambda2: int) -> Fraction:
    """W_p / W_n = |epsilon|^2 = (Lambda^2 + 1)/(Lambda^2 - 1)."""
    _check_lambda2(lambda2)
    return Fraction(lambda2 + 1, lambda2 - 1)


def unimodular_residuals(V: np.ndarray) -> Tuple[float, float]:
    """
    det V - 1 and V^2 + 1 measured on the normalized matrix U = V / |V|.

    With s = |V|^2 (Frobenius) the residuals are |det U - 1/s| and
    |U^2 + 1/s|, i.e. the raw ones divided by s.
    """
    scale = float(np.linalg.norm(V)) ** 2
    U = V / math.sqrt(scale)
    det_residual = abs(np.linalg.det(U) - 1 / scale)
    square_residual = float(np.linalg.norm(U @ U + np.eye(2) / scale))
    return det_residual, square_residual


def build_V(lambda2: int, chi: float = 0.0) -> IsoRotation:
    """
    V = sqrt((L^2-1)/2) [[1, eps], [-conj(eps), -1]] with eps = |eps| e^(i chi).

    Raises:
        ConstraintViolation: If det V != 1 or V^2 != -1 beyond 1e-12 on the normalized matrix
    """
    _check_lambda2(lambda2)
    a = math.sqrt((lambda2 - 1) / 2)
    b = math.sqrt((lambda2 + 1) / 2)
    phase = np.exp(1j * chi)
    V = np.array([[a, b * phase], [-b * np.conj(phase), -a]], dtype=complex)

    det_residual, square_residual = unimodular_residuals(V)
    if det_residual > MATRIX_TOL:
        raise ConstraintViolation(f"det V = {np.linalg.det(V)}, expected 1")
    if square_residual > MATRIX_TOL:
        raise ConstraintViolation("V^2 differs from -1")
    return IsoRotation(V=V, eps=complex(b / a * phase), lambda2=lambda2)


def isovector_A(rot: IsoRotation) -> np.ndarray:
    """
    Components (A_1, A_2, A_3, A_0) of V^+ V = tau_m A_m with tau_0 = 1.

    Raises:
        DecompositionResidual: If V^+ V leaves the real span of the tau_m
        ConstraintViolation: If A_0, A_3 or the Minkowski norm is off
    """
    product = rot.V.conj().T @ rot.V
    coeffs = np.array([np.trace(t @ product) / 2 for t in TAU])
    rebuilt = sum(c * t for c, t in zip(coeffs, TAU))
    residual = max(np.max(np.abs(rebuilt - product)), np.max(np.abs(coeffs.imag)))
    if residual > COMPONENT_TOL:
        raise DecompositionResidual("V^+ V is not a real combination of tau_m")
    A0, A1, A2, A3 = coeffs.real

    lam2 = rot.lambda2
    if abs(A0 - lam2) > COMPONENT_TOL or abs(A3) > COMPONENT_TOL:
        raise ConstraintViolation(f"A_0={A0}, A_3={A3}; expected {lam2}, 0")
    if abs(A1**2 + A2**2 - (lam2**2 - 1)) > COMPONENT_TOL * lam2**2:
        raise ConstraintViolation("A_1^2 + A_2^2 differs from Lambda^4 - 1")
    return np.array([A1, A2, A3, A0])


def isovector_A_exact(lambda2: int) -> Tuple[sp.Expr, sp.Expr, sp.Expr, sp.Expr]:
    """
    (A_1, A_2, A_3, A_0) in exact arithmetic with the phase chi kept symbolic.

    A_0^2 - A_1^2 - A_2^2 - A_3^2 simplifies to 1; in floating point the
    cancellation of Lambda^4 terms costs about seven digits.
    """
    _check_lambda2(lambda2)
    chi = sp.Symbol("chi", real=True)
    a = sp.sqrt(sp.Rational(lambda2 - 1, 2))
    b = sp.sqrt(sp.Rational(lambda2 + 1, 2))
    V = sp.Matrix([[a, b * sp.exp(sp.I * chi)], [-b * sp.exp(-sp.I * chi), -a]])
    product = V.H * V
    taus = [sp.eye(2), *PAULI]
    A0, A1, A2, A3 = (sp.simplify((t * product).trace() / 2) for t in taus)
    return A1, A2, A3, A0


def minkowski_norm_exact(lambda2: int) -> sp.Expr:
    """A_0^2 - |A|^2 from isovector_A_exact, simplified."""
    A1, A2, A3, A0 = isovector_A_exact(lambda2)
    return sp.simplify(sp.expand_complex(A0**2 - A1**2 - A2**2 - A3**2))


def L_column(rot: IsoRotation, ordering: LOrdering = LOrdering.V_VDAG) -> np.ndarray:
    """
    (L_00, L_30, L_+0, L_-0) with L_n0 = 1/2 Tr(tau_n (V V^+)^-1).

    ordering=Vdag_V inverts V^+ V instead, which flips the sign of L_+-0.
    """
    ordering = LOrdering(ordering)
    V = rot.V
    product = V @ V.conj().T if ordering == LOrdering.V_VDAG else V.conj().T @ V
    if abs(np.linalg.det(product)) < MATRIX_TOL:
        raise SingularMatrix("Hermitian product of V is singular")
    inverse = np.linalg.inv(product)
    L0, L1, L2, L3 = (np.trace(t @ inverse) / 2 for t in TAU)
    column = np.array([L0, L3, L1 + 1j * L2, L1 - 1j * L2])

    lam2 = rot.lambda2
    if abs(column[0] - lam2) > COMPONENT_TOL or abs(column[1]) > COMPONENT_TOL:
        raise ConstraintViolation(f"L_00={column[0]}, L_30={column[1]}")
    modulus = math.sqrt(lam2**2 - 1)
    if any(abs(abs(x) - modulus) > COMPONENT_TOL for x in column[2:]):
        raise ConstraintViolation("|L_+-0| differs from sqrt(Lambda^4 - 1)")
    return column


def _check(name: str, passed: bool, value=None, expected=None) -> CalibrationCheck:
    logger.log(
        "DEBUG" if passed else "WARNING",
        f"Calibration check {name}: {'ok' if passed else 'FAILED'}",
    )
    return CalibrationCheck(name=name, passed=passed, value=value, expected=expected)


def calibrate(
    lambda2: int = 136,
    chi: float = 0.0,
    mu2: Optional[float] = None,
    scale_gev2: float = 1.0,
    policy: Optional[EvalPolicy] = None,
) -> CalibrationResult:
    """
    Run the calibration chain.

    mu^2 (minimum principle unless given) -> M_N at that mu^2 -> zbar z from
    the sum rule -> temperatures and eta -> epsilon -> V, A_m and L_n0 checks.

    Returns:
        CalibrationResult; constraint failures are recorded as failed checks
    """
    mu2 = mu2 if mu2 is not None else mu2_minimum()
    M_N = mass_gev(NUCLEON, mu2, ModelKind.H16, scale_gev2)
    zbarz = zbarz_from_sum_rule(M_N, mu2, policy)
    eps = epsilon_modulus(lambda2)
    params = ModelParams.from_mu2_zbarz(
        mu2,
        zbarz,
        float(eps),
        chi=chi,
        lambda2=lambda2,
        scale_gev2=scale_gev2,
    )
    eta = eta_parameter(params)
    logger.info(f"Calibrated mu2={mu2:.6f}, M_N={M_N:.6f}, zbarz={zbarz:.4e}, eta={eta:.3e}")

    checks: List[CalibrationCheck] = [
        _check(
            "mu2_temperatures",
            math.isclose(params.mu2, 3 * params.T_f * params.T_fdot, rel_tol=1e-12),
            params.mu2,
        ),
        _check(
            "eps_modulus_squared",
            eps**2 == sp.Rational(lambda2 + 1, lambda2 - 1),
            str(eps**2),
            f"{lambda2 + 1}/{lambda2 - 1}",
        ),
    ]

    try:
        rot = build_V(lambda2, chi)
        checks.append(_check("det_V", True, float(np.linalg.det(rot.V).real), 1.0))
        checks.append(_check("V_squared", True, "-1", "-1"))
    except ConstraintViolation as e:
        checks.append(_check("V_constraints", False, str(e)))
        return CalibrationResult(params=params, nucleon_mass_gev=M_N, eta=eta, checks=checks)

    try:
        A = isovector_A(rot)
        norm = minkowski_norm_exact(lambda2)
        checks.append(_check("A_components", True, [float(x) for x in A]))
        checks.append(
            _check("A_minkowski_norm", norm == 1, str(norm), "1")
        )
    except (ConstraintViolation, DecompositionResidual) as e:
        checks.append(_check("A_components", False, str(e)))

    try:
        L = L_column(rot)
        checks.append(_check("L_column", True, [str(complex(x)) for x in L]))
        if L[2].real > 0:
            logger.warning("L_+0 carries the opposite overall sign to the printed value")
    except (ConstraintViolation, SingularMatrix) as e:
        checks.append(_check("L_column", False, str(e)))

    return CalibrationResult(params=params, nucleon_mass_gev=M_N, eta=eta, checks=checks)
