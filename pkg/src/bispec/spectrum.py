"""Mass spectrum: branch formulas, the statistical dispersion law and virton masses."""

import math
from enum import Enum
from typing import Callable, Dict, Tuple

import numpy as np
from loguru import logger
from scipy import optimize, special

from src.bispec.errors import (
    BracketFailure,
    ComplexBranch,
    DegenerateRoot,
    InvalidInput,
    InvalidModel,
    NoPhysicalRoot,
)
from src.bispec.models import (
    DispersionRoots,
    Family,
    FamilyName,
    MassSolution,
    ModelKind,
    QuantumNumbers,
)

FAMILIES: Dict[FamilyName, Family] = {
    FamilyName.N: Family(name=FamilyName.N, F=1, i=0.5, Y=1, n_offset=1),
    FamilyName.LAMBDA: Family(name=FamilyName.LAMBDA, F=1, i=0.0, Y=0, n_offset=2),
    FamilyName.SIGMA: Family(name=FamilyName.SIGMA, F=1, i=1.0, Y=0, n_offset=2),
    FamilyName.DELTA: Family(name=FamilyName.DELTA, F=1, i=1.5, Y=1, n_offset=3),
    FamilyName.XI: Family(name=FamilyName.XI, F=1, i=0.5, Y=-1, n_offset=5),
    FamilyName.EPSILON: Family(name=FamilyName.EPSILON, F=0, i=0.0, Y=0, n_offset=0),
    FamilyName.RHO: Family(name=FamilyName.RHO, F=0, i=1.0, Y=0, n_offset=2),
    FamilyName.KSTAR: Family(name=FamilyName.KSTAR, F=0, i=0.5, Y=1, n_offset=3),
}

ROOT_TOL = 1e-9
DERIVATIVE_TOL = 1e-12


class Rearrangement(str, Enum):
    """How a dispersion relation is written before its slope is read off."""

    QUADRATIC_FORM = "quadratic_form"
    CURVE_VS_LINE = "curve_vs_line"


def _four_i_i_plus_one(qn: QuantumNumbers) -> int:
    two_i = int(2 * qn.iso)
    return two_i * (two_i + 2)


def f0_sigma(model: ModelKind, qn: QuantumNumbers) -> int:
    """
    Eigenvalue of the mass-squared operator on a skeleton.

    h8: -[(N+4)^2 - Y^2]; h16: -[(N+5)^2 + 7 - 4 i(i+1)].
    """
    if ModelKind(model) == ModelKind.H8:
        return -((qn.N + 4) ** 2 - qn.Y**2)
    return -((qn.N + 5) ** 2 + 7 - _four_i_i_plus_one(qn))


def branch_constants(model: ModelKind, qn: QuantumNumbers) -> Tuple[int, int]:
    """(c1, G) such that the discriminant is mu^4 - 2 mu^2 (N + c1) + G."""
    if ModelKind(model) == ModelKind.H8:
        return 5, qn.Y**2 + 2 * qn.N + 9
    return 6, _four_i_i_plus_one(qn) + 2 * qn.N + 4


def mass_squared(
    model: ModelKind, qn: QuantumNumbers, mu2: float, scale_gev2: float = 1.0
) -> MassSolution:
    """
    Both branches M^2 = 2 mu^2 scale {(N + c1) - mu^2 +/- sqrt(mu^4 - 2 mu^2 (N + c1) + G)}.

    Args:
        model: h8 or h16
        qn: Quantum numbers of the multiplet
        mu2: Temperature parameter mu^2
        scale_gev2: (khc)^2 in GeV^2

    Returns:
        MassSolution with the baryon (+) and meson (-) branch

    Raises:
        ComplexBranch: If the discriminant is negative
    """
    if mu2 <= 0 or scale_gev2 <= 0:
        raise InvalidInput("mu2 and scale_gev2 must be positive")
    model = ModelKind(model)
    c1, G = branch_constants(model, qn)
    shift = qn.N + c1
    discriminant = mu2 * mu2 - 2 * mu2 * shift + G
    if discriminant < 0:
        raise ComplexBranch(
            f"Negative discriminant {discriminant:.6g} for N={qn.N}, i={qn.i}, mu2={mu2}",
            discriminant=discriminant,
        )
    root = math.sqrt(discriminant)
    prefactor = 2 * mu2 * scale_gev2
    return MassSolution(
        m2_baryon=prefactor * (shift - mu2 + root),
        m2_meson=prefactor * (shift - mu2 - root),
        discriminant=discriminant,
        model=model,
    )


def physical_mass(solution: MassSolution, F: int) -> float:
    """Mass in GeV of the branch selected by F."""
    m2 = solution.branch(F)
    if m2 < 0:
        raise NoPhysicalRoot(f"Branch for F={F} has M^2 = {m2:.6g} < 0")
    return math.sqrt(m2)


def mass_gev(
    qn: QuantumNumbers,
    mu2: float,
    model: ModelKind = ModelKind.H16,
    scale_gev2: float = 1.0,
) -> float:
    """Physical mass of a multiplet in GeV."""
    return physical_mass(mass_squared(model, qn, mu2, scale_gev2), qn.F)


def virton_mass_squared(qn: QuantumNumbers, lambda2: int) -> int:
    """Second-space value Lambda^2 [(N+5)^2 + 7 - 4 i(i+1)]; the X-space value is its negative."""
    if qn.F != 1:
        raise InvalidInput("Virton masses are defined for fermions only")
    if lambda2 < 1:
        raise InvalidInput(f"lambda2 must be positive, got {lambda2}")
    return -lambda2 * f0_sigma(ModelKind.H16, qn)


def virton_mass_gev(qn: QuantumNumbers, lambda2: int) -> float:
    """sqrt of the second-space virton value in khc = 1 GeV units."""
    return math.sqrt(virton_mass_squared(qn, lambda2))


def _occupation(F: int) -> Callable[[float], float]:
    """n_f(x) = 1/(exp(x) + (-1)^(F+1)) as a function of x = X / 4 mu^2."""
    if F == 1:
        return lambda x: float(special.expit(-x))
    return lambda x: float(1.0 / np.expm1(x))


def _dispersion_curve(
    qn: QuantumNumbers,
    mu2: float,
    model: ModelKind,
    occupation: bool,
) -> Callable[[float], float]:
    """
    D(X) = (1 + s n)(1 + 2 s n) X^2 + 4 mu^2 (mu^2 - (N + c1)(1 + s n)) X - 4 mu^4 F0.

    s = (-1)^F and n = n_f(X / 4 mu^2); dropping n gives the Boltzmann quadratic.
    """
    c1 = 5 if model == ModelKind.H8 else 6
    shift = qn.N + c1
    constant = -4 * mu2 * mu2 * f0_sigma(model, qn)
    sign = -1 if qn.F == 1 else 1
    n_f = _occupation(qn.F)

    def curve(X: float) -> float:
        n = n_f(X / (4 * mu2)) if occupation else 0.0
        return (
            (1 + sign * n) * (1 + 2 * sign * n) * X * X
            + 4 * mu2 * (mu2 - shift * (1 + sign * n)) * X
            + constant
        )

    return curve


def sign_pattern_of(values: Tuple[float, float]) -> str:
    """Signs of a bracket's end values, e.g. "+-" or "0+"."""
    return "".join("+" if v > 0 else "-" if v < 0 else "0" for v in values)


def exact_dispersion_roots(
    qn: QuantumNumbers,
    mu2: float,
    model: ModelKind = ModelKind.H8,
    occupation: bool = True,
    allow_extrapolated: bool = False,
) -> DispersionRoots:
    """
    Solve the dispersion law with the occupation number substituted self-consistently.

    Each root is found by bisection on [X0/2, 2 X0] around the corresponding
    Boltzmann root X0 of the closed-form branches.

    Args:
        qn: Quantum numbers; F selects Fermi or Bose occupation
        mu2: Temperature parameter in (0, 1)
        model: h8, or h16 when allow_extrapolated is set
        occupation: False forces n_f = 0, reproducing the closed-form branches
        allow_extrapolated: Permit the h16 law obtained by N+5 -> N+6 and the h16 F0

    Returns:
        DispersionRoots, larger root first

    Raises:
        BracketFailure: If a bracket does not change sign
        NoPhysicalRoot: If both roots are nonpositive
    """
    model = ModelKind(model)
    if not 0 < mu2 < 1:
        raise InvalidInput(f"mu2 must lie in (0, 1), got {mu2}")
    extrapolated = model == ModelKind.H16
    if extrapolated and not allow_extrapolated:
        raise InvalidModel("The h16 dispersion law is an extrapolation; pass allow_extrapolated")
    if extrapolated:
        logger.warning("Using the extrapolated h16 dispersion law")

    seeds = mass_squared(model, qn, mu2)
    boltzmann = (seeds.m2_baryon, seeds.m2_meson)
    if max(boltzmann) <= 0:
        raise NoPhysicalRoot(f"Both Boltzmann roots are nonpositive: {boltzmann}")
    curve = _dispersion_curve(qn, mu2, model, occupation)

    roots = []
    for X0 in boltzmann:
        if X0 <= 0:
            roots.append(X0)
            continue
        lo, hi = X0 / 2, 2 * X0
        values = (curve(lo), curve(hi))
        if values[0] * values[1] > 0:
            raise BracketFailure(
                f"No sign change of D on [{lo:.6g}, {hi:.6g}]",
                sign_pattern=sign_pattern_of(values),
            )
        roots.append(optimize.bisect(curve, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200))

    larger, smaller = sorted(roots, reverse=True)
    if larger <= 0:
        raise NoPhysicalRoot(f"Both dispersion roots are nonpositive: {roots}")
    logger.debug(
        f"Dispersion roots N={qn.N} Y={qn.Y} F={qn.F} mu2={mu2}: "
        f"{larger:.6f}, {smaller:.6f} (Boltzmann {boltzmann[0]:.6f}, {boltzmann[1]:.6f})"
    )
    return DispersionRoots(
        roots=(larger, smaller),
        boltzmann_roots=boltzmann,
        F=qn.F,
        model=model,
        occupation=occupation,
        extrapolated=extrapolated,
    )


def dispersion_index(
    qn: QuantumNumbers,
    mu2: float,
    root: float,
    rearrangement: Rearrangement = Rearrangement.QUADRATIC_FORM,
    model: ModelKind = ModelKind.H8,
) -> int:
    """
    Sign of the slope of the dispersion relation at a root of its Boltzmann form.

    quadratic_form reads the slope of D(X); curve_vs_line writes the relation
    as h(x) = (N + c1) x - (x^2 + mu^2 x - F0/4) with x = X / 4 mu^2, which
    flips the sign. Only the opposite signs of the two roots are invariant.

    Raises:
        InvalidInput: If root is not a root to 1e-9
        DegenerateRoot: If the slope vanishes (double root)
    """
    model = ModelKind(model)
    rearrangement = Rearrangement(rearrangement)
    c1 = 5 if model == ModelKind.H8 else 6
    shift = qn.N + c1
    constant = -4 * mu2 * mu2 * f0_sigma(model, qn)

    value = root * root + 4 * mu2 * (mu2 - shift) * root + constant
    scale = max(1.0, root * root, abs(constant))
    if abs(value) > ROOT_TOL * scale:
        raise InvalidInput(f"X={root} is not a root: D(X) = {value:.3e}")

    slope = 2 * root + 4 * mu2 * (mu2 - shift)
    if abs(slope) < DERIVATIVE_TOL:
        raise DegenerateRoot(f"Double root at X={root}")
    if rearrangement == Rearrangement.CURVE_VS_LINE:
        # h = -D / 16 mu^4 in the variable x
        slope = -slope
    return 1 if slope > 0 else -1


def product_ratio_invariant(mu2: float) -> float:
    """
    M_Lambda M_omega / (M_Sigma M_rho) for N = 2, which equals sqrt(7/6) for every mu^2.
    """
    isoscalar = mass_squared(ModelKind.H16, QuantumNumbers(F=1, N=2, Y=0, i=0), mu2)
    isovector = mass_squared(ModelKind.H16, QuantumNumbers(F=1, N=2, Y=0, i=1), mu2)
    m_lambda = physical_mass(isoscalar, F=1)
    m_omega = physical_mass(isoscalar, F=0)
    m_sigma = physical_mass(isovector, F=1)
    m_rho = physical_mass(isovector, F=0)
    return (m_lambda * m_omega) / (m_sigma * m_rho)


def family_quantum_numbers(name: FamilyName, n: int) -> QuantumNumbers:
    """Quantum numbers of the n-th member of a table family."""
    return FAMILIES[FamilyName(name)].quantum_numbers(n)