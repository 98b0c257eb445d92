"""Factorized transition amplitudes, their identities, and creation probabilities."""

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from loguru import logger

from src.bispec.config import EvalPolicy
from src.bispec.errors import InvalidInput, InvalidWeights
from src.bispec.models import (
    AmplitudeFactors,
    Family,
    FamilyName,
    ModelKind,
    ModelParams,
    QuantumNumbers,
    VerificationReport,
)
from src.bispec.specfun import (
    binomial_exact,
    bessel_j,
    hyp2f1_terminating_exact,
    jacobi_p_exact,
    scaled_bessel_j,
)
from src.bispec.spectrum import FAMILIES, mass_gev

MAX_MOMENT_ORDER = 60
MAX_BINOMIAL_ARGUMENT = 30

OCTET = (FamilyName.N, FamilyName.LAMBDA, FamilyName.SIGMA, FamilyName.XI)


def invariant_I(X: float, policy: Optional[EvalPolicy] = None) -> float:
    """I(X) = (2/X) J_1(X), equal to 1 at X = 0."""
    if not math.isfinite(X) or X < 0:
        raise InvalidInput(f"X must be finite and nonnegative, got {X}")
    return 2 * scaled_bessel_j(1, X, policy)


def invariant_I_series(X: float, split: float = 0.5, terms: int = 20) -> float:
    """
    Truncated double series of I before the Bessel resummation.

    sum_{n,m} (-a/2)^m / m! * (-b/2)^n / (n! (m+n+1)!) with a + b = X^2 / 2;
    split = a / (a + b) distributes the invariant between the two cone halves.
    """
    if not 0 <= split <= 1:
        raise InvalidInput(f"split must lie in [0, 1], got {split}")
    half = X * X / 2
    a, b = split * half, (1 - split) * half
    return math.fsum(
        (-a / 2) ** m / math.factorial(m) * (-b / 2) ** n
        / (math.factorial(n) * math.factorial(m + n + 1))
        for n in range(terms)
        for m in range(terms)
    )


def moment_coefficient(s: int) -> Fraction:
    """A(s) = 1/(s+1), the cone-measure moment of s momentum factors."""
    if not 0 <= s <= MAX_MOMENT_ORDER:
        raise InvalidInput(f"s must be in 0..{MAX_MOMENT_ORDER}, got {s}")
    return Fraction(1, s + 1)


def moment_monte_carlo(
    s: int, samples: int = 200_000, seed: int = 0, pi0: float = 1.0
) -> Tuple[float, float]:
    """
    Monte-Carlo estimate of A(s) in the frame pi = (0, 0, pi0, pi0).

    There the measure reduces to a uniform Pi_0 on [0, pi0], so A(s) is the
    mean of (Pi_0/pi0)^s.

    Returns:
        (mean, standard error)
    """
    rng = np.random.default_rng(seed)
    values = (rng.uniform(0.0, pi0, size=samples) / pi0) ** s
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(samples))


def alternating_binomial_identity(m: int, n: int) -> VerificationReport:
    """sum_l (-1)^l C(m, l)/(l + n + 1) = m! n! / (m + n + 1)! in exact rationals."""
    if not (0 <= m <= MAX_BINOMIAL_ARGUMENT and 0 <= n <= MAX_BINOMIAL_ARGUMENT):
        raise InvalidInput(f"m and n must be in 0..{MAX_BINOMIAL_ARGUMENT}")
    lhs = sum(
        (Fraction((-1) ** l) * binomial_exact(m, l) / (l + n + 1) for l in range(m + 1)),
        Fraction(0),
    )
    rhs = Fraction(math.factorial(m) * math.factorial(n), math.factorial(m + n + 1))
    return VerificationReport(
        check_id=f"alternating_binomial_m{m}_n{n}",
        passed=lhs == rhs,
        residual_terms=[] if lhs == rhs else [f"{lhs} != {rhs}"],
        details={"lhs": str(lhs), "rhs": str(rhs)},
    )


def _weights(i: Fraction, i0: Fraction, i3: Fraction) -> Tuple[int, int, int]:
    """(i - i0, i - i3, i + i3) as integers, or InvalidWeights."""
    n, down, up = i - i0, i - i3, i + i3
    if any(Fraction(x).denominator != 1 for x in (n, down, up)):
        raise InvalidWeights(f"i - i0 and i -+ i3 must be integers: i={i}, i0={i0}, i3={i3}")
    if n < 0 or down < 0 or up < 0:
        raise InvalidWeights(f"Need i0 <= i and |i3| <= i: i={i}, i0={i0}, i3={i3}")
    return int(n), int(down), int(up)


def laguerre_jacobi_limit_identity(
    i: Fraction, i0: Fraction, i3: Fraction, v1: Fraction, v2: Fraction
) -> VerificationReport:
    """
    Large-v limit of the Laguerre sum: its series, Gauss and Jacobi forms agree exactly.

    series:  (-v2)^n sum_m (-v1/v2)^m / [m! (i0+i3+m)! (n-m)! (i-i3-m)!]
    Gauss:   (-v2)^n / (n! (i-i3)! (i0+i3)!) 2F1(-n, -(i-i3); i0+i3+1; -v1/v2)
    Jacobi:  (v1+v2)^n / ((i-i3)! (i+i3)!) P_n^(i0-i3, i0+i3)((v1-v2)/(v1+v2))
    with n = i - i0.

    Raises:
        InvalidWeights: If a factorial or Jacobi parameter is undefined
    """
    i, i0, i3 = Fraction(i), Fraction(i0), Fraction(i3)
    v1, v2 = Fraction(v1), Fraction(v2)
    n, down, up = _weights(i, i0, i3)
    beta = i0 + i3
    if beta.denominator != 1 or beta < 0:
        raise InvalidWeights(f"i0 + i3 must be a nonnegative integer, got {beta}")
    beta = int(beta)
    alpha = int(i0 - i3)
    if v2 == 0 or v1 + v2 == 0:
        raise InvalidInput("Need v2 != 0 and v1 + v2 != 0")

    ratio = -v1 / v2
    series = Fraction(0)
    for m in range(min(n, down) + 1):
        series += ratio**m / (
            math.factorial(m)
            * math.factorial(beta + m)
            * math.factorial(n - m)
            * math.factorial(down - m)
        )
    series *= (-v2) ** n

    gauss = (
        (-v2) ** n
        / (math.factorial(n) * math.factorial(down) * math.factorial(beta))
        * hyp2f1_terminating_exact(-n, -down, beta + 1, ratio)
    )
    jacobi = (
        (v1 + v2) ** n
        / (math.factorial(down) * math.factorial(up))
        * jacobi_p_exact(n, alpha, beta, (v1 - v2) / (v1 + v2))
    )
    passed = series == gauss == jacobi
    return VerificationReport(
        check_id=f"laguerre_jacobi_i{i}_i0{i0}_i3{i3}",
        passed=passed,
        residual_terms=[] if passed else [f"series={series} gauss={gauss} jacobi={jacobi}"],
        details={"series": str(series), "gauss": str(gauss), "jacobi": str(jacobi)},
    )


def _is_printed_xi(qn: QuantumNumbers) -> bool:
    return qn.F == 1 and qn.N == 5 and qn.Y == -1 and qn.iso == Fraction(1, 2)


def n_factor_exponent(qn: QuantumNumbers, printed_override: bool = False) -> int:
    """2 i1 - 2F - 3 = N - 2F - 1; the printed Xi normalization uses 0."""
    if printed_override and _is_printed_xi(qn):
        return 0
    return qn.N - 2 * qn.F - 1


def n_factor(
    qn: QuantumNumbers,
    mass_gev: float,
    mu2: float,
    printed_override: bool = False,
    policy: Optional[EvalPolicy] = None,
) -> float:
    """
    N = (M/2)^(2 i1 - 2F - 3) J_(2i+1)(M) exp(-M^2 / 4 mu^2).

    Args:
        qn: Quantum numbers with i <= i1 - 1
        mass_gev: Physical mass M
        mu2: Temperature parameter
        printed_override: Use the printed Xi form (exponent 0) for the Xi ground state
        policy: Series policy for the Bessel factor
    """
    if mass_gev <= 0 or mu2 <= 0:
        raise InvalidInput("mass and mu2 must be positive")
    if qn.iso > qn.i1 - 1:
        raise InvalidWeights(f"i={qn.i} exceeds i1 - 1 = {qn.i1 - 1}")
    if printed_override and _is_printed_xi(qn):
        logger.warning("Using the printed Xi normalization instead of the general exponent")
    exponent = n_factor_exponent(qn, printed_override)
    order = int(2 * qn.iso) + 1
    return (
        (mass_gev / 2) ** exponent
        * bessel_j(order, mass_gev, policy)
        * math.exp(-(mass_gev**2) / (4 * mu2))
    )


def n_factor_h8(
    Y: int, X: float, mu2: float, policy: Optional[EvalPolicy] = None
) -> float:
    """h8 reduction sigma X^-|Y| J_|Y|(X) exp(-X^2/4mu^2); sigma is 1 for Y >= 0, else (-1)^Y."""
    sign = 1 if Y >= 0 else (-1) ** Y
    return sign * scaled_bessel_j(abs(Y), X, policy) * math.exp(-X * X / (4 * mu2))


def omega_weight(i: Fraction, i0: Fraction, i3: Fraction) -> float:
    """sqrt((i+i0)! (i-i0)! / ((i+i3)! (i-i3)!))."""
    n, down, up = _weights(i, i0, i3)
    plus = i + i0
    if plus < 0 or plus.denominator != 1:
        raise InvalidWeights(f"i + i0 must be a nonnegative integer, got {plus}")
    return math.sqrt(
        math.factorial(int(plus)) * math.factorial(n) / (math.factorial(up) * math.factorial(down))
    )


def jacobi_argument(z1: complex, z2: complex) -> float:
    """zbar tau_3 z / zbar z = (|z1|^2 - |z2|^2)/(|z1|^2 + |z2|^2)."""
    a, b = abs(z1) ** 2, abs(z2) ** 2
    return (a - b) / (a + b)


def iso_factor(qn: QuantumNumbers, z1: complex, z2: complex) -> complex:
    """
    Isotopic factor of a charge state:

        omega z1^(i0+i3) z2^(i0-i3) / (zbar z)^(i1+i0-F-1) P_(i-i0)^(i0-i3, i0+i3)(x)

    with x = zbar tau_3 z / zbar z.

    The Jacobi polynomial is expanded in |z1|^2 and |z2|^2 so that every power of
    z1 and z2 stays nonnegative; only zbar z appears in denominators.

    Raises:
        InvalidWeights: For inconsistent (i, i0, i3)
    """
    if z1 == 0 and z2 == 0:
        raise InvalidInput("(z1, z2) must not both vanish")
    i, i0, i3 = qn.iso, qn.i0, qn.iso3
    n, down, up = _weights(i, i0, i3)
    omega = omega_weight(i, i0, i3)
    zz = abs(z1) ** 2 + abs(z2) ** 2
    power1 = i0 + i3
    power2 = i0 - i3

    # 2^n P_n(x) (zz)^n = sum_m C(i-i3, m) C(i+i3, n-m) (2|z1|^2)^m (-2|z2|^2)^(n-m)
    total = 0j
    for m in range(n + 1):
        c = binomial_exact(down, m) * binomial_exact(up, n - m)
        if c == 0:
            continue
        e1 = power1 + m
        e2 = power2 + n - m
        total += (
            float(c)
            * (-1) ** (n - m)
            * z1 ** int(e1)
            * np.conj(z1) ** m
            * z2 ** int(e2)
            * np.conj(z2) ** (n - m)
        )
    denominator_power = float(qn.i1 + i0 - qn.F - 1) + n
    return complex(omega * total / zz**denominator_power)


def spinor_components(params: ModelParams) -> Tuple[complex, complex]:
    """(z1, z2) with |z1|^2 + |z2|^2 = zbar z and z1/z2 = |eps| e^(i chi)."""
    z2 = math.sqrt(params.zbar_z / (1 + params.eps_modulus**2))
    z1 = params.eps_modulus * np.exp(1j * params.chi) * z2
    return complex(z1), complex(z2)


def _projections(i: Fraction) -> List[Fraction]:
    """i, i-1, ..., -i."""
    return [i - k for k in range(int(2 * i) + 1)]


def charge_label(family: Family, i3: Fraction) -> str:
    """Member label such as 'p', 'n', 'Sigma+' or 'Delta++'."""
    charge = i3 + Fraction(family.Y, 2)
    if family.name == FamilyName.N:
        return "p" if charge > 0 else "n"
    suffix = {2: "++", 1: "+", 0: "0", -1: "-"}.get(int(charge), str(charge))
    return f"{family.name.value}{suffix}"


def _lorentz_tag(F: int) -> str:
    return "pibar a" if F == 1 else "scalar"


def creation_probabilities(
    params: ModelParams,
    families: Optional[Iterable[FamilyName]] = None,
    n: int = 0,
    printed_override: bool = False,
    policy: Optional[EvalPolicy] = None,
) -> List[AmplitudeFactors]:
    """
    Creation probabilities W = |iso_factor n_factor|^2 of every charge state.

    Args:
        params: Calibrated parameters
        families: Families to include; defaults to the baryon octet
        n: Family member index
        printed_override: Passed through to n_factor
        policy: Series policy for the Bessel factors

    Returns:
        AmplitudeFactors per charge state with raw and sum-normalized probabilities
    """
    names = list(families) if families is not None else list(OCTET)
    z1, z2 = spinor_components(params)
    results: List[AmplitudeFactors] = []
    for name in names:
        family = FAMILIES[FamilyName(name)]
        qn = family.quantum_numbers(n)
        mass = mass_gev(qn, params.mu2, ModelKind.H16, params.scale_gev2)
        norm = n_factor(qn, mass, params.mu2, printed_override, policy)
        for i3 in _projections(qn.iso):
            member = family.quantum_numbers(n, i3=float(i3))
            iso = iso_factor(member, z1, z2)
            results.append(
                AmplitudeFactors(
                    family=family.name,
                    charge_state=charge_label(family, i3),
                    n_factor=norm,
                    iso_factor=iso,
                    lorentz_tag=_lorentz_tag(qn.F),
                    probability=abs(iso) ** 2 * norm**2,
                )
            )

    total = math.fsum(a.probability for a in results)
    for a in results:
        a.normalized_probability = a.probability / total if total > 0 else None
    logger.info(f"Creation probabilities for {len(results)} states, raw sum {total:.4f}")
    return results


def sum_rule_diagnostic(
    params: ModelParams, policy: Optional[EvalPolicy] = None
) -> Dict[str, float]:
    """
    Raw probability sums of the dominant-nucleon form and of the full baryon octet.

    Returns:
        dominant_nucleon, octet_total and the non-nucleon share of the octet total
    """
    nucleon = FAMILIES[FamilyName.N].quantum_numbers(0)
    M_N = mass_gev(nucleon, params.mu2, ModelKind.H16, params.scale_gev2)
    dominant = params.zbar_z * n_factor(nucleon, M_N, params.mu2, policy=policy) ** 2
    states = creation_probabilities(params, OCTET, policy=policy)
    octet_total = math.fsum(a.probability for a in states)
    non_nucleon = math.fsum(a.probability for a in states if a.family != FamilyName.N)
    return {
        "dominant_nucleon": dominant,
        "octet_total": octet_total,
        "non_nucleon_share": non_nucleon / octet_total if octet_total else 0.0,
    }
