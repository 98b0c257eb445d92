"""Verification suites aggregating the algebra, special-function and amplitude identity checks."""

import math
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np
from loguru import logger

from src.bispec.amplitudes import (
    alternating_binomial_identity,
    invariant_I,
    invariant_I_series,
    laguerre_jacobi_limit_identity,
    moment_coefficient,
    moment_monte_carlo,
)
from src.bispec.config import EvalPolicy
from src.bispec.errors import BispecError
from src.bispec.models import ModelKind, Suite, SuiteReport, VerificationReport
from src.bispec.physops.checks import (
    distribution_identities,
    eigenvalue_consistency,
    lambda_check,
    operator_contraction_check,
    sigma_tau_completeness,
    verify_generator_forms,
    verify_m2_closed_form,
    verify_sp_basis,
    verify_sp_completeness,
    weighted_eigenvalue_check,
)
from src.bispec.physops.skeletons import OctetMember, SkeletonSpec
from src.bispec.physops.spbasis import build_sp_basis
from src.bispec.specfun import (
    bessel_derivative_identity,
    bessel_j,
    bessel_multiplication_lhs,
    binomial_exact,
    jacobi_p_exact,
    jacobi_via_hyp2f1_exact,
)
from src.bispec.spectrum import product_ratio_invariant

ALTERNATING_MAX = 20
LAGUERRE_WEIGHTS_MAX = 3
LAGUERRE_V_GRID = (1, 2, 3, 5)
MOMENT_ORDERS = (0, 1, 2, 5, 10)
INVARIANT_GRID = tuple(float(x) for x in np.linspace(0.0, 5.0, 50))
INVARIANT_TOL = 1e-10
LAMBDA_DIMENSIONS = (1, 2, 3)


def _report(
    check_id: str, start: float, residuals: List[str], **details
) -> VerificationReport:
    return VerificationReport(
        check_id=check_id,
        passed=not residuals,
        residual_terms=residuals,
        timing_ms=(time.perf_counter() - start) * 1e3,
        details=details,
    )


def _guarded(check_id: str, run: Callable[[], VerificationReport]) -> VerificationReport:
    """Run a check, turning an unexpected domain failure into a failed report."""
    try:
        return run()
    except BispecError as exc:
        logger.error(f"Check {check_id} raised {type(exc).__name__}: {exc}")
        return VerificationReport(
            check_id=check_id, passed=False, residual_terms=[f"{type(exc).__name__}: {exc}"]
        )


def algebra_checks() -> List[VerificationReport]:
    """Mass-operator identities, sp(2n) bases and the central constant for n = 1..3."""
    checks = [
        _guarded(
            "m2_closed_form_exhaustive",
            lambda: verify_m2_closed_form(max_degree=6, exhaustive=True),
        ),
        _guarded("m2_generator_forms", verify_generator_forms),
        _guarded("m2_contraction", operator_contraction_check),
        _guarded("canonical_eigenvalues", eigenvalue_consistency),
        _guarded("sigma_tau_completeness", sigma_tau_completeness),
        _guarded("distribution_identities", distribution_identities),
    ]
    for member in OctetMember:
        skeleton = SkeletonSpec.octet(member)
        checks.append(
            _guarded(
                f"weighted_eigenvalue_{member.value}",
                lambda s=skeleton: weighted_eigenvalue_check(s, ModelKind.H16),
            )
        )
    h8_skeleton = SkeletonSpec.canonical(i=1, m=2, model=ModelKind.H8)
    checks.append(
        _guarded(
            "weighted_eigenvalue_h8",
            lambda: weighted_eigenvalue_check(h8_skeleton, ModelKind.H8),
        )
    )
    for n in LAMBDA_DIMENSIONS:
        checks.append(_guarded(f"sp_basis_n{n}", lambda n=n: verify_sp_basis(n)))
        checks.append(
            _guarded(
                f"sp_completeness_n{n}",
                lambda n=n: verify_sp_completeness(build_sp_basis(n)),
            )
        )
        checks.append(_guarded(f"lambda_n{n}", lambda n=n: lambda_check(n)))
    return checks


def _jacobi_endpoints() -> VerificationReport:
    start = time.perf_counter()
    residuals = []
    for n in range(9):
        for alpha in range(5):
            for beta in range(5):
                if jacobi_p_exact(n, alpha, beta, 1) != binomial_exact(n + alpha, n):
                    residuals.append(f"P_{n}^({alpha},{beta})(1)")
                if jacobi_p_exact(n, alpha, beta, -1) != (-1) ** n * binomial_exact(n + beta, n):
                    residuals.append(f"P_{n}^({alpha},{beta})(-1)")
    return _report("jacobi_endpoints", start, residuals)


def _jacobi_gauss_form() -> VerificationReport:
    start = time.perf_counter()
    residuals = []
    points = [Fraction(k, 7) for k in range(-6, 7)]
    for n in range(7):
        for alpha in range(4):
            for beta in range(4):
                for x in points:
                    direct = jacobi_p_exact(n, alpha, beta, x)
                    if direct != jacobi_via_hyp2f1_exact(n, alpha, beta, x):
                        residuals.append(f"P_{n}^({alpha},{beta})({x})")
    return _report("jacobi_gauss_form", start, residuals, points=len(points))


def _bessel_derivatives(policy: Optional[EvalPolicy] = None) -> VerificationReport:
    start = time.perf_counter()
    residuals = []
    for nu in (0, 1, 2, 5, 10):
        for m in (1, 2, 3):
            for x in (0.5, 2.0, 7.5, 15.0, 20.0):
                left, right = bessel_derivative_identity(nu, m, x, policy)
                gap = abs(left - right)
                if gap > 1e-10 * abs(right) and gap > 1e-12:
                    residuals.append(f"nu={nu} m={m} x={x}: {left!r} vs {right!r}")
    return _report("bessel_derivative_identity", start, residuals)


def _bessel_multiplication(policy: Optional[EvalPolicy] = None) -> VerificationReport:
    start = time.perf_counter()
    residuals = []
    for z in (0.5, 1.0, 2.0, 3.5, 5.0):
        for t in (-1.0, -0.5, 0.0, 0.5, 1.0):
            if z + t <= 0:
                continue
            left = bessel_multiplication_lhs(z, t, 40, policy)
            right = z / (z + t) * bessel_j(1, z + t, policy)
            if abs(left - right) > 1e-9:
                residuals.append(f"z={z} t={t}: {left!r} vs {right!r}")
    return _report("bessel_multiplication", start, residuals)


def specfun_checks(policy: Optional[EvalPolicy] = None) -> List[VerificationReport]:
    """Series oracles of the special-function layer."""
    return [
        _guarded("jacobi_endpoints", _jacobi_endpoints),
        _guarded("jacobi_gauss_form", _jacobi_gauss_form),
        _guarded("bessel_derivative_identity", lambda: _bessel_derivatives(policy)),
        _guarded("bessel_multiplication", lambda: _bessel_multiplication(policy)),
    ]


def _alternating_exhaustive() -> VerificationReport:
    start = time.perf_counter()
    failed = [
        r.check_id
        for m in range(ALTERNATING_MAX + 1)
        for n in range(ALTERNATING_MAX + 1)
        if not (r := alternating_binomial_identity(m, n)).passed
    ]
    return _report("alternating_binomial", start, failed, cases=(ALTERNATING_MAX + 1) ** 2)


def _laguerre_jacobi_grid() -> VerificationReport:
    start = time.perf_counter()
    residuals = []
    cases = 0
    for two_i in range(2 * LAGUERRE_WEIGHTS_MAX + 1):
        i = Fraction(two_i, 2)
        for k0 in range(two_i + 1):
            i0 = i - k0
            for k3 in range(two_i + 1):
                i3 = i - k3
                if i0 + i3 < 0:
                    continue
                for v1 in LAGUERRE_V_GRID:
                    for v2 in LAGUERRE_V_GRID:
                        report = laguerre_jacobi_limit_identity(i, i0, i3, v1, v2)
                        cases += 1
                        residuals.extend(report.residual_terms)
    return _report("laguerre_jacobi_limit", start, residuals, cases=cases)


def _moment_oracle() -> VerificationReport:
    start = time.perf_counter()
    residuals = []
    estimates: Dict[str, float] = {}
    for s in MOMENT_ORDERS:
        mean, stderr = moment_monte_carlo(s, seed=s)
        expected = float(moment_coefficient(s))
        estimates[str(s)] = mean
        if abs(mean - expected) > 3 * stderr + 1e-15:
            residuals.append(f"s={s}: {mean:.6f} vs {expected:.6f} (3 sigma {3 * stderr:.2e})")
    return _report("moment_lemma", start, residuals, estimates=estimates)


def _invariant_series(policy: Optional[EvalPolicy] = None) -> VerificationReport:
    start = time.perf_counter()
    residuals = []
    for X in INVARIANT_GRID:
        closed = invariant_I(X, policy)
        for split in (0.0, 0.5, 1.0):
            series = invariant_I_series(X, split=split, terms=40)
            if abs(series - closed) > INVARIANT_TOL:
                residuals.append(f"X={X} split={split}: {series!r} vs {closed!r}")
    return _report("invariant_I_series", start, residuals, points=len(INVARIANT_GRID))


def _ratio_invariant() -> VerificationReport:
    start = time.perf_counter()
    expected = math.sqrt(7 / 6)
    residuals = []
    for k in range(50):
        mu2 = 0.01 + k * (0.39 / 49)
        value = product_ratio_invariant(mu2)
        if abs(value - expected) > 1e-10:
            residuals.append(f"mu2={mu2:.4f}: {value!r}")
    return _report("product_ratio_invariant", start, residuals, expected=expected)


def identity_checks(policy: Optional[EvalPolicy] = None) -> List[VerificationReport]:
    """Exact amplitude identities and the Monte-Carlo moment oracle."""
    return [
        _guarded("alternating_binomial", _alternating_exhaustive),
        _guarded("laguerre_jacobi_limit", _laguerre_jacobi_grid),
        _guarded("moment_lemma", _moment_oracle),
        _guarded("invariant_I_series", lambda: _invariant_series(policy)),
        _guarded("product_ratio_invariant", _ratio_invariant),
    ]


SUITE_RUNNERS: Dict[Suite, Callable[[Optional[EvalPolicy]], List[VerificationReport]]] = {
    Suite.ALGEBRA: lambda policy: algebra_checks(),
    Suite.SPECFUN: specfun_checks,
    Suite.IDENTITIES: identity_checks,
}


def run_suite(suite: Suite, policy: Optional[EvalPolicy] = None) -> SuiteReport:
    """
    Run one verification suite, or all of them.

    Args:
        suite: algebra, specfun, identities or all
        policy: Series policy for the special-function evaluations

    Returns:
        SuiteReport that passes iff every check passes
    """
    suite = Suite(suite)
    selected = list(SUITE_RUNNERS) if suite == Suite.ALL else [suite]
    checks: List[VerificationReport] = []
    for name in selected:
        logger.info(f"Running {name.value} suite")
        checks.extend(SUITE_RUNNERS[name](policy))
    report = SuiteReport.from_checks(suite, checks)
    failed = [c.check_id for c in checks if not c.passed]
    if failed:
        logger.warning(f"Suite {suite.value}: {len(failed)} of {len(checks)} failed: {failed}")
    else:
        logger.info(f"Suite {suite.value} passed ({len(checks)} checks)")
    return report
