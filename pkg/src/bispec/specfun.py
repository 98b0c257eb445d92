"""Special functions evaluated from their series with exact rational arithmetic."""

import math
from fractions import Fraction
from typing import Callable, Optional, Tuple, Union

from loguru import logger

from src.bispec.config import EvalPolicy
from src.bispec.errors import InvalidInput, NonConvergent

Rational = Union[int, Fraction]
Number = Union[int, float, Fraction]

MAX_BESSEL_ORDER = 200
MAX_BESSEL_ARGUMENT = 50.0

DEFAULT_POLICY = EvalPolicy()


def _as_fraction(x: Number) -> Fraction:
    """Exact rational image of a finite real."""
    if isinstance(x, float) and not math.isfinite(x):
        raise InvalidInput(f"Argument must be finite, got {x}")
    return Fraction(x)


def binomial_exact(n: Rational, k: int) -> Fraction:
    """
    Generalized binomial coefficient n(n-1)...(n-k+1)/k!.

    Args:
        n: Upper argument, any integer or rational
        k: Lower argument, nonnegative

    Returns:
        Exact rational value, an integer whenever n >= k >= 0
    """
    if k < 0:
        raise InvalidInput(f"Binomial lower argument must be nonnegative, got {k}")
    result = Fraction(1)
    for j in range(k):
        result *= Fraction(n) - j
    return result / math.factorial(k)


def _sum_series(
    first: Fraction,
    ratio: Callable[[int], Fraction],
    settled: Callable[[int], bool],
    policy: EvalPolicy,
    label: str,
) -> Fraction:
    """
    Sum a hypergeometric-type series term by term.

    The k-th term is the (k-1)-th times ratio(k). Summation stops once
    settled(k) holds and the current term is below the tolerance.
    """
    total = first
    term = first
    for k in range(1, policy.max_terms):
        if settled(k - 1) and abs(term) < policy.target_abs_tol:
            return total
        term = term * ratio(k)
        total += term
    if abs(term) < policy.target_abs_tol:
        return total
    logger.warning(f"{label}: series did not settle within {policy.max_terms} terms")
    raise NonConvergent(
        f"{label}: |term|={float(abs(term)):.3e} after {policy.max_terms} terms"
    )


def _check_bessel_args(order: int, x: Number) -> Fraction:
    if order < 0 or order > MAX_BESSEL_ORDER:
        raise InvalidInput(f"Bessel order must be in [0, {MAX_BESSEL_ORDER}], got {order}")
    xq = _as_fraction(x)
    if xq < 0:
        raise InvalidInput(f"Bessel argument must be nonnegative, got {x}")
    if xq > MAX_BESSEL_ARGUMENT:
        raise InvalidInput(f"Bessel argument above {MAX_BESSEL_ARGUMENT}: {x}")
    return xq


def bessel_j_exact(order: int, x: Number, policy: Optional[EvalPolicy] = None) -> Fraction:
    """Partial sum of the J_order power series, exact in the rational image of x."""
    policy = policy or DEFAULT_POLICY
    xq = _check_bessel_args(order, x)
    half = xq / 2
    quarter_sq = half * half
    first = half**order / math.factorial(order)
    return _sum_series(
        first,
        lambda k: -quarter_sq / (k * (k + order)),
        # Terms decrease monotonically once k(k+order) exceeds (x/2)^2
        lambda k: (k + 1) * (k + 1 + order) > quarter_sq,
        policy,
        f"J_{order}({float(xq)})",
    )


def bessel_j(order: int, x: float, policy: Optional[EvalPolicy] = None) -> float:
    """
    Bessel function of the first kind from its alternating power series.

    Args:
        order: Nonnegative integer order, at most 200
        x: Nonnegative finite argument, at most 50
        policy: Tolerance and truncation policy

    Returns:
        J_order(x)
    """
    return float(bessel_j_exact(order, x, policy))


def scaled_bessel_j(order: int, x: float, policy: Optional[EvalPolicy] = None) -> float:
    """x^(-order) J_order(x), regular at x = 0 where it equals 1/(2^order order!)."""
    policy = policy or DEFAULT_POLICY
    xq = _check_bessel_args(order, x)
    quarter_sq = xq * xq / 4
    first = Fraction(1, 2**order * math.factorial(order))
    return float(
        _sum_series(
            first,
            lambda k: -quarter_sq / (k * (k + order)),
            lambda k: (k + 1) * (k + 1 + order) > quarter_sq,
            policy,
            f"x^-{order} J_{order}",
        )
    )


def bessel_derivative_identity(
    nu: int, m: int, x: float, policy: Optional[EvalPolicy] = None
) -> Tuple[float, float]:
    """
    Both sides of ((1/X) d/dX)^m [X^-nu J_nu(X)] = (-1)^m X^-(nu+m) J_(nu+m)(X).

    The left side differentiates the power series of X^-nu J_nu term by term;
    the right side comes from scaled_bessel_j.

    Returns:
        (left, right) evaluated at x
    """
    policy = policy or DEFAULT_POLICY
    xq = _check_bessel_args(nu + m, x)
    x2 = xq * xq

    # c_k X^(2k) -> c_k (2k)(2k-2)...(2k-2m+2) X^(2k-2m); k < m terms vanish
    def coefficient(k: int) -> Fraction:
        falling = 1
        for j in range(m):
            falling *= 2 * k - 2 * j
        sign = -1 if k % 2 else 1
        return Fraction(
            sign * falling, math.factorial(k) * math.factorial(k + nu) * 2 ** (2 * k + nu)
        )

    total = Fraction(0)
    for k in range(m, m + policy.max_terms):
        term = coefficient(k) * x2 ** (k - m)
        total += term
        if (k + 1) * (k + 1 + nu) > x2 / 4 and abs(term) < policy.target_abs_tol:
            break
    else:
        raise NonConvergent(f"Derivative series for nu={nu}, m={m} did not settle")

    right = (-1) ** m * scaled_bessel_j(nu + m, x, policy)
    return float(total), right


def jacobi_p_exact(n: int, alpha: int, beta: int, x: Number) -> Fraction:
    """
    Jacobi polynomial from its finite binomial sum.

    P_n^(a,b)(x) = 2^-n sum_m C(n+a, m) C(n+b, n-m) (x-1)^(n-m) (x+1)^m
    """
    if n < 0:
        raise InvalidInput(f"Jacobi degree must be nonnegative, got {n}")
    if n + alpha < 0 or n + beta < 0:
        raise InvalidInput(
            f"Jacobi P_{n}^({alpha},{beta}) needs n+min(alpha,beta) >= 0"
        )
    xq = _as_fraction(x)
    total = Fraction(0)
    for m in range(n + 1):
        total += (
            binomial_exact(n + alpha, m)
            * binomial_exact(n + beta, n - m)
            * (xq - 1) ** (n - m)
            * (xq + 1) ** m
        )
    return total / 2**n


def jacobi_p(n: int, alpha: int, beta: int, x: float) -> float:
    """Floating Jacobi polynomial P_n^(alpha,beta)(x)."""
    return float(jacobi_p_exact(n, alpha, beta, x))


def laguerre_l_exact(n: int, alpha: int, x: Number) -> Fraction:
    """Generalized Laguerre polynomial sum_k (-1)^k C(n+a, n-k) x^k / k!."""
    if n < 0:
        raise InvalidInput(f"Laguerre degree must be nonnegative, got {n}")
    xq = _as_fraction(x)
    return sum(
        (
            (-1) ** k * binomial_exact(n + alpha, n - k) * xq**k / math.factorial(k)
            for k in range(n + 1)
        ),
        Fraction(0),
    )


def laguerre_l(n: int, alpha: int, x: float) -> float:
    """Floating generalized Laguerre polynomial L_n^alpha(x)."""
    return float(laguerre_l_exact(n, alpha, x))


def pochhammer(a: Rational, k: int) -> Fraction:
    """Rising factorial (a)_k."""
    result = Fraction(1)
    for j in range(k):
        result *= Fraction(a) + j
    return result


def hyp2f1_terminating_exact(a: int, b: int, c: int, x: Number) -> Fraction:
    """
    Terminating Gauss series sum_k (a)_k (b)_k / ((c)_k k!) x^k.

    Args:
        a: Nonpositive integer, the series has |a|+1 terms
        b: Integer
        c: Integer with (c)_k nonzero for every needed k
        x: Argument
    """
    if a > 0:
        raise InvalidInput(f"2F1 terminates only for a <= 0, got a={a}")
    xq = _as_fraction(x)
    total = Fraction(0)
    for k in range(-a + 1):
        denominator = pochhammer(c, k) * math.factorial(k)
        if denominator == 0:
            raise InvalidInput(f"2F1 denominator (c)_{k} vanishes for c={c}")
        total += pochhammer(a, k) * pochhammer(b, k) / denominator * xq**k
    return total


def hyp2f1_terminating(a: int, b: int, c: int, x: float) -> float:
    """Floating terminating hypergeometric function."""
    return float(hyp2f1_terminating_exact(a, b, c, x))


def jacobi_via_hyp2f1_exact(n: int, alpha: int, beta: int, x: Number) -> Fraction:
    """
    Jacobi polynomial from its Gauss-series form.

    P_n^(a,b)(x) = 2^-n C(n+a, n) (x+1)^n 2F1(-n, -n-b; a+1; (x-1)/(x+1)), x != -1
    """
    xq = _as_fraction(x)
    if xq == -1:
        raise InvalidInput("Gauss-series form of the Jacobi polynomial needs x != -1")
    return (
        binomial_exact(n + alpha, n)
        * (xq + 1) ** n
        / 2**n
        * hyp2f1_terminating_exact(-n, -n - beta, alpha + 1, (xq - 1) / (xq + 1))
    )


def bessel_multiplication_lhs(
    z: float, t: float, terms: int, policy: Optional[EvalPolicy] = None
) -> float:
    """
    Series side of the Bessel multiplication theorem.

    Evaluates sum_{m=0}^{terms} (-1)^m/m! (t(z+t/2)/z)^m J_{m+1}(z), which
    equals z/(z+t) J_1(z+t).
    """
    policy = policy or DEFAULT_POLICY
    if z <= 0:
        raise InvalidInput(f"z must be positive, got {z}")
    if terms < 1 or terms > policy.max_terms:
        raise InvalidInput(f"terms must be in [1, {policy.max_terms}], got {terms}")
    zq = _as_fraction(z)
    tq = _as_fraction(t)
    u = tq * (zq + tq / 2) / zq
    total = Fraction(0)
    term = Fraction(0)
    for m in range(terms + 1):
        term = (-u) ** m / math.factorial(m) * bessel_j_exact(m + 1, z, policy)
        total += term
    if abs(term) > policy.target_abs_tol:
        raise NonConvergent(
            f"Multiplication series at z={z}, t={t}: last term {float(term):.3e}"
        )
    return float(total)
