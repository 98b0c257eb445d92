"""Trace-orthonormal bases of sp(n, C) and of the full matrix algebra gl(2n)."""

from fractions import Fraction
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from src.bispec.errors import DegenerateGram, InvalidInput
from src.bispec.symcore.weyl import symplectic_form

MAX_EXACT_N = 3
MAX_N = 8
NUMERIC_TOL = 1e-10
NORMALIZATION = Fraction(1, 2)


def _symmetric_seeds(size: int) -> List[Tuple[int, int]]:
    return [(a, b) for a in range(size) for b in range(a, size)]


def _antisymmetric_seeds(size: int) -> List[Tuple[int, int]]:
    return [(a, b) for a in range(size) for b in range(a + 1, size)]


def _unit_pair(size: int, a: int, b: int, sign: int, exact: bool) -> Any:
    """e_ab + sign * e_ba (a single unit for a == b)."""
    if exact:
        m = sp.zeros(size, size)
    else:
        m = np.zeros((size, size))
    m[a, b] = 1
    if a != b:
        m[b, a] = sign
    return m


def _matmul(x: Any, y: Any, exact: bool) -> Any:
    return x * y if exact else x @ y


def _trace_form(exact: bool) -> Callable[[Any, Any], Any]:
    if exact:
        return lambda x, y: (x * y).trace()
    return lambda x, y: float(np.trace(x @ y))


def _is_zero(value: Any, exact: bool, scale: float = 1.0) -> bool:
    if exact:
        return value == 0
    return abs(value) <= NUMERIC_TOL * scale


def _is_zero_matrix(m: Any, exact: bool) -> bool:
    if exact:
        return m.is_zero_matrix
    return bool(np.max(np.abs(m)) <= NUMERIC_TOL)


def gram_schmidt(seeds: Sequence[Any], exact: bool) -> List[Tuple[Any, Any]]:
    """
    Orthogonalize under the bilinear form Tr(XY).

    The form is not definite, so a candidate with zero norm is skipped in
    favour of one with nonzero norm. When every remaining candidate is
    isotropic, a pair u, w with Tr(uw) != 0 is merged into u + w.

    Args:
        seeds: Linearly spanning candidates
        exact: sympy Matrix seeds when True, numpy arrays otherwise

    Returns:
        List of (direction B_k, norm d_k = Tr(B_k B_k)) with Tr(B_k B_m) = 0 for k != m

    Raises:
        DegenerateGram: If no pivot with nonzero norm can be formed
    """
    form = _trace_form(exact)
    remaining = [s for s in seeds if not _is_zero_matrix(s, exact)]
    ortho: List[Tuple[Any, Any]] = []
    while remaining:
        norms = [form(v, v) for v in remaining]
        if exact:
            pivot_index = next(
                (k for k, d in enumerate(norms) if not _is_zero(d, exact)), None
            )
        else:
            # Largest |d| keeps the floating projection well conditioned
            best = int(np.argmax(np.abs(norms)))
            pivot_index = None if _is_zero(norms[best], exact) else best
        if pivot_index is None:
            pivot_index = _merge_isotropic_pair(remaining, form, exact)
        pivot = remaining.pop(pivot_index)
        d = form(pivot, pivot)
        ortho.append((pivot, d))

        projected = []
        for v in remaining:
            w = v - pivot * (form(v, pivot) / d)
            if not _is_zero_matrix(w, exact):
                projected.append(w)
        remaining = projected
    return ortho


def _merge_isotropic_pair(remaining: List[Any], form: Callable, exact: bool) -> int:
    """Replace one isotropic vector by u + w with Tr((u+w)^2) = 2 Tr(uw) != 0."""
    for k, u in enumerate(remaining):
        for w in remaining[k + 1 :]:
            if not _is_zero(form(u, w), exact):
                logger.debug("Merging an isotropic pair into a pivot")
                remaining[k] = u + w
                return k
    raise DegenerateGram(
        f"Trace form vanishes on all {len(remaining)} remaining candidates"
    )


class SpBasis(BaseModel):
    """
    Orthonormal basis gamma_k = sqrt(c / d_k) B_k with Tr(gamma_k gamma_m) = c delta_km.

    The orthogonal directions B_k are rational (exact mode) or real floating
    matrices; gamma_k may be imaginary when d_k < 0.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int = Field(..., ge=1, le=MAX_N)
    directions: List[Any] = Field(..., description="Orthogonal directions B_k")
    norms: List[Any] = Field(..., description="Tr(B_k B_k)")
    c: Fraction = Field(NORMALIZATION, description="Trace normalization")
    exact: bool = True
    full: bool = Field(False, description="Spans all (2n)x(2n) matrices, not only sp")

    def __len__(self) -> int:
        return len(self.directions)

    @property
    def matrices(self) -> List[Any]:
        """The normalized basis gamma_k."""
        if self.exact:
            c = sp.Rational(self.c.numerator, self.c.denominator)
            return [sp.sqrt(c / d) * B for B, d in zip(self.directions, self.norms)]
        return [
            np.sqrt(complex(float(self.c) / d)) * B
            for B, d in zip(self.directions, self.norms)
        ]

    def weights(self) -> List[Any]:
        """c / d_k, the factor of B_k (x) B_k in gamma_k (x) gamma_k."""
        if self.exact:
            return [Fraction(self.c) / Fraction(int(d.p), int(d.q)) for d in self.norms]
        return [float(self.c) / d for d in self.norms]

    def completeness_tensor(self) -> np.ndarray:
        """T[a, b, c, d] = sum_k (gamma_k)_ab (gamma_k)_cd."""
        return contraction_tensor(self, left=None)


def contraction_tensor(basis: SpBasis, left: Any = None) -> np.ndarray:
    """
    sum_k (L gamma_k)_ab (L gamma_k)_cd for an optional left factor L.

    Exact bases give an object array of Fractions; numeric ones a float array.
    """
    size = 2 * basis.n
    if basis.exact:
        total = np.full((size,) * 4, Fraction(0), dtype=object)
        for B, w in zip(basis.directions, basis.weights()):
            M = left * B if left is not None else B
            entries = [
                (a, b, Fraction(int(M[a, b].p), int(M[a, b].q)))
                for a in range(size)
                for b in range(size)
                if M[a, b] != 0
            ]
            for a, b, x in entries:
                for c_, d, y in entries:
                    total[a, b, c_, d] += w * x * y
        return total
    stack = np.array(basis.directions)
    if left is not None:
        stack = np.einsum("ij,kjl->kil", left, stack)
    return np.einsum("k,kab,kcd->abcd", np.array(basis.weights()), stack, stack)


def _check_n(n: int, exact: bool) -> None:
    if not 1 <= n <= MAX_N:
        raise InvalidInput(f"n must be in 1..{MAX_N}, got {n}")
    if exact and n > MAX_EXACT_N:
        raise InvalidInput(f"Exact construction supports n <= {MAX_EXACT_N}, got {n}")


def _E(n: int, exact: bool) -> Any:
    E = symplectic_form(n)
    return sp.Matrix(E) if exact else E.astype(float)


def build_sp_basis(n: int, exact: Optional[bool] = None) -> SpBasis:
    """
    Build an orthonormal basis of sp(n, C) from the seeds E S, S symmetric.

    Args:
        n: Half the matrix size, 1..8
        exact: Rational arithmetic; defaults to True for n <= 3

    Returns:
        SpBasis with n(2n+1) matrices
    """
    if exact is None:
        exact = n <= MAX_EXACT_N
    _check_n(n, exact)
    size = 2 * n
    E = _E(n, exact)
    seeds = [
        _matmul(E, _unit_pair(size, a, b, 1, exact), exact)
        for a, b in _symmetric_seeds(size)
    ]
    ortho = gram_schmidt(seeds, exact)
    expected = n * (2 * n + 1)
    if len(ortho) != expected:
        raise DegenerateGram(f"Expected {expected} sp directions, got {len(ortho)}")
    logger.debug(f"sp({n}) basis: {expected} matrices, exact={exact}")
    return SpBasis(
        n=n,
        directions=[B for B, _ in ortho],
        norms=[d for _, d in ortho],
        exact=exact,
    )


def build_full_basis(n: int, exact: Optional[bool] = None) -> SpBasis:
    """
    Extend the sp basis by the class E A (A antisymmetric) to all (2n)^2 matrices.

    The unit matrix is orthogonalized first, so the first complement element is
    gamma_0 = sqrt(c / 2n) I.
    """
    sp_part = build_sp_basis(n, exact)
    exact = sp_part.exact
    size = 2 * n
    E = _E(n, exact)
    identity = sp.eye(size) if exact else np.eye(size)
    seeds = [identity] + [
        _matmul(E, _unit_pair(size, a, b, -1, exact), exact)
        for a, b in _antisymmetric_seeds(size)
    ]
    complement = gram_schmidt(seeds, exact)
    expected = n * (2 * n - 1)
    if len(complement) != expected:
        raise DegenerateGram(f"Expected {expected} complement directions, got {len(complement)}")
    return SpBasis(
        n=n,
        directions=[B for B, _ in complement] + sp_part.directions,
        norms=[d for _, d in complement] + sp_part.norms,
        exact=exact,
        full=True,
    )


def is_symplectic(gamma: Any, n: int, exact: bool = True) -> bool:
    """gamma^T E + E gamma = 0."""
    E = _E(n, exact)
    if exact:
        return (gamma.T * E + E * gamma).is_zero_matrix
    return bool(np.allclose(gamma.T @ E + E @ gamma, 0, atol=NUMERIC_TOL))


def closure_residual(basis: SpBasis) -> List[str]:
    """
    Re-expand every bracket [B_i, B_j] in the basis and list nonzero residuals.

    Exact bases only; an empty list means the span is closed under the bracket.
    """
    if not basis.exact:
        raise InvalidInput("Closure is checked in exact arithmetic only")
    residuals = []
    B = basis.directions
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            bracket = B[i] * B[j] - B[j] * B[i]
            expansion = sp.zeros(*bracket.shape)
            for Bk, dk in zip(B, basis.norms):
                coeff = (bracket * Bk).trace() / dk
                if coeff != 0:
                    expansion += coeff * Bk
            if not (bracket - expansion).is_zero_matrix:
                residuals.append(f"[B{i}, B{j}]")
    return residuals
