"""Normal ordering in the Weyl algebra [phi_a, phi_b] = Lambda E_ab."""

import random
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from loguru import logger

from src.bispec.errors import DegreeCapExceeded, InvalidInput

MAX_WORD_LENGTH = 8

Word = Tuple[int, ...]
# (word, power of the central symbol Lambda)
TermKey = Tuple[Word, int]


def symplectic_form(n: int) -> np.ndarray:
    """Block form E = [[0, I_n], [-I_n, 0]] as an integer matrix."""
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    eye = np.eye(n, dtype=int)
    zero = np.zeros((n, n), dtype=int)
    return np.block([[zero, eye], [-eye, zero]])


class WeylExpr:
    """
    Sum of words in generators phi_1..phi_2n with coefficients polynomial in Lambda.

    Coefficients may be any exact or floating number type; a term is stored
    under (word, Lambda power). Generators are 1-based.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Dict[TermKey, Any]] = None):
        self.n = n
        self.terms: Dict[TermKey, Any] = {
            key: c for key, c in (terms or {}).items() if c != 0
        }

    @classmethod
    def generator(cls, n: int, index: int) -> "WeylExpr":
        if not 1 <= index <= 2 * n:
            raise InvalidInput(f"Generator index {index} outside 1..{2 * n}")
        return cls(n, {((index,), 0): 1})

    @classmethod
    def scalar(cls, n: int, value: Any, lambda_power: int = 0) -> "WeylExpr":
        return cls(n, {((), lambda_power): value})

    @classmethod
    def quadratic_form(cls, matrix: Any, n: int) -> "WeylExpr":
        """sum_ab M_ab phi_a phi_b as written, not yet normal-ordered."""
        size = 2 * n
        terms: Dict[TermKey, Any] = {}
        for a in range(size):
            for b in range(size):
                c = matrix[a, b]
                if c != 0:
                    terms[((a + 1, b + 1), 0)] = c
        return cls(n, terms)

    def __add__(self, other: "WeylExpr") -> "WeylExpr":
        merged = dict(self.terms)
        for key, c in other.terms.items():
            merged[key] = merged.get(key, 0) + c
        return WeylExpr(self.n, merged)

    def __mul__(self, other: "WeylExpr") -> "WeylExpr":
        """Word concatenation; the result is generally not normal-ordered."""
        product: Dict[TermKey, Any] = {}
        for (w1, p1), c1 in self.terms.items():
            for (w2, p2), c2 in other.terms.items():
                key = (w1 + w2, p1 + p2)
                product[key] = product.get(key, 0) + c1 * c2
        return WeylExpr(self.n, product)

    def scale(self, factor: Any) -> "WeylExpr":
        return WeylExpr(self.n, {k: c * factor for k, c in self.terms.items()})

    def is_canonical(self) -> bool:
        """Every word has non-decreasing generator indices."""
        return all(list(w) == sorted(w) for (w, _) in self.terms)

    def scalar_part(self) -> Dict[int, Any]:
        """Coefficients of the empty word by Lambda power."""
        return {p: c for (w, p), c in self.terms.items() if not w}

    def residual_terms(self, tol: float = 0.0) -> List[str]:
        """Nonempty words whose coefficient magnitude exceeds tol."""
        return [
            f"{c} * Lambda^{p} * " + "".join(f"phi{i}" for i in w)
            for (w, p), c in sorted(self.terms.items())
            if w and abs(c) > tol
        ]

    def max_degree(self) -> int:
        return max((len(w) for (w, _) in self.terms), default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeylExpr):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (w, p), c in sorted(self.terms.items()):
            factor = f"L^{p}" if p else ""
            body = "".join(f"phi{i}" for i in w)
            parts.append(f"({c}){factor}{body}")
        return " + ".join(parts)


def _descents(word: Word) -> List[int]:
    return [p for p in range(len(word) - 1) if word[p] > word[p + 1]]


def normal_order(
    expr: WeylExpr,
    strategy: str = "leftmost",
    seed: Optional[int] = None,
    max_length: int = MAX_WORD_LENGTH,
) -> WeylExpr:
    """
    Bring an expression to canonical normal order.

    Adjacent pairs phi_b phi_a with b > a are rewritten as
    phi_a phi_b + Lambda E_ba until every word is non-decreasing.

    Args:
        expr: Expression to order
        strategy: "leftmost" rewrites the first descent, "random" a random one
        seed: Seed for the random strategy
        max_length: Word-length cap

    Returns:
        Canonical WeylExpr
    """
    if strategy not in ("leftmost", "random"):
        raise InvalidInput(f"Unknown reduction strategy {strategy!r}")
    if expr.max_degree() > max_length:
        raise DegreeCapExceeded(
            f"Word length {expr.max_degree()} exceeds the cap {max_length}"
        )
    rng = random.Random(seed)
    E = symplectic_form(expr.n)

    pending: Dict[TermKey, Any] = dict(expr.terms)
    ordered: Dict[TermKey, Any] = {}
    rewrites = 0
    while pending:
        (word, power), coeff = pending.popitem()
        if coeff == 0:
            continue
        descents = _descents(word)
        if not descents:
            ordered[(word, power)] = ordered.get((word, power), 0) + coeff
            continue
        p = descents[0] if strategy == "leftmost" else rng.choice(descents)
        b, a = word[p], word[p + 1]
        rewrites += 1

        swapped = word[:p] + (a, b) + word[p + 2 :]
        pending[(swapped, power)] = pending.get((swapped, power), 0) + coeff

        commutator = E[b - 1, a - 1]
        if commutator:
            contracted = word[:p] + word[p + 2 :]
            key = (contracted, power + 1)
            pending[key] = pending.get(key, 0) + coeff * int(commutator)

    logger.debug(f"normal_order: {rewrites} rewrites, {len(ordered)} canonical terms")
    return WeylExpr(expr.n, ordered)


def phi_E_phi(n: int) -> WeylExpr:
    """sum_ab E_ab phi_a phi_b, not yet normal-ordered."""
    return WeylExpr.quadratic_form(symplectic_form(n), n)


def from_words(n: int, words: Iterable[Tuple[Any, Word]]) -> WeylExpr:
    """Build an expression from (coefficient, word) pairs."""
    terms: Dict[TermKey, Any] = {}
    for coeff, word in words:
        key = (tuple(word), 0)
        terms[key] = terms.get(key, 0) + coeff
    return WeylExpr(n, terms)
