"""Differential operators built from multiplication and differentiation words."""

from enum import Enum
from typing import Dict, Iterable, Tuple, Union

import sympy as sp
from sympy.polys.domains import QQ_I

from src.bispec.symcore.poly import GENS, OMEGA2, SymExpr, VarId, VarKind

Scalar = Union[int, sp.Expr]


class ActionKind(str, Enum):
    """Primitive action of a word."""

    MUL = "mul"
    DIFF = "diff"


Action = Tuple[ActionKind, VarId]
Word = Tuple[Action, ...]


def _weight_gradient(v: VarId, weight_iso: Tuple[int, ...]) -> sp.Poly:
    """d s / d v for s = sum over weight_iso of phibar_(2k) phi_(2k)."""
    if not v.is_additional or v.iso_index not in weight_iso:
        return sp.Poly(0, *GENS, domain=QQ_I)
    return sp.Poly(v.conjugate().symbol, *GENS, domain=QQ_I)


def _act(action: Action, f: SymExpr) -> SymExpr:
    kind, v = action
    if kind == ActionKind.MUL:
        return f * SymExpr.var(v)
    derivative = f.poly.diff(v.symbol)
    if f.weighted:
        # d(P w) = (dP - omega2 (ds) P) w
        omega2 = sp.Poly(OMEGA2, *GENS, domain=QQ_I)
        derivative = derivative - omega2 * _weight_gradient(v, f.weight_iso) * f.poly
    return f._like(derivative)


class DiffOp:
    """
    Finite sum of words with exact scalar coefficients.

    A word (A1, A2, ..., An) denotes the composition A1 A2 ... An, so An acts first.
    """

    __slots__ = ("words",)

    def __init__(self, words: Dict[Word, Scalar] = None):
        cleaned: Dict[Word, sp.Expr] = {}
        for word, coeff in (words or {}).items():
            coeff = sp.expand(sp.sympify(coeff))
            if coeff != 0:
                cleaned[word] = coeff
        self.words = cleaned

    @classmethod
    def scalar(cls, value: Scalar) -> "DiffOp":
        return cls({(): value})

    @classmethod
    def identity(cls) -> "DiffOp":
        return cls.scalar(1)

    @classmethod
    def mul(cls, v: VarId) -> "DiffOp":
        """Multiplication by a variable."""
        return cls({((ActionKind.MUL, v),): 1})

    @classmethod
    def diff(cls, v: VarId) -> "DiffOp":
        """Partial derivative with respect to a variable."""
        return cls({((ActionKind.DIFF, v),): 1})

    @classmethod
    def euler(cls, variables: Iterable[VarId], kind: VarKind) -> "DiffOp":
        """sum v d/dv over the variables of the given kind."""
        return cls.sum(cls.mul(v) * cls.diff(v) for v in variables if v.kind == kind)

    @classmethod
    def sum(cls, ops: Iterable["DiffOp"]) -> "DiffOp":
        total = cls()
        for op in ops:
            total = total + op
        return total

    def __add__(self, other: Union["DiffOp", Scalar]) -> "DiffOp":
        if not isinstance(other, DiffOp):
            other = DiffOp.scalar(other)
        merged: Dict[Word, sp.Expr] = dict(self.words)
        for word, coeff in other.words.items():
            merged[word] = merged.get(word, 0) + coeff
        return DiffOp(merged)

    __radd__ = __add__

    def __neg__(self) -> "DiffOp":
        return self.scale(-1)

    def __sub__(self, other: Union["DiffOp", Scalar]) -> "DiffOp":
        if not isinstance(other, DiffOp):
            other = DiffOp.scalar(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "DiffOp":
        return DiffOp.scalar(other) - self

    def scale(self, factor: Scalar) -> "DiffOp":
        return DiffOp({w: c * factor for w, c in self.words.items()})

    def __mul__(self, other: Union["DiffOp", Scalar]) -> "DiffOp":
        """Composition self * other: other acts first."""
        if not isinstance(other, DiffOp):
            return self.scale(other)
        composed: Dict[Word, sp.Expr] = {}
        for w1, c1 in self.words.items():
            for w2, c2 in other.words.items():
                word = w1 + w2
                composed[word] = composed.get(word, 0) + c1 * c2
        return DiffOp(composed)

    def __rmul__(self, other: Scalar) -> "DiffOp":
        return self.scale(other)

    def __len__(self) -> int:
        return len(self.words)

    def __call__(self, f: SymExpr) -> SymExpr:
        return apply_diffop(self, f)

    def __repr__(self) -> str:
        parts = []
        for word, coeff in self.words.items():
            body = " ".join(
                f"d/d{v}" if kind == ActionKind.DIFF else str(v) for kind, v in word
            )
            parts.append(f"({coeff}) {body}".strip())
        return " + ".join(parts) or "0"


def apply_diffop(op: DiffOp, f: SymExpr) -> SymExpr:
    """
    Apply a differential operator to an expression.

    Weighted inputs stay weighted: derivatives pick up the chain-rule term
    of the Gaussian weight.
    """
    result = f._like(sp.Poly(0, *GENS, domain=QQ_I))
    for word, coeff in op.words.items():
        g = f
        for action in reversed(word):
            g = _act(action, g)
            if g.is_zero():
                break
        if not g.is_zero():
            result = result + g.scale(coeff)
    return result
