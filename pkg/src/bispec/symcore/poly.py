"""Exact polynomials over conjugate variable pairs with an optional Gaussian weight."""

import math
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Optional, Tuple, Union

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field
from sympy.polys.domains import QQ_I

from src.bispec.errors import DegreeCapExceeded, InvalidInput

DEFAULT_DEGREE_CAP = 24

Scalar = Union[int, sp.Expr]


class VarKind(str, Enum):
    """Plain or conjugate canonical coordinate."""

    PLAIN = "phi"
    CONJ = "phibar"


class VarId(BaseModel):
    """Canonical coordinate phi_(alpha k) or its conjugate."""

    model_config = ConfigDict(frozen=True)

    kind: VarKind
    lorentz_index: int = Field(..., ge=1, le=2)
    iso_index: int = Field(..., ge=1, le=2)

    @property
    def symbol(self) -> sp.Symbol:
        """sympy symbol, e.g. phi21 or phibar21."""
        return sp.Symbol(f"{self.kind.value}{self.lorentz_index}{self.iso_index}")

    @property
    def is_additional(self) -> bool:
        """Lorentz-scalar components phi_(2k) span the subspace F0."""
        return self.lorentz_index == 2

    def conjugate(self) -> "VarId":
        """The partner variable of the conjugate pair."""
        kind = VarKind.CONJ if self.kind == VarKind.PLAIN else VarKind.PLAIN
        return VarId(kind=kind, lorentz_index=self.lorentz_index, iso_index=self.iso_index)

    def __str__(self) -> str:
        return self.symbol.name


def phi(iso_index: int, lorentz_index: int = 2) -> VarId:
    """Plain variable; defaults to the additional variable phi_k."""
    return VarId(kind=VarKind.PLAIN, lorentz_index=lorentz_index, iso_index=iso_index)


def phibar(iso_index: int, lorentz_index: int = 2) -> VarId:
    """Conjugate variable; defaults to the additional variable phibar_k."""
    return VarId(kind=VarKind.CONJ, lorentz_index=lorentz_index, iso_index=iso_index)


ALL_VARS: Tuple[VarId, ...] = tuple(
    VarId(kind=kind, lorentz_index=alpha, iso_index=k)
    for kind in VarKind
    for alpha in (1, 2)
    for k in (1, 2)
)
VAR_POSITION: Dict[VarId, int] = {v: pos for pos, v in enumerate(ALL_VARS)}

# Polynomial indeterminates entering coefficients
OMEGA2 = sp.Symbol("omega2", positive=True)
ZBARZ = sp.Symbol("zbarz", positive=True)

GENS: Tuple[sp.Symbol, ...] = tuple(v.symbol for v in ALL_VARS) + (OMEGA2, ZBARZ)
N_VARS = len(ALL_VARS)


class SymExpr:
    """
    Multivariate polynomial with exact Gaussian-rational coefficients.

    When ``weighted`` is set the expression stands for P * exp(-omega2 * s)
    with s = sum_k phibar_(2k) phi_(2k) over ``weight_iso``.
    """

    __slots__ = ("poly", "weighted", "weight_iso", "degree_cap")

    def __init__(
        self,
        expr: Union[Scalar, sp.Poly] = 0,
        weighted: bool = False,
        weight_iso: Iterable[int] = (1, 2),
        degree_cap: int = DEFAULT_DEGREE_CAP,
    ):
        if isinstance(expr, sp.Poly):
            poly = expr
        else:
            poly = sp.Poly(sp.sympify(expr), *GENS, domain=QQ_I)
        self.poly = poly
        self.weighted = weighted
        self.weight_iso: Tuple[int, ...] = tuple(sorted(weight_iso))
        self.degree_cap = degree_cap
        if self.degree() > degree_cap:
            raise DegreeCapExceeded(
                f"Degree {self.degree()} exceeds the cap {degree_cap}"
            )

    # Construction helpers

    @classmethod
    def var(cls, v: VarId, **kwargs) -> "SymExpr":
        """A single variable."""
        return cls(v.symbol, **kwargs)

    @classmethod
    def from_terms(
        cls, terms: Dict[Tuple[int, ...], Scalar], **kwargs
    ) -> "SymExpr":
        """Build from a map of full exponent tuples to coefficients."""
        if not terms:
            return cls(0, **kwargs)
        return cls(sp.Poly.from_dict(dict(terms), *GENS, domain=QQ_I), **kwargs)

    def _like(self, poly: sp.Poly, weighted: Optional[bool] = None) -> "SymExpr":
        return SymExpr(
            poly,
            weighted=self.weighted if weighted is None else weighted,
            weight_iso=self.weight_iso,
            degree_cap=self.degree_cap,
        )

    # Inspection

    def terms(self) -> Dict[Tuple[int, ...], sp.Expr]:
        """Canonical term map: exponent tuple over GENS -> coefficient."""
        return {m: c for m, c in self.poly.as_dict().items() if c != 0}

    def is_zero(self) -> bool:
        return self.poly.is_zero

    def degree(self) -> int:
        """Total degree in the canonical variables (parameters excluded)."""
        if self.poly.is_zero:
            return 0
        return max(sum(m[:N_VARS]) for m in self.poly.monoms())

    def variables(self) -> FrozenSet[VarId]:
        """Canonical variables that occur with a nonzero exponent."""
        used = set()
        for monom in self.poly.monoms():
            used.update(ALL_VARS[pos] for pos in range(N_VARS) if monom[pos])
        return frozenset(used)

    def is_homogeneous(self) -> bool:
        """All monomials share one total degree."""
        return len({sum(m[:N_VARS]) for m in self.poly.monoms()}) <= 1

    def hypercharge(self) -> Optional[int]:
        """phi count minus phibar count when it is the same for every monomial."""
        half = N_VARS // 2
        charges = {sum(m[:half]) - sum(m[half:N_VARS]) for m in self.poly.monoms()}
        return charges.pop() if len(charges) == 1 else None

    def as_expr(self) -> sp.Expr:
        """Plain sympy expression of the polynomial part."""
        return self.poly.as_expr()

    def weight_exponent(self) -> "SymExpr":
        """s = sum over weight_iso of phibar_(2k) phi_(2k), unweighted."""
        s = sum(phibar(k).symbol * phi(k).symbol for k in self.weight_iso)
        return SymExpr(s, degree_cap=self.degree_cap)

    # Arithmetic

    def _check_weights(self, other: "SymExpr") -> None:
        if self.weight_iso != other.weight_iso and self.weighted and other.weighted:
            raise InvalidInput("Operands carry different Gaussian weights")

    def __add__(self, other: Union["SymExpr", Scalar]) -> "SymExpr":
        if not isinstance(other, SymExpr):
            other = SymExpr(other)
        # Zero adopts the weight of the other operand
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.weighted != other.weighted:
            raise InvalidInput("Cannot add a weighted and an unweighted expression")
        self._check_weights(other)
        return self._like(self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self) -> "SymExpr":
        return self._like(-self.poly)

    def __sub__(self, other: Union["SymExpr", Scalar]) -> "SymExpr":
        if not isinstance(other, SymExpr):
            other = SymExpr(other)
        return self + (-other)

    def __mul__(self, other: Union["SymExpr", Scalar]) -> "SymExpr":
        if not isinstance(other, SymExpr):
            return self.scale(other)
        if self.weighted and other.weighted:
            raise InvalidInput("At most one factor of a product may carry the weight")
        weighted = self.weighted or other.weighted
        weight_iso = self.weight_iso if self.weighted else other.weight_iso
        return SymExpr(
            self.poly * other.poly,
            weighted=weighted,
            weight_iso=weight_iso,
            degree_cap=min(self.degree_cap, other.degree_cap),
        )

    def __rmul__(self, other: Scalar) -> "SymExpr":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "SymExpr":
        if self.weighted and exponent > 1:
            raise InvalidInput("Cannot raise a weighted expression to a power")
        return self._like(self.poly**exponent)

    def scale(self, factor: Scalar) -> "SymExpr":
        """Multiply by an exact scalar or parameter polynomial."""
        return self._like(self.poly * sp.Poly(sp.sympify(factor), *GENS, domain=QQ_I))

    def with_weight(self, weight_iso: Iterable[int] = (1, 2)) -> "SymExpr":
        """Attach the Gaussian weight to an unweighted expression."""
        return SymExpr(
            self.poly, weighted=True, weight_iso=weight_iso, degree_cap=self.degree_cap
        )

    def conjugate(self) -> "SymExpr":
        """Swap phi <-> phibar and conjugate the coefficients."""
        half = N_VARS // 2
        terms = {}
        for monom, coeff in self.terms().items():
            swapped = monom[half:N_VARS] + monom[:half] + monom[N_VARS:]
            terms[swapped] = sp.conjugate(coeff)
        return SymExpr.from_terms(
            terms,
            weighted=self.weighted,
            weight_iso=self.weight_iso,
            degree_cap=self.degree_cap,
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, sp.Expr)):
            other = SymExpr(other)
        if not isinstance(other, SymExpr):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        if self.weighted != other.weighted:
            return False
        if self.weighted and self.weight_iso != other.weight_iso:
            return False
        return self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.poly, self.weighted, self.weight_iso))

    def __repr__(self) -> str:
        body = str(self.as_expr())
        if self.weighted:
            return f"({body})*w{list(self.weight_iso)}"
        return body


class ArithOp(str, Enum):
    """Polynomial operation selector."""

    ADD = "add"
    MUL = "mul"
    SCALE = "scale"


def poly_arith(a: SymExpr, b: Union[SymExpr, Scalar], op: ArithOp) -> SymExpr:
    """Canonical sum, product or scalar multiple of two expressions."""
    if op == ArithOp.ADD:
        return a + b
    if op == ArithOp.MUL:
        return a * b
    if isinstance(b, SymExpr):
        raise InvalidInput("scale expects a scalar second operand")
    return a.scale(b)


def gaussian_moment(p: SymExpr) -> sp.Expr:
    """
    Integrate p against exp(-phibar phi) over the additional variables.

    Each component contributes int phi^a phibar^b exp(-|phi|^2) dmu = delta_ab a!
    under the measure dmu = (i/pi) dphi ^ dphibar.

    Args:
        p: Unweighted expression in the additional variables only

    Returns:
        Exact Gaussian-rational value (a parameter polynomial if p carries omega2 or zbarz)
    """
    if p.weighted:
        raise InvalidInput("gaussian_moment supplies its own weight; pass an unweighted p")
    foreign = [v for v in p.variables() if not v.is_additional]
    if foreign:
        raise InvalidInput(f"Non-additional variables in moment integrand: {foreign}")

    pairs = [(VAR_POSITION[phi(k)], VAR_POSITION[phibar(k)]) for k in (1, 2)]
    total = sp.Integer(0)
    for monom, coeff in p.terms().items():
        value = coeff
        for plain_pos, conj_pos in pairs:
            a, b = monom[plain_pos], monom[conj_pos]
            if a != b:
                value = 0
                break
            value *= math.factorial(a)
        if value != 0:
            value *= OMEGA2 ** monom[N_VARS] * ZBARZ ** monom[N_VARS + 1]
            total += value
    return sp.expand(total)
