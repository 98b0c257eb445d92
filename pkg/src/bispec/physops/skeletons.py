"""Skeletons: homogeneous polynomials labeling particle multiplets."""

import math
from enum import Enum
from fractions import Fraction
from typing import Optional

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.bispec.errors import DomainError
from src.bispec.models import ModelKind, half_integer
from src.bispec.symcore.poly import SymExpr, gaussian_moment, phi, phibar


class SkeletonKind(str, Enum):
    """How a skeleton is specified."""

    CANONICAL = "canonical"
    OCTET = "octet"
    EXPLICIT = "explicit"


class OctetMember(str, Enum):
    """Baryon octet members with their skeleton built on the additional variables."""

    NUCLEON = "N"
    LAMBDA = "Lambda"
    SIGMA = "Sigma"
    XI = "Xi"


# (N, Y, i) of each octet skeleton
OCTET_NUMBERS = {
    OctetMember.NUCLEON: (1, 1, Fraction(1, 2)),
    OctetMember.LAMBDA: (2, 0, Fraction(0)),
    OctetMember.SIGMA: (2, 0, Fraction(1)),
    OctetMember.XI: (5, -1, Fraction(1, 2)),
}


def _s(iso=(1, 2)) -> SymExpr:
    """phibar phi summed over the given iso indices."""
    return SymExpr(sum(phibar(k).symbol * phi(k).symbol for k in iso))


def _octet_polynomial(member: OctetMember, component: int) -> SymExpr:
    if member == OctetMember.NUCLEON:
        return SymExpr.var(phi(component))
    if member == OctetMember.LAMBDA:
        return _s()
    if member == OctetMember.XI:
        return _s() ** 2 * SymExpr.var(phibar(component))
    # phibar tau_a phi
    p1, p2 = phi(1).symbol, phi(2).symbol
    b1, b2 = phibar(1).symbol, phibar(2).symbol
    if component == 1:
        return SymExpr(b1 * p2 + b2 * p1)
    if component == 2:
        return SymExpr(-sp.I * b1 * p2 + sp.I * b2 * p1)
    return SymExpr(b1 * p1 - b2 * p2)


class SkeletonSpec(BaseModel):
    """
    A skeleton given canonically, as an octet member, or as an explicit polynomial.

    Canonical skeletons f_m^(i) = phi_1^m phi_2^(2i-m) / sqrt(m! (2i-m)!) are
    stored unnormalized; norm_squared() returns the denominator squared.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    model: ModelKind = ModelKind.H16
    kind: SkeletonKind
    i: Optional[float] = Field(None, description="Isospin of a canonical skeleton")
    m: Optional[int] = Field(None, description="Projection index 0..2i")
    member: Optional[OctetMember] = None
    component: Optional[int] = Field(
        None, description="Iso index k for N and Xi, generator index a for Sigma"
    )
    expr: Optional[SymExpr] = None

    @model_validator(mode="after")
    def check_construction(self) -> "SkeletonSpec":
        """Every kind carries exactly the fields it needs."""
        if self.kind == SkeletonKind.CANONICAL:
            if self.i is None or self.m is None:
                raise ValueError("canonical skeletons need i and m")
            iso = half_integer(self.i)
            if iso < 0 or not 0 <= self.m <= 2 * iso:
                raise ValueError(f"m={self.m} outside 0..2i for i={self.i}")
        elif self.kind == SkeletonKind.OCTET:
            if self.member is None:
                raise ValueError("octet skeletons need a member")
            if self.member in (OctetMember.NUCLEON, OctetMember.XI):
                self.component = self.component or 1
                if self.component not in (1, 2):
                    raise ValueError("iso index must be 1 or 2")
            elif self.member == OctetMember.SIGMA:
                self.component = self.component or 3
                if self.component not in (1, 2, 3):
                    raise ValueError("Sigma component must be 1, 2 or 3")
        else:
            if self.expr is None:
                raise ValueError("explicit skeletons need expr")
            if self.expr.weighted:
                raise ValueError("a skeleton is the unweighted polynomial part")
            if not self.expr.is_homogeneous():
                raise ValueError("skeletons are homogeneous polynomials")
        return self

    @classmethod
    def canonical(cls, i: float, m: int, model: ModelKind = ModelKind.H16) -> "SkeletonSpec":
        return cls(model=model, kind=SkeletonKind.CANONICAL, i=i, m=m)

    @classmethod
    def octet(cls, member: OctetMember, component: Optional[int] = None) -> "SkeletonSpec":
        return cls(kind=SkeletonKind.OCTET, member=member, component=component)

    @classmethod
    def explicit(cls, expr: SymExpr, model: ModelKind = ModelKind.H16) -> "SkeletonSpec":
        return cls(model=model, kind=SkeletonKind.EXPLICIT, expr=expr)

    def polynomial(self) -> SymExpr:
        """Unnormalized skeleton polynomial."""
        if self.kind == SkeletonKind.CANONICAL:
            two_i = int(2 * half_integer(self.i))
            return SymExpr(phi(1).symbol ** self.m * phi(2).symbol ** (two_i - self.m))
        if self.kind == SkeletonKind.OCTET:
            return _octet_polynomial(self.member, self.component)
        return self.expr

    def norm_squared(self) -> int:
        """m! (2i-m)! for canonical skeletons, 1 otherwise."""
        if self.kind != SkeletonKind.CANONICAL:
            return 1
        two_i = int(2 * half_integer(self.i))
        return math.factorial(self.m) * math.factorial(two_i - self.m)

    @property
    def N(self) -> int:
        """Isotonic number, the total degree."""
        return self.polynomial().degree()

    @property
    def Y(self) -> int:
        """Hypercharge, phi count minus phibar count."""
        charge = self.polynomial().hypercharge()
        if charge is None:
            raise DomainError("Skeleton mixes hypercharges")
        return charge

    @property
    def isospin(self) -> Optional[Fraction]:
        """Known isospin, None for explicit skeletons."""
        if self.kind == SkeletonKind.CANONICAL:
            return half_integer(self.i)
        if self.kind == SkeletonKind.OCTET:
            return OCTET_NUMBERS[self.member][2]
        return None

    def uses_only_additional(self) -> bool:
        return all(v.is_additional for v in self.polynomial().variables())


def skeleton_inner_product(a: SkeletonSpec, b: SkeletonSpec) -> sp.Expr:
    """
    Scalar product of the Gaussian-damped skeletons exp(-s/2) f.

    Returns:
        Exact value moment(conj(f_a) f_b) / sqrt(norm_a norm_b)
    """
    moment = gaussian_moment(a.polynomial().conjugate() * b.polynomial())
    return sp.sympify(moment) / sp.sqrt(a.norm_squared() * b.norm_squared())
