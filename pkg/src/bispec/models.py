"""Pydantic models for quantum numbers, mass solutions, parameters and reports."""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ModelKind(str, Enum):
    """Heisenberg-algebra model."""

    H8 = "h8"  # U(1) isotopic symmetry, neutral states only
    H16 = "h16"  # U(2) isotopic symmetry


class OutputFormat(str, Enum):
    """Report output format."""

    CSV = "csv"
    JSON = "json"
    MARKDOWN = "markdown"


class Suite(str, Enum):
    """Verification suite selector."""

    ALGEBRA = "algebra"
    SPECFUN = "specfun"
    IDENTITIES = "identities"
    ALL = "all"


class FamilyName(str, Enum):
    """The eight hadron families of the mass table."""

    N = "N"
    LAMBDA = "Lambda"
    SIGMA = "Sigma"
    DELTA = "Delta"
    XI = "Xi"
    EPSILON = "epsilon"
    RHO = "rho"
    KSTAR = "Kstar"

    @property
    def symbol(self) -> str:
        """Greek display symbol used in markdown tables."""
        return _FAMILY_SYMBOLS[self]

    @classmethod
    def parse(cls, text: str) -> "FamilyName":
        """Resolve a family from its ASCII name or its display symbol."""
        text = text.strip()
        for member in cls:
            if text in (member.value, member.symbol):
                return member
        raise ValueError(f"Unknown family: {text!r}")


_FAMILY_SYMBOLS = {
    FamilyName.N: "N",
    FamilyName.LAMBDA: "Λ",
    FamilyName.SIGMA: "Σ",
    FamilyName.DELTA: "Δ",
    FamilyName.XI: "Ξ",
    FamilyName.EPSILON: "ε",
    FamilyName.RHO: "ρ",
    FamilyName.KSTAR: "K*",
}


def half_integer(value: float) -> Fraction:
    """Convert a float that must be a multiple of 1/2 to an exact Fraction."""
    frac = Fraction(value).limit_denominator(2)
    if frac.denominator not in (1, 2) or float(frac) != float(value):
        raise ValueError(f"{value} is not a half-integer")
    return frac


class QuantumNumbers(BaseModel):
    """Multiplet label: fermion charge, isotonic number, hypercharge, isospin."""

    F: int = Field(..., description="Fermion charge, 1 for baryons and 0 for mesons")
    N: int = Field(..., description="Isotonic number (total skeleton degree)")
    Y: int = Field(0, description="Hypercharge (phi count minus phibar count)")
    i: float = Field(0.0, description="Isospin")
    i3: Optional[float] = Field(None, description="Isospin projection, defaults to i")
    s: Optional[float] = Field(None, description="Dirac spin, bookkeeping only")
    synthetic: bool = Field(
        False, description="Calibration-only point such as N=-1, i=-1/2"
    )

    @field_validator("F")
    @classmethod
    def check_fermion_charge(cls, value: int) -> int:
        """F is 0 or 1."""
        if value not in (0, 1):
            raise ValueError("F must be 0 or 1")
        return value

    @model_validator(mode="after")
    def check_weights(self) -> "QuantumNumbers":
        """Validate the half-integer structure of the isospin labels."""
        iso = half_integer(self.i)
        if self.i3 is None:
            self.i3 = self.i
        iso3 = half_integer(self.i3)
        if self.N < -1:
            raise ValueError("N must be >= -1")
        if iso < Fraction(-1, 2):
            raise ValueError("i must be >= -1/2")
        if abs(iso3) > abs(iso) or (iso - iso3).denominator != 1:
            raise ValueError(f"i3={self.i3} is not a projection of i={self.i}")
        # N=-1 and negative isospin only occur at the calibration point
        if (self.N < 0 or iso < 0) and not self.synthetic:
            raise ValueError("N=-1 or i<0 requires synthetic=True")
        return self

    @property
    def i0(self) -> Fraction:
        """Lower weight Y/2."""
        return Fraction(self.Y, 2)

    @property
    def i1(self) -> Fraction:
        """Upper weight N/2 + 1."""
        return Fraction(self.N, 2) + 1

    @property
    def iso(self) -> Fraction:
        """Isospin as an exact Fraction."""
        return half_integer(self.i)

    @property
    def iso3(self) -> Fraction:
        """Isospin projection as an exact Fraction."""
        return half_integer(self.i3 if self.i3 is not None else self.i)

    @property
    def strangeness(self) -> int:
        """S = Y - F."""
        return self.Y - self.F

    def is_physical(self) -> bool:
        """Check i0 <= i <= i1 - 1 for a real multiplet."""
        return not self.synthetic and self.i0 <= self.iso <= self.i1 - 1


class Family(BaseModel):
    """One row family of the mass table; N(n) = 2n + n_offset."""

    name: FamilyName
    F: int
    i: float
    Y: int
    n_offset: int

    def quantum_numbers(self, n: int, i3: Optional[float] = None) -> QuantumNumbers:
        """Quantum numbers of the n-th member of the family."""
        return QuantumNumbers(
            F=self.F, N=2 * n + self.n_offset, Y=self.Y, i=self.i, i3=i3
        )


class MassSolution(BaseModel):
    """Both branch roots of the factorized mass-squared quadratic."""

    m2_baryon: float = Field(..., description="Larger root, GeV^2")
    m2_meson: float = Field(..., description="Smaller root, GeV^2")
    discriminant: float
    model: ModelKind
    extrapolated: bool = False

    @model_validator(mode="after")
    def check_branch_order(self) -> "MassSolution":
        """The baryon branch is never below the meson branch."""
        if self.discriminant >= 0 and self.m2_baryon < self.m2_meson:
            raise ValueError("m2_baryon must not be below m2_meson")
        return self

    def branch(self, F: int) -> float:
        """Mass squared of the branch selected by the fermion charge."""
        return self.m2_baryon if F == 1 else self.m2_meson


class DispersionRoots(BaseModel):
    """Both roots X = M^2 of a dispersion relation, larger root first."""

    roots: Tuple[float, float] = Field(..., description="(larger, smaller) roots, GeV^2")
    boltzmann_roots: Tuple[float, float] = Field(
        ..., description="Closed-form roots with the occupation number dropped"
    )
    F: int
    model: ModelKind
    occupation: bool = Field(True, description="Occupation number n_f included")
    extrapolated: bool = False

    @property
    def physical_root(self) -> float:
        """Larger root for fermions, smaller for bosons."""
        return self.roots[0] if self.F == 1 else self.roots[1]


class ModelParams(BaseModel):
    """Calibrated free parameters of the theory."""

    mu2: float = Field(..., gt=0, description="Joint temperature parameter 3*T_f*T_fdot")
    T_f: float = Field(..., gt=0, description="Temperature of initial quanta")
    T_fdot: float = Field(..., gt=0, description="Temperature of final quanta")
    zbar_z: float = Field(..., gt=0, description="Squared modulus of the isospinor z")
    eps_modulus: float = Field(..., gt=0, description="|epsilon| = |z1/z2|")
    chi: float = Field(0.0, description="Phase of epsilon, radians")
    lambda2: int = Field(136, gt=0, description="Central constant squared")
    scale_gev2: float = Field(1.0, gt=0, description="(khc)^2 in GeV^2")
    inv_Z: float = Field(1.0, gt=0, description="Opaque external 1/Z factor")

    @model_validator(mode="after")
    def check_temperatures(self) -> "ModelParams":
        """mu2 = 3*T_f*T_fdot and T_fdot = zbar_z/3."""
        if not np.isclose(self.mu2, 3 * self.T_f * self.T_fdot, rtol=1e-12, atol=0):
            raise ValueError("mu2 must equal 3*T_f*T_fdot")
        if not np.isclose(self.T_fdot, self.zbar_z / 3, rtol=1e-12, atol=0):
            raise ValueError("T_fdot must equal zbar_z/3")
        return self

    @classmethod
    def from_mu2_zbarz(
        cls, mu2: float, zbar_z: float, eps_modulus: float, **kwargs: Any
    ) -> "ModelParams":
        """Derive both temperatures from mu2 and zbar_z."""
        return cls(
            mu2=mu2,
            T_f=mu2 / zbar_z,
            T_fdot=zbar_z / 3,
            zbar_z=zbar_z,
            eps_modulus=eps_modulus,
            **kwargs,
        )


class CalibrationCheck(BaseModel):
    """One named constraint evaluated during calibration."""

    name: str
    passed: bool
    value: Any = None
    expected: Any = None


class CalibrationResult(BaseModel):
    """Calibrated parameters with the constraint checks that produced them."""

    params: ModelParams
    nucleon_mass_gev: float
    eta: float
    checks: List[CalibrationCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_report(self) -> Dict[str, Any]:
        """JSON-ready summary: parameters first, then each check."""
        return {
            "params": self.params.model_dump(),
            "nucleon_mass_gev": self.nucleon_mass_gev,
            "eta": self.eta,
            "passed": self.passed,
            "checks": [c.model_dump() for c in self.checks],
        }


class IsoRotation(BaseModel):
    """Isotopic rotation matrix V with V^2 = -1 and det V = 1."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    V: np.ndarray
    eps: complex
    lambda2: int


class AmplitudeFactors(BaseModel):
    """Factorized amplitude of one charge state and its creation probability."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    family: FamilyName
    charge_state: str = Field(..., description="Member label, e.g. 'p' or 'Sigma+'")
    n_factor: float
    iso_factor: complex
    lorentz_tag: str = Field(..., description="Spinor structure, not evaluated")
    probability: float = Field(..., ge=0)
    normalized_probability: Optional[float] = None

    @model_validator(mode="after")
    def check_probability(self) -> "AmplitudeFactors":
        """probability = |iso_factor|^2 * n_factor^2."""
        expected = abs(self.iso_factor) ** 2 * self.n_factor**2
        if not np.isclose(self.probability, expected, rtol=1e-12, atol=0):
            raise ValueError("probability must equal |iso_factor * n_factor|^2")
        return self

    def to_report(self) -> Dict[str, Any]:
        """Serialize in the probability report schema."""
        return {
            "family": self.family.value,
            "charge_state": self.charge_state,
            "n_factor": self.n_factor,
            "iso_modulus": abs(self.iso_factor),
            "W_raw": self.probability,
            "W_normalized": self.normalized_probability,
        }


class FamilyRow(BaseModel):
    """One table cell: family member n with theoretical and experimental mass."""

    family: FamilyName
    n: int = Field(..., ge=0)
    N: int
    theoretical_mass_gev: Optional[float] = None
    experimental_mass_gev: Optional[float] = None
    abs_dev: Optional[float] = None
    note: Optional[str] = Field(None, description="Per-cell diagnostic, e.g. complex branch")

    @model_validator(mode="after")
    def check_deviation(self) -> "FamilyRow":
        """abs_dev is present exactly when both masses are."""
        both = (
            self.experimental_mass_gev is not None
            and self.theoretical_mass_gev is not None
        )
        if (self.abs_dev is not None) != both:
            raise ValueError("abs_dev must be present iff both masses are present")
        return self


class ComparisonStats(BaseModel):
    """Deviation statistics over joined table cells."""

    count_compared: int = 0
    mean_abs_dev_gev: Optional[float] = None
    max_abs_dev_gev: Optional[float] = None
    worst_cell: Optional[Tuple[FamilyName, int]] = None

    @model_validator(mode="after")
    def check_ordering(self) -> "ComparisonStats":
        """Mean deviation never exceeds the max deviation."""
        if self.mean_abs_dev_gev is not None and self.max_abs_dev_gev is not None:
            if self.mean_abs_dev_gev > self.max_abs_dev_gev + 1e-15:
                raise ValueError("mean_abs_dev must not exceed max_abs_dev")
        return self


class CellDeviation(BaseModel):
    """A table cell whose computed mass misses a reference value."""

    family: FamilyName
    n: int
    computed_gev: float
    reference_gev: float
    abs_dev: float
    known_misprint: bool = False


class RegressionSummary(BaseModel):
    """Agreement of the computed table with the printed theoretical column."""

    total: int
    within_all: int = Field(..., description="Cells within tol_all")
    within_most: int = Field(..., description="Cells within tol_most")
    tol_all: float
    tol_most: float
    outside: List[CellDeviation] = Field(default_factory=list)
    passed: bool


class SweepPoint(BaseModel):
    """Comparison statistics of the table generated at one mu2."""

    mu2: float
    against_published: ComparisonStats
    against_experimental: ComparisonStats


class VerificationReport(BaseModel):
    """Outcome of one identity check."""

    check_id: str
    passed: bool
    residual_terms: List[str] = Field(default_factory=list)
    timing_ms: float = 0.0
    details: Dict[str, Any] = Field(default_factory=dict)


class SuiteReport(BaseModel):
    """Aggregated outcome of a verification suite."""

    suite: Suite
    passed: bool
    checks: List[VerificationReport] = Field(default_factory=list)

    @classmethod
    def from_checks(cls, suite: Suite, checks: List[VerificationReport]) -> "SuiteReport":
        """Aggregate check reports; the suite passes iff every check passes."""
        return cls(suite=suite, passed=all(c.passed for c in checks), checks=checks)
