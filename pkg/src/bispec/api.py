"""FastAPI endpoints for the bispec service."""

import json
from enum import Enum
from typing import Any, Dict, List, Optional

from fastapi import APIRouter, Depends, HTTPException, Query
from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from src.bispec.amplitudes import creation_probabilities, sum_rule_diagnostic
from src.bispec.calibrate import calibrate
from src.bispec.config import RunConfig
from src.bispec.errors import BispecError
from src.bispec.models import (
    CalibrationResult,
    MassSolution,
    ModelKind,
    ModelParams,
    OutputFormat,
    QuantumNumbers,
    Suite,
    SuiteReport,
)
from src.bispec.report import (
    compare,
    emit,
    generate_table,
    ingest_experimental,
    ingest_published,
    join_experimental,
)
from src.bispec.spectrum import mass_squared, physical_mass, virton_mass_gev
from src.bispec.suites import run_suite

# Creating API router for spectrum operations
router = APIRouter(
    prefix="/bispec",
    tags=["bispec"],
    responses={404: {"description": "Not found"}},
)


class CompareWith(str, Enum):
    """Reference column joined to a generated table."""

    EXPERIMENTAL = "experimental"
    PUBLISHED = "published"
    NONE = "none"


class MassRequest(BaseModel):
    """Mass request model."""

    model: ModelKind = Field(ModelKind.H16, description="Heisenberg-algebra model")
    F: int = Field(..., description="Fermion charge, 0 or 1")
    N: int = Field(..., description="Isotonic number")
    Y: int = Field(0, description="Hypercharge")
    i: float = Field(0.0, description="Isospin")
    i3: Optional[float] = Field(None, description="Isospin projection")
    mu2: Optional[float] = Field(None, gt=0, description="mu^2; defaults to the table value")
    scale_gev2: float = Field(1.0, gt=0, description="(khc)^2 in GeV^2")
    lambda2: int = Field(136, ge=2, description="Central constant squared for the virton value")
    synthetic: bool = Field(False, description="Allow the calibration point N=-1, i=-1/2")

    def to_quantum_numbers(self) -> QuantumNumbers:
        """Convert to QuantumNumbers."""
        return QuantumNumbers(
            F=self.F, N=self.N, Y=self.Y, i=self.i, i3=self.i3, synthetic=self.synthetic
        )


class MassResponse(BaseModel):
    """Mass response model."""

    model: ModelKind
    mu2: float
    m2_baryon: float
    m2_meson: float
    discriminant: float
    mass_gev: float
    virton_mass_gev: Optional[float] = None

    @classmethod
    def from_solution(
        cls, solution: MassSolution, qn: QuantumNumbers, mu2: float, lambda2: int
    ) -> "MassResponse":
        """Create a response from a mass solution."""
        virton = None
        if qn.F == 1 and not qn.synthetic:
            virton = virton_mass_gev(qn, lambda2)
        return cls(
            model=solution.model,
            mu2=mu2,
            m2_baryon=solution.m2_baryon,
            m2_meson=solution.m2_meson,
            discriminant=solution.discriminant,
            mass_gev=physical_mass(solution, qn.F),
            virton_mass_gev=virton,
        )


class CalibrationResponse(BaseModel):
    """Calibration response model."""

    params: ModelParams
    nucleon_mass_gev: float
    eta: float
    passed: bool
    checks: List[Dict[str, Any]]

    @classmethod
    def from_result(cls, result: CalibrationResult) -> "CalibrationResponse":
        """Create a response from a calibration result."""
        return cls(
            params=result.params,
            nucleon_mass_gev=result.nucleon_mass_gev,
            eta=result.eta,
            passed=result.passed,
            checks=[c.model_dump(mode="json") for c in result.checks],
        )


class ProbabilityResponse(BaseModel):
    """Creation-probability response model."""

    params: ModelParams
    states: List[Dict[str, Any]]
    sum_rule: Dict[str, float]


def get_config() -> RunConfig:
    """
    Dependency to get the run configuration.

    Returns:
        RunConfig from the environment
    """
    try:
        return RunConfig.from_env()
    except ValidationError as e:
        logger.error(f"Error reading configuration: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))


def _http_error(e: BispecError) -> HTTPException:
    """422 for domain and input errors, 500 otherwise."""
    logger.error(f"{type(e).__name__}: {e}")
    status = 422 if e.exit_code == 2 else 500
    return HTTPException(status_code=status, detail=e.to_dict())


@router.post("/mass", response_model=MassResponse)
async def get_mass(request: MassRequest, config: RunConfig = Depends(get_config)) -> MassResponse:
    """
    Both branches and the physical mass of one multiplet.

    Args:
        request: Model, quantum numbers and mu^2
        config: Run configuration supplying the default mu^2

    Returns:
        Branches, physical mass and virton value for fermions
    """
    try:
        qn = request.to_quantum_numbers()
    except ValidationError as e:
        logger.error(f"Invalid quantum numbers: {str(e)}")
        raise HTTPException(status_code=422, detail=str(e))
    mu2 = request.mu2 if request.mu2 is not None else config.table_mu2
    try:
        solution = mass_squared(request.model, qn, mu2, request.scale_gev2)
        return MassResponse.from_solution(solution, qn, mu2, request.lambda2)
    except BispecError as e:
        raise _http_error(e)


@router.get("/table")
async def get_table(
    mu2: Optional[float] = Query(None, gt=0),
    n_max: int = Query(10, ge=0, le=50),
    compare_with: CompareWith = Query(CompareWith.NONE, alias="compare"),
    config: RunConfig = Depends(get_config),
) -> Dict[str, Any]:
    """
    Generate the mass table, optionally joined to a reference column.

    Returns:
        The JSON emission schema: mu2, rows and stats
    """
    mu2 = mu2 if mu2 is not None else config.table_mu2
    try:
        rows = generate_table(mu2, n_max, model=config.model)
        stats = None
        if compare_with != CompareWith.NONE:
            reference = (
                ingest_experimental(config.experimental_path)
                if compare_with == CompareWith.EXPERIMENTAL
                else ingest_published()
            )
            rows = join_experimental(rows, reference)
            stats = compare(rows, reference)
        return json.loads(emit(rows, stats, OutputFormat.JSON, mu2=mu2))
    except BispecError as e:
        raise _http_error(e)


@router.get("/calibration", response_model=CalibrationResponse)
async def get_calibration(
    lambda2: int = Query(136, ge=2),
    chi: float = Query(0.0),
    config: RunConfig = Depends(get_config),
) -> CalibrationResponse:
    """Run the calibration chain and report every constraint check."""
    try:
        return CalibrationResponse.from_result(calibrate(lambda2, chi, policy=config.policy))
    except BispecError as e:
        raise _http_error(e)


@router.get("/probabilities", response_model=ProbabilityResponse)
async def get_probabilities(
    lambda2: int = Query(136, ge=2),
    chi: float = Query(0.0),
    printed_override: bool = False,
    config: RunConfig = Depends(get_config),
) -> ProbabilityResponse:
    """Creation probabilities of the octet charge states at calibrated parameters."""
    try:
        params = calibrate(lambda2, chi, policy=config.policy).params
        states = creation_probabilities(
            params, printed_override=printed_override, policy=config.policy
        )
        return ProbabilityResponse(
            params=params,
            states=[s.to_report() for s in states],
            sum_rule=sum_rule_diagnostic(params, config.policy),
        )
    except BispecError as e:
        raise _http_error(e)


@router.get("/verify/{suite}", response_model=SuiteReport)
async def verify(suite: Suite, config: RunConfig = Depends(get_config)) -> SuiteReport:
    """Run one verification suite, or all of them."""
    return run_suite(suite, config.policy)
