"""Configuration options for bispec runs."""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, Field, ValidationError, model_validator

from src.bispec.errors import IoError, ParseError
from src.bispec.models import ModelKind, OutputFormat

DEFAULT_TABLE_MU2 = 0.065
DEFAULT_LAMBDA2 = 136

# Environment variable -> RunConfig field
ENV_FIELDS = {
    "BISPEC_MODEL": "model",
    "BISPEC_MU2": "mu2",
    "BISPEC_LAMBDA2": "lambda2",
    "BISPEC_CHI": "chi",
    "BISPEC_N_MAX": "n_max",
    "BISPEC_FORMAT": "format",
    "BISPEC_EXPERIMENTAL_PATH": "experimental_path",
    "BISPEC_OUTPUT_PATH": "output_path",
}

# Environment variable -> EvalPolicy field
POLICY_ENV_FIELDS = {
    "BISPEC_MAX_TERMS": "max_terms",
    "BISPEC_TARGET_ABS_TOL": "target_abs_tol",
}


class EvalPolicy(BaseModel):
    """Tolerance and truncation policy for series evaluation."""

    target_abs_tol: float = Field(1e-13, description="Absolute error target")
    max_terms: int = Field(400, description="Series truncation limit")

    @model_validator(mode="after")
    def check_limits(self) -> "EvalPolicy":
        """target_abs_tol > 0 and max_terms >= 1."""
        if not self.target_abs_tol > 0:
            raise ValueError("target_abs_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        return self


class RunConfig(BaseModel):
    """Configuration for a CLI or service run."""

    model: ModelKind = Field(ModelKind.H16, description="Heisenberg-algebra model")
    mu2: Optional[float] = Field(
        None,
        gt=0,
        description="mu^2; None selects 0.065 for tables and the minimum principle for calibration",
    )
    lambda2: int = Field(DEFAULT_LAMBDA2, ge=2, description="Central constant squared")
    chi: float = Field(0.0, description="Phase of epsilon, radians")
    n_max: int = Field(10, ge=0, description="Largest family member index")
    format: OutputFormat = Field(OutputFormat.MARKDOWN, description="Report format")
    experimental_path: Optional[Path] = Field(
        None, description="Experimental CSV; None uses the bundled file"
    )
    output_path: Optional[Path] = Field(None, description="Report destination")
    scale_gev2: float = Field(1.0, gt=0, description="(khc)^2 in GeV^2")
    policy: EvalPolicy = Field(default_factory=EvalPolicy)

    @property
    def table_mu2(self) -> float:
        """mu^2 used for mass tables."""
        return self.mu2 if self.mu2 is not None else DEFAULT_TABLE_MU2

    @classmethod
    def env_overrides(cls) -> Dict[str, Any]:
        """
        Collect overrides from environment variables.

        Environment variables:
        - BISPEC_MODEL: h8 or h16
        - BISPEC_MU2: mu^2
        - BISPEC_LAMBDA2: central constant squared
        - BISPEC_CHI: phase of epsilon
        - BISPEC_N_MAX: largest family member index
        - BISPEC_FORMAT: csv, json or markdown
        - BISPEC_EXPERIMENTAL_PATH: experimental CSV
        - BISPEC_OUTPUT_PATH: report destination
        - BISPEC_MAX_TERMS: series truncation limit
        - BISPEC_TARGET_ABS_TOL: series error target
        """
        overrides: Dict[str, Any] = {
            field: os.environ[var] for var, field in ENV_FIELDS.items() if var in os.environ
        }
        policy = {
            field: os.environ[var] for var, field in POLICY_ENV_FIELDS.items() if var in os.environ
        }
        if policy:
            overrides["policy"] = policy
        return overrides

    @classmethod
    def from_env(cls) -> "RunConfig":
        """Create configuration from environment variables."""
        return cls(**cls.env_overrides())

    @classmethod
    def read_file(cls, path: Path) -> Dict[str, Any]:
        """Read a JSON config file into a plain dict."""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise IoError(f"Cannot read config file {path}: {e}") from e
        try:
            data = json.loads(text) if text.strip() else {}
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid JSON in {path}: {e.msg}", line=e.lineno) from e
        if not isinstance(data, dict):
            raise ParseError(f"Config file {path} must hold a JSON object", line=1)
        return data

    @classmethod
    def from_file(cls, path: Path) -> "RunConfig":
        """Create configuration from a JSON config file."""
        return cls(**cls.read_file(path))

    @classmethod
    def load(
        cls,
        config_path: Optional[Path] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> "RunConfig":
        """
        Merge defaults, config file, environment and explicit overrides.

        Args:
            config_path: JSON config file; falls back to BISPEC_CONFIG
            overrides: Values from command-line flags; None entries are ignored

        Returns:
            The merged RunConfig
        """
        load_dotenv()
        data: Dict[str, Any] = {}

        # Config file layer
        path = config_path or os.environ.get("BISPEC_CONFIG")
        if path:
            logger.debug(f"Loading config file {path}")
            data.update(cls.read_file(Path(path)))

        # Environment layer; policy fields merge into the file's policy
        env = cls.env_overrides()
        if "policy" in env and isinstance(data.get("policy"), dict):
            env["policy"] = {**data["policy"], **env["policy"]}
        data.update(env)

        # Flag layer
        if overrides:
            data.update({k: v for k, v in overrides.items() if v is not None})

        try:
            return cls(**data)
        except ValidationError as e:
            logger.error(f"Invalid configuration: {e}")
            raise
