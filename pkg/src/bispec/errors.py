"""Exception hierarchy shared by the library, the CLI and the service."""

from typing import Any, Dict, List, Optional


class BispecError(Exception):
    """Base class for all bispec errors."""

    # Process exit code used by the CLI
    exit_code: int = 1

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the error for JSON error reports."""
        return {"error": type(self).__name__, "message": str(self)}


class InvalidInput(BispecError):
    """An argument is outside the domain of the operation."""

    exit_code = 2


class NonConvergent(BispecError):
    """A series did not reach the requested tolerance within max_terms."""


class DegreeCapExceeded(BispecError):
    """A polynomial or Weyl word grew past the configured degree cap."""


class InvalidModel(BispecError):
    """The requested operator does not exist in the requested model."""

    exit_code = 2


class DomainError(BispecError):
    """A skeleton lies outside the subspace where an identity applies."""

    exit_code = 2


class DegenerateGram(BispecError):
    """Gram-Schmidt hit an unresolvable zero pivot."""


class CancellationFailure(BispecError):
    """Terms expected to cancel in a normal-ordered sum survived."""

    def __init__(self, message: str, residual_terms: Optional[List[str]] = None):
        super().__init__(message)
        self.residual_terms = residual_terms or []

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["residual_terms"] = self.residual_terms
        return data


class ComplexBranch(BispecError):
    """The mass formula discriminant is negative."""

    exit_code = 2

    def __init__(self, message: str, discriminant: float):
        super().__init__(message)
        self.discriminant = discriminant

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["discriminant"] = self.discriminant
        return data


class BracketFailure(BispecError):
    """A root bracket does not change sign."""

    exit_code = 2

    def __init__(self, message: str, sign_pattern: str):
        super().__init__(message)
        self.sign_pattern = sign_pattern

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["sign_pattern"] = self.sign_pattern
        return data


class NoPhysicalRoot(BispecError):
    """Both roots of a dispersion relation are nonpositive."""

    exit_code = 2


class DegenerateRoot(BispecError):
    """The dispersion curve has a double root."""

    exit_code = 2


class ConstraintViolation(BispecError):
    """A calibrated quantity fails one of its defining constraints."""


class DecompositionResidual(BispecError):
    """A matrix is not in the span it is decomposed over."""


class SingularMatrix(BispecError):
    """A matrix that must be inverted is singular."""


class InvalidWeights(BispecError):
    """Isospin weights (i, i0, i3) are inconsistent."""

    exit_code = 2


class ParseError(BispecError):
    """A data file row could not be parsed."""

    exit_code = 3

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["line"] = self.line
        return data


class DuplicateCell(ParseError):
    """A (family, n) cell appears twice in a data file."""


class UnknownFamily(ParseError):
    """A data file row names a family outside the eight known ones."""


class IoError(BispecError):
    """Reading or writing a file failed."""

    exit_code = 3
