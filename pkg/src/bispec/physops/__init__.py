"""Physical operators on the Heisenberg-algebra models, skeletons, sp(2n) bases and their checks."""

from src.bispec.physops.checks import (
    lambda_check,
    lambda_derivation,
    lambda_from_dimension,
    sigma_tau_completeness,
    verify_m2_closed_form,
    verify_sp_basis,
    verify_sp_completeness,
    weighted_eigenvalue_check,
)
from src.bispec.physops.operators import (
    OperatorName,
    build_operator,
    sigma_minus,
    sigma_plus,
)
from src.bispec.physops.skeletons import (
    OctetMember,
    SkeletonKind,
    SkeletonSpec,
    skeleton_inner_product,
)
from src.bispec.physops.spbasis import SpBasis, build_full_basis, build_sp_basis

__all__ = [
    "OctetMember",
    "OperatorName",
    "SkeletonKind",
    "SkeletonSpec",
    "SpBasis",
    "build_full_basis",
    "build_operator",
    "build_sp_basis",
    "lambda_check",
    "lambda_derivation",
    "lambda_from_dimension",
    "sigma_minus",
    "sigma_plus",
    "sigma_tau_completeness",
    "skeleton_inner_product",
    "verify_m2_closed_form",
    "verify_sp_basis",
    "verify_sp_completeness",
    "weighted_eigenvalue_check",
]
