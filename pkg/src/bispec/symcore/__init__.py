"""Exact symbolic kernel: polynomials, differential operators and Weyl normal ordering."""

from src.bispec.symcore.diffop import DiffOp, apply_diffop
from src.bispec.symcore.poly import (
    ArithOp,
    SymExpr,
    VarId,
    VarKind,
    gaussian_moment,
    phi,
    phibar,
    poly_arith,
)
from src.bispec.symcore.weyl import WeylExpr, normal_order, phi_E_phi, symplectic_form

__all__ = [
    "ArithOp",
    "DiffOp",
    "SymExpr",
    "VarId",
    "VarKind",
    "WeylExpr",
    "apply_diffop",
    "gaussian_moment",
    "normal_order",
    "phi",
    "phi_E_phi",
    "phibar",
    "poly_arith",
    "symplectic_form",
]
