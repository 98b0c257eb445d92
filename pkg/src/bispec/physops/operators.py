"""Physical operators on the canonical variables: N, Y, isospin, Lorentz and mass squared."""

from enum import Enum
from typing import List, Optional, Tuple

import sympy as sp
from loguru import logger

from src.bispec.errors import InvalidInput, InvalidModel
from src.bispec.models import ModelKind
from src.bispec.symcore.diffop import DiffOp
from src.bispec.symcore.poly import ALL_VARS, VarId, VarKind, phi, phibar

# Pauli matrices; index 3 of the (+/-) four-vectors is +/- i times the unit matrix
PAULI: Tuple[sp.Matrix, ...] = (
    sp.Matrix([[0, 1], [1, 0]]),
    sp.Matrix([[0, -sp.I], [sp.I, 0]]),
    sp.Matrix([[1, 0], [0, -1]]),
)
UNIT = sp.eye(2)
# tau = [[0, 1], [-1, 0]]
EPSILON = sp.Matrix([[0, 1], [-1, 0]])


class OperatorName(str, Enum):
    """Operators that build_operator can assemble."""

    N = "N"
    Y = "Y"
    ISOSPIN = "i"
    LORENTZ = "k"
    ISOSPIN_SQUARED = "i2"
    LORENTZ_SQUARED = "k2"
    M2_DIRECT_H8 = "M2_direct_h8"
    M2_DIRECT_H16 = "M2_direct_h16"
    M2_CLOSED = "M2_closed"
    M2_GENERATORS = "M2_generators"


def sigma_plus(mu: int) -> sp.Matrix:
    """(sigma_1, sigma_2, sigma_3, i*1)[mu]."""
    return PAULI[mu] if mu < 3 else sp.I * UNIT


def sigma_minus(mu: int) -> sp.Matrix:
    """(sigma_1, sigma_2, sigma_3, -i*1)[mu]."""
    return PAULI[mu] if mu < 3 else -sp.I * UNIT


# Isotopic matrices share the Pauli set
tau_plus = sigma_plus
tau_minus = sigma_minus


def model_variables(model: ModelKind) -> Tuple[VarId, ...]:
    """Canonical variables of a model; h8 keeps the single iso index 1."""
    if model == ModelKind.H8:
        return tuple(v for v in ALL_VARS if v.iso_index == 1)
    return ALL_VARS


def _iso_indices(model: ModelKind) -> Tuple[int, ...]:
    return (1,) if model == ModelKind.H8 else (1, 2)


def number_operator(model: ModelKind = ModelKind.H16) -> DiffOp:
    """N = phi d + phibar dbar, the total degree."""
    variables = model_variables(model)
    return DiffOp.euler(variables, VarKind.PLAIN) + DiffOp.euler(variables, VarKind.CONJ)


def hypercharge_operator(model: ModelKind = ModelKind.H16) -> DiffOp:
    """Y = phi d - phibar dbar."""
    variables = model_variables(model)
    return DiffOp.euler(variables, VarKind.PLAIN) - DiffOp.euler(variables, VarKind.CONJ)


def _check_component(a: int) -> None:
    if a not in (1, 2, 3):
        raise InvalidInput(f"Generator component must be 1, 2 or 3, got {a}")


def _generator(a: int, conj_sign: int) -> DiffOp:
    """-1/2 (phi tau_a^T d + conj_sign * phibar tau_a dbar) on the additional variables."""
    _check_component(a)
    tau = PAULI[a - 1]
    op = DiffOp()
    for k in (1, 2):
        for m in (1, 2):
            plain = DiffOp.mul(phi(k)) * DiffOp.diff(phi(m))
            conj = DiffOp.mul(phibar(k)) * DiffOp.diff(phibar(m))
            op = op + plain.scale(tau[m - 1, k - 1]) + conj.scale(conj_sign * tau[k - 1, m - 1])
    return op.scale(sp.Rational(-1, 2))


def isospin_operator(a: int) -> DiffOp:
    """Isospin generator i_a = -1/2 (phi tau_a^T d - phibar tau_a dbar)."""
    return _generator(a, conj_sign=-1)


def lorentz_operator(a: int) -> DiffOp:
    """k_a = -1/2 (phi tau_a^T d + phibar tau_a dbar)."""
    return _generator(a, conj_sign=1)


def isospin_squared() -> DiffOp:
    """Casimir i^2 = i_1^2 + i_2^2 + i_3^2."""
    return DiffOp.sum(isospin_operator(a) * isospin_operator(a) for a in (1, 2, 3))


def lorentz_squared() -> DiffOp:
    """k^2 = k_1^2 + k_2^2 + k_3^2."""
    return DiffOp.sum(lorentz_operator(a) * lorentz_operator(a) for a in (1, 2, 3))


def momentum_operator(mu: int, iso_indices: Tuple[int, ...] = (1, 2)) -> DiffOp:
    """p_mu = phibar sigma+_mu phi as a multiplication operator."""
    sigma = sigma_plus(mu)
    ops = []
    for m in iso_indices:
        for beta in (1, 2):
            for alpha in (1, 2):
                c = sigma[beta - 1, alpha - 1]
                if c != 0:
                    op = DiffOp.mul(phibar(m, beta)) * DiffOp.mul(phi(m, alpha))
                    ops.append(op.scale(c))
    return DiffOp.sum(ops)


def dual_momentum_operator(mu: int, iso_indices: Tuple[int, ...] = (1, 2)) -> DiffOp:
    """pdot_mu = -d sigma-_mu dbar."""
    sigma = sigma_minus(mu)
    ops = []
    for k in iso_indices:
        for gamma in (1, 2):
            for delta in (1, 2):
                c = sigma[gamma - 1, delta - 1]
                if c != 0:
                    op = DiffOp.diff(phi(k, gamma)) * DiffOp.diff(phibar(k, delta))
                    ops.append(op.scale(-c))
    return DiffOp.sum(ops)


def m2_contracted(model: ModelKind) -> DiffOp:
    """2 sum_mu pdot_mu p_mu, the sigma-completeness contraction."""
    iso = _iso_indices(model)
    return DiffOp.sum(
        dual_momentum_operator(mu, iso) * momentum_operator(mu, iso) for mu in range(4)
    ).scale(2)


def m2_explicit(model: ModelKind) -> DiffOp:
    """-4 d_(alpha k) dbar_(beta k) phibar_(beta m) phi_(alpha m), summed."""
    iso = _iso_indices(model)
    ops: List[DiffOp] = []
    for alpha in (1, 2):
        for beta in (1, 2):
            for k in iso:
                for m in iso:
                    ops.append(
                        DiffOp.diff(phi(k, alpha))
                        * DiffOp.diff(phibar(k, beta))
                        * DiffOp.mul(phibar(m, beta))
                        * DiffOp.mul(phi(m, alpha))
                    )
    return DiffOp.sum(ops).scale(-4)


def m2_closed() -> DiffOp:
    """4 i^2 - N^2 - 10 N - 32."""
    n_op = number_operator(ModelKind.H16)
    return isospin_squared().scale(4) - n_op * n_op - n_op.scale(10) - 32


def m2_generators() -> DiffOp:
    """-4 [(k^2 - i^2)/2 + (N^2 - Y^2)/8 + 2N + 8]."""
    n_op = number_operator(ModelKind.H16)
    y_op = hypercharge_operator(ModelKind.H16)
    inner = (
        (lorentz_squared() - isospin_squared()).scale(sp.Rational(1, 2))
        + (n_op * n_op - y_op * y_op).scale(sp.Rational(1, 8))
        + n_op.scale(2)
        + 8
    )
    return inner.scale(-4)


def build_operator(
    name: OperatorName, model: ModelKind, component: Optional[int] = None
) -> DiffOp:
    """
    Assemble a named operator for a model.

    Args:
        name: Operator to build
        model: h8 or h16
        component: Generator component 1..3 for the isospin and Lorentz generators

    Returns:
        The DiffOp

    Raises:
        InvalidModel: If the operator does not exist in the model
    """
    name = OperatorName(name)
    model = ModelKind(model)
    logger.debug(f"Building operator {name.value} for {model.value}")

    if name == OperatorName.N:
        return number_operator(model)
    if name == OperatorName.Y:
        return hypercharge_operator(model)
    if name == OperatorName.M2_DIRECT_H8:
        if model != ModelKind.H8:
            raise InvalidModel("M2_direct_h8 is defined for the h8 model only")
        return m2_contracted(model)

    # Everything below mixes the two iso indices
    if model != ModelKind.H16:
        raise InvalidModel(f"{name.value} needs the U(2) isotopic symmetry of h16")
    if name == OperatorName.ISOSPIN:
        return isospin_operator(component or 3)
    if name == OperatorName.LORENTZ:
        return lorentz_operator(component or 3)
    if name == OperatorName.ISOSPIN_SQUARED:
        return isospin_squared()
    if name == OperatorName.LORENTZ_SQUARED:
        return lorentz_squared()
    if name == OperatorName.M2_DIRECT_H16:
        return m2_contracted(model)
    if name == OperatorName.M2_CLOSED:
        return m2_closed()
    return m2_generators()
