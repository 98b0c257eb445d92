"""Tests for the physical operators, skeletons and sp(2n) bases."""

from fractions import Fraction

import pytest
import sympy as sp
from pydantic import ValidationError

from src.bispec.errors import DomainError, InvalidInput, InvalidModel
from src.bispec.models import ModelKind
from src.bispec.physops import (
    OctetMember,
    OperatorName,
    SkeletonSpec,
    build_full_basis,
    build_operator,
    build_sp_basis,
    lambda_check,
    lambda_from_dimension,
    sigma_tau_completeness,
    skeleton_inner_product,
    verify_m2_closed_form,
    verify_sp_basis,
    verify_sp_completeness,
    weighted_eigenvalue_check,
)
from src.bispec.physops.checks import (
    distribution_identities,
    eigenvalue_consistency,
    lambda_derivation,
    operator_contraction_check,
    verify_generator_forms,
)
from src.bispec.physops.spbasis import closure_residual, is_symplectic
from src.bispec.symcore import SymExpr, apply_diffop, phi, phibar

p1, p2 = phi(1).symbol, phi(2).symbol
b1, b2 = phibar(1).symbol, phibar(2).symbol


def test_number_and_hypercharge_operators():
    """N counts the degree, Y the phi excess."""
    f = SymExpr(p1**2 * b2)
    assert apply_diffop(build_operator(OperatorName.N, ModelKind.H16), f) == f.scale(3)
    assert apply_diffop(build_operator(OperatorName.Y, ModelKind.H16), f) == f.scale(1)


def test_closed_form_on_small_skeletons():
    """-32 on constants and -40 on phi_2."""
    closed = build_operator(OperatorName.M2_CLOSED, ModelKind.H16)
    assert apply_diffop(closed, SymExpr(1)) == SymExpr(-32)
    assert apply_diffop(closed, SymExpr(p2)) == SymExpr(-40 * p2)


def test_direct_operator_on_constant():
    """The contracted operator reproduces -32 on constants."""
    direct = build_operator(OperatorName.M2_DIRECT_H16, ModelKind.H16)
    assert apply_diffop(direct, SymExpr(1)) == SymExpr(-32)


@pytest.mark.parametrize(
    "name", [OperatorName.ISOSPIN, OperatorName.M2_CLOSED, OperatorName.M2_DIRECT_H16]
)
def test_h16_operators_refused_on_h8(name):
    """Operators mixing iso indices do not exist in h8."""
    with pytest.raises(InvalidModel):
        build_operator(name, ModelKind.H8)


def test_h8_operator_refused_on_h16():
    """M2_direct_h8 belongs to h8 only."""
    with pytest.raises(InvalidModel):
        build_operator(OperatorName.M2_DIRECT_H8, ModelKind.H16)


def test_isospin_generator_component_range():
    """Components run over 1..3."""
    with pytest.raises(InvalidInput):
        build_operator(OperatorName.ISOSPIN, ModelKind.H16, component=4)


def test_closed_form_random_samples():
    """Direct and closed forms agree on random polynomials."""
    report = verify_m2_closed_form(n_samples=5, max_degree=4, seed=3)
    assert report.passed, report.residual_terms
    assert report.details["inputs"] == 5


def test_closed_form_exhaustive():
    """Every monomial up to degree 3."""
    report = verify_m2_closed_form(max_degree=3, exhaustive=True)
    assert report.passed
    assert report.check_id == "m2_closed_form_exhaustive"


def test_closed_form_degree_bound():
    """Degrees above 8 are refused."""
    with pytest.raises(InvalidInput):
        verify_m2_closed_form(max_degree=9)


def test_generator_forms():
    """The Casimir relation and the generator form of the mass operator."""
    assert verify_generator_forms(max_degree=3).passed


def test_contraction_matches_explicit_sum():
    """sigma completeness turns the contraction into the explicit sum."""
    assert operator_contraction_check().passed


def test_canonical_eigenvalues():
    """Canonical skeletons up to i = 2 are eigenfunctions."""
    assert eigenvalue_consistency(max_isospin=2).passed


@pytest.mark.parametrize("member", list(OctetMember))
def test_weighted_eigenvalue_octet(member):
    """The weighted relation holds on every octet skeleton."""
    report = weighted_eigenvalue_check(SkeletonSpec.octet(member), ModelKind.H16)
    assert report.passed, report.residual_terms
    assert report.details["juttner_form"]


def test_weighted_eigenvalue_constant_and_doublet():
    """F0 = -32 on 1 and -40 on the nucleon doublet."""
    constant = SkeletonSpec.explicit(SymExpr(1))
    assert weighted_eigenvalue_check(constant).details["F0"] == -32
    doublet = SkeletonSpec.canonical(i=0.5, m=0)
    report = weighted_eigenvalue_check(doublet)
    assert report.passed
    assert report.details["F0"] == -40


def test_weighted_eigenvalue_h8():
    """phibar_1 phi_1 in h8 has F0 = -36."""
    skeleton = SkeletonSpec.explicit(SymExpr(p1 * b1), ModelKind.H8)
    report = weighted_eigenvalue_check(skeleton, ModelKind.H8)
    assert report.passed
    assert report.details["F0"] == -36
    assert report.details["c1"] == 5


def test_weighted_eigenvalue_domain_errors():
    """Spinor variables in h16 and iso index 2 in h8 fall outside the relation."""
    spinor = SkeletonSpec.explicit(SymExpr.var(phi(1, lorentz_index=1)))
    with pytest.raises(DomainError):
        weighted_eigenvalue_check(spinor, ModelKind.H16)
    second = SkeletonSpec.explicit(SymExpr(p2), ModelKind.H8)
    with pytest.raises(DomainError):
        weighted_eigenvalue_check(second, ModelKind.H8)


def test_non_eigenfunction_has_no_isospin():
    """phibar_1 phi_1 mixes i = 0 and i = 1."""
    with pytest.raises(DomainError):
        weighted_eigenvalue_check(SkeletonSpec.explicit(SymExpr(p1 * b1)), ModelKind.H16)


def test_skeleton_construction_rules():
    """m outside 0..2i and inhomogeneous polynomials are rejected."""
    with pytest.raises(ValidationError):
        SkeletonSpec.canonical(i=1, m=3)
    with pytest.raises(ValidationError):
        SkeletonSpec.explicit(SymExpr(p1 + p1 * b1))


def test_octet_quantum_numbers():
    """N and Y are read from the skeleton polynomial."""
    xi = SkeletonSpec.octet(OctetMember.XI)
    assert (xi.N, xi.Y, xi.isospin) == (5, -1, Fraction(1, 2))
    sigma = SkeletonSpec.octet(OctetMember.SIGMA, component=1)
    assert (sigma.N, sigma.Y) == (2, 0)


def test_canonical_skeletons_orthonormal():
    """Canonical skeletons are orthonormal under the Gaussian product."""
    a = SkeletonSpec.canonical(i=1, m=0)
    b = SkeletonSpec.canonical(i=1, m=1)
    c = SkeletonSpec.canonical(i=1, m=2)
    assert skeleton_inner_product(a, a) == 1
    assert skeleton_inner_product(c, c) == 1
    assert skeleton_inner_product(a, b) == 0


def test_sigma_tau_completeness():
    """All three relations, with the sampled entries."""
    report = sigma_tau_completeness()
    assert report.passed
    values = report.details["values"]
    assert values["sigma+sigma-(1,1,1,1)"] == "2"
    assert values["tau+tau-(1,2,2,1)"] == "2"
    assert values["tau+tau+(1,1,1,1)"] == "0"


def test_distribution_identities():
    """Binomial normalization and the Poisson sum."""
    report = distribution_identities(max_isospin=2)
    assert report.passed
    assert report.details["poisson_sums"]["1.0"] == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("n,count", [(1, 3), (2, 10), (3, 21)])
def test_sp_basis_dimension(n, count):
    """sp(n) has n(2n+1) basis matrices."""
    basis = build_sp_basis(n)
    assert len(basis) == count
    assert basis.exact
    assert all(is_symplectic(B, n) for B in basis.directions)


def test_sp_basis_numeric_large():
    """n = 8 is built in floating point with 136 matrices."""
    basis = build_sp_basis(8)
    assert len(basis) == 136
    assert not basis.exact


def test_sp_basis_limits():
    """n = 0 and exact n = 4 are refused."""
    with pytest.raises(InvalidInput):
        build_sp_basis(0)
    with pytest.raises(InvalidInput):
        build_sp_basis(4, exact=True)


@pytest.mark.parametrize("n", [1, 2])
def test_verify_sp_basis(n):
    """Dimension, symplecticity, orthogonality and closure."""
    assert verify_sp_basis(n).passed
    assert closure_residual(build_sp_basis(n)) == []


def test_full_basis_starts_with_identity():
    """The complement starts with the unit matrix."""
    basis = build_full_basis(1)
    assert len(basis) == 4
    assert basis.full
    assert basis.directions[0] == sp.eye(2)


def test_completeness_entries_n1():
    """(1,1,1,1) gives c = 1/2 and (1,2,1,1) gives 0."""
    tensor = build_full_basis(1).completeness_tensor()
    assert tensor[0, 0, 0, 0] == Fraction(1, 2)
    assert tensor[0, 1, 0, 0] == 0


@pytest.mark.parametrize("n", [1, 2])
def test_sp_completeness(n):
    """Every index tuple passes."""
    report = verify_sp_completeness(build_sp_basis(n))
    assert report.passed
    assert report.details["tuples"] == (2 * n) ** 4


@pytest.mark.parametrize("n,expected", [(1, 3), (2, 10), (3, 21)])
def test_lambda_from_dimension(n, expected):
    """Lambda^2 = n(2n+1) exactly."""
    assert lambda_from_dimension(n) == expected


def test_lambda_from_dimension_n8():
    """The floating chain for sp(8) gives Lambda^2 = 136."""
    result = lambda_derivation(8)
    assert result["exact"] is False
    assert result["lambda2"] == pytest.approx(136, abs=1e-9)
    assert lambda_from_dimension(8) == pytest.approx(136, abs=1e-9)


def test_lambda_check_report():
    """The report form passes for n = 1."""
    report = lambda_check(1)
    assert report.passed
    assert report.details["lambda2"] == "3"
