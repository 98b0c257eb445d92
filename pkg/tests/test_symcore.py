"""Tests for the symbolic kernel."""

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from src.bispec.errors import DegreeCapExceeded, InvalidInput
from src.bispec.symcore import (
    ArithOp,
    DiffOp,
    SymExpr,
    VarKind,
    WeylExpr,
    apply_diffop,
    gaussian_moment,
    normal_order,
    phi,
    phi_E_phi,
    phibar,
    poly_arith,
    symplectic_form,
)
from src.bispec.symcore.poly import OMEGA2
from src.bispec.symcore.weyl import from_words

p1, p2 = phi(1).symbol, phi(2).symbol
b1, b2 = phibar(1).symbol, phibar(2).symbol


def test_product_of_variables():
    """phi_1 times phibar_1."""
    product = SymExpr.var(phi(1)) * SymExpr.var(phibar(1))
    assert product == SymExpr(p1 * b1)


def test_adding_zero():
    """P + 0 = P."""
    P = SymExpr(p1**2 + 3 * b2)
    assert P + 0 == P
    assert poly_arith(P, SymExpr(0), ArithOp.ADD) == P


def test_square_expands():
    """(phi_1 + phi_2)^2 in commuting variables."""
    s = SymExpr.var(phi(1)) + SymExpr.var(phi(2))
    assert poly_arith(s, s, ArithOp.MUL) == SymExpr(p1**2 + 2 * p1 * p2 + p2**2)


def test_scale_rejects_expression_operand():
    """ArithOp.SCALE needs a scalar."""
    with pytest.raises(InvalidInput):
        poly_arith(SymExpr(p1), SymExpr(p2), ArithOp.SCALE)


def test_degree_and_hypercharge():
    """phi_1^2 phibar_2 has degree 3 and hypercharge 1."""
    f = SymExpr(p1**2 * b2)
    assert f.degree() == 3
    assert f.hypercharge() == 1
    assert f.variables() == frozenset({phi(1), phibar(2)})


def test_mixed_hypercharge_is_none():
    """No single hypercharge for phi_1 + phibar_1."""
    assert SymExpr(p1 + b1).hypercharge() is None


def test_conjugate_swaps_pairs():
    """Conjugation swaps phi and phibar and conjugates coefficients."""
    assert SymExpr(sp.I * p1 * b2).conjugate() == SymExpr(-sp.I * b1 * p2)


def test_degree_cap():
    """Construction past the degree cap fails."""
    with pytest.raises(DegreeCapExceeded):
        SymExpr(p1**5, degree_cap=4)


def test_weighted_plus_unweighted():
    """The weight must match on both sides of a sum."""
    with pytest.raises(InvalidInput):
        SymExpr(p1).with_weight() + SymExpr(p2)


def test_derivative():
    """d/dphi_1 of phi_1^2 phibar_2."""
    assert apply_diffop(DiffOp.diff(phi(1)), SymExpr(p1**2 * b2)) == SymExpr(2 * p1 * b2)


@pytest.mark.parametrize("a,b", [(0, 0), (1, 2), (3, 1)])
def test_euler_operator(a, b):
    """phi d/dphi + phibar d/dphibar counts the degree."""
    variables = [phi(1), phibar(1)]
    op = DiffOp.euler(variables, VarKind.PLAIN) + DiffOp.euler(variables, VarKind.CONJ)
    f = SymExpr(p1**a * b1**b)
    assert op(f) == f.scale(a + b)


def test_composition_order():
    """In A * B the right operand acts first."""
    f = SymExpr(p1)
    mul, diff = DiffOp.mul(phi(1)), DiffOp.diff(phi(1))
    assert apply_diffop(mul * diff, f) == SymExpr(p1)
    assert apply_diffop(diff * mul, f) == SymExpr(2 * p1)


def test_weighted_derivative_chain_rule():
    """d/dphi_1 of the bare weight brings down -omega2 phibar_1."""
    w = SymExpr(1).with_weight()
    result = apply_diffop(DiffOp.diff(phi(1)), w)
    assert result.weighted
    assert result == SymExpr(-OMEGA2 * b1).with_weight()


def test_weighted_derivative_outside_weight():
    """Variables outside the weight differentiate plainly."""
    w = SymExpr(p2).with_weight((1,))
    assert apply_diffop(DiffOp.diff(phi(2)), w) == SymExpr(1).with_weight((1,))


def test_diffop_scalar_arithmetic():
    """Scalars act as multiples of the identity."""
    f = SymExpr(p1 * b2)
    assert apply_diffop(3 - DiffOp.identity(), f) == f.scale(2)


def test_gaussian_moment_values():
    """Normalization, index mismatch and the fourth moment."""
    assert gaussian_moment(SymExpr(1)) == 1
    assert gaussian_moment(SymExpr(p1 * b2)) == 0
    assert gaussian_moment(SymExpr(p1**2 * b1**2)) == 2


def test_gaussian_moment_factorizes():
    """|phi_1|^2 |phi_2|^4 integrates to 1! 2!."""
    assert gaussian_moment(SymExpr(p1 * b1 * p2**2 * b2**2)) == 2


def test_gaussian_moment_rejects_weighted_and_foreign():
    """Weighted integrands and Lorentz-spinor variables are rejected."""
    with pytest.raises(InvalidInput):
        gaussian_moment(SymExpr(1).with_weight())
    with pytest.raises(InvalidInput):
        gaussian_moment(SymExpr.var(phi(1, lorentz_index=1)))


def test_symplectic_form():
    """E is antisymmetric with E^2 = -1."""
    E = symplectic_form(2)
    assert E.shape == (4, 4)
    assert np.array_equal(E.T, -E)
    assert np.array_equal(E @ E, -np.eye(4, dtype=int))


def test_normal_order_single_swap():
    """phi_2 phi_1 = phi_1 phi_2 - Lambda for n = 1."""
    result = normal_order(from_words(1, [(1, (2, 1))]))
    assert result == WeylExpr(1, {((1, 2), 0): 1, ((), 1): -1})


def test_normal_order_canonical_word_unchanged():
    """phi_1 phi_1 is already ordered."""
    word = from_words(1, [(1, (1, 1))])
    assert normal_order(word) == word


def test_normal_order_three_letters():
    """phi_2 phi_1 phi_1 = phi_1 phi_1 phi_2 - 2 Lambda phi_1."""
    result = normal_order(from_words(1, [(1, (2, 1, 1))]))
    assert result == WeylExpr(1, {((1, 1, 2), 0): 1, ((1,), 1): -2})
    assert result.is_canonical()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_phi_E_phi_is_central(n):
    """E_ab phi_a phi_b orders to Lambda n."""
    assert normal_order(phi_E_phi(n)) == WeylExpr.scalar(n, n, lambda_power=1)


@settings(max_examples=30, deadline=None)
@given(
    word=st.lists(st.integers(min_value=1, max_value=4), min_size=0, max_size=6),
    seed=st.integers(min_value=0, max_value=1000),
)
def test_normal_order_strategy_independent(word, seed):
    """Random and leftmost reduction reach the same canonical form."""
    expr = from_words(2, [(1, tuple(word))])
    leftmost = normal_order(expr)
    assert normal_order(expr, strategy="random", seed=seed) == leftmost
    assert leftmost.is_canonical()


def test_normal_order_word_cap():
    """Words longer than the cap are refused."""
    with pytest.raises(DegreeCapExceeded):
        normal_order(from_words(1, [(1, (2, 1) * 5)]))


def test_normal_order_unknown_strategy():
    """Only leftmost and random are known."""
    with pytest.raises(InvalidInput):
        normal_order(phi_E_phi(1), strategy="rightmost")


def test_generator_index_range():
    """Generators are numbered 1..2n."""
    with pytest.raises(InvalidInput):
        WeylExpr.generator(1, 3)
