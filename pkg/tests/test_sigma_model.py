from __future__ import annotations

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

import oracle
from sigmaspin.errors import DegenerateChain, IndexOutOfRange, NonHolomorphic, ZeroSeed
from sigmaspin.parser import parse_seed
from sigmaspin.sigma_model import (
    I_UNIT,
    SigmaModel,
    chain_constraints,
    el_residual,
    immersion_X,
    lower_projector,
    min_poly_residual,
    numeric_chain_check,
    projector_from_f,
    raise_f,
    raise_projector,
    recurrence_consistent,
    spin_from_immersions,
    spin_matrix,
    spin_properties,
    t_scalar,
)
from sigmaspin.symbolic import XI, XIBAR, MatrixRF, RationalFunction, VectorRF, mat_sum
from sigmaspin.veronese import veronese_seed

RF = RationalFunction
ONE = RF.one()
W = ONE + XI * XIBAR


@pytest.fixture(scope="module")
def models():
    return {n: SigmaModel.build(veronese_seed(n)) for n in range(1, 4)}


def test_raise_f_examples():
    f1 = raise_f(VectorRF([1, XI]))
    # proportional to (-xibar, 1)
    assert (f1[0] * ONE + XIBAR * f1[1]).is_zero()
    assert raise_f(VectorRF([1, 2])).is_zero()
    with pytest.raises(ZeroSeed):
        raise_f(VectorRF.zeros(2))


def test_chain_ends_with_zero(models):
    m = models[2]
    assert raise_f(m.f[-1]).is_zero()


def test_projector_examples():
    assert projector_from_f(VectorRF([1, 0])).equals(MatrixRF.diagonal([1, 0]))
    P = projector_from_f(VectorRF([1, XI]))
    assert P.equals(MatrixRF([[ONE, XIBAR], [XI, XI * XIBAR]]).scale(ONE / W))
    g = VectorRF([1, XI]).scale(XIBAR * XIBAR + RF.coerce(3))
    assert projector_from_f(g).equals(P)
    with pytest.raises(ZeroSeed):
        projector_from_f(VectorRF.zeros(3))


def test_t_scalar_and_conventions(models):
    m = models[1]
    assert t_scalar(m.P[0]).equals(W**2)
    assert m.t[0].is_zero() and m.t[-1].is_zero()


def test_raise_and_lower_projector(models):
    P0, P1 = models[1].P
    assert raise_projector(P0).equals(MatrixRF([[XI * XIBAR, -XIBAR], [-XI, ONE]]).scale(ONE / W))
    P = models[2].P[0]
    assert lower_projector(raise_projector(P)).equals(P)
    with pytest.raises(DegenerateChain):
        raise_projector(models[2].P[-1])


def test_el_residual_examples(models):
    assert el_residual(MatrixRF.diagonal([1, 0, 0])).both_zero
    for m in models.values():
        assert all(el_residual(P).both_zero for P in m.P)
    ce = SigmaModel.build(parse_seed("1, xi, xi^2"))
    assert el_residual(ce.P[0]).both_zero


def test_chain_against_sympy_oracle():
    for seed in ([1, oracle.sp.sqrt(2) * oracle.xi, oracle.xi**2], [1, oracle.xi, oracle.xi**2]):
        text = ", ".join(str(c).replace("**", "^") for c in seed)
        m = SigmaModel.build(parse_seed(text))
        ref = oracle.chain(seed)
        for P, Q in zip(m.P, ref):
            assert all(oracle.same(P[i, j], Q[i, j]) for i in range(3) for j in range(3))


def test_spin_matrix_n2(models):
    Sz = spin_matrix(models[1])
    expected = MatrixRF([[XI * XIBAR - ONE, RF.coerce(-2) * XIBAR], [RF.coerce(-2) * XI, ONE - XI * XIBAR]])
    assert Sz.equals(expected.scale(ONE / (RF.coerce(2) * W)))
    assert (Sz @ Sz).equals(MatrixRF.identity(2).scale(mpq(1, 4)))


def test_spin_properties_examples(models):
    rep = spin_properties(models[2].Sz, 2)
    assert rep.passed and rep.numeric_rank == 2 and rep.det_zero
    m4 = SigmaModel.build(veronese_seed(3))
    rep4 = spin_properties(m4.Sz, 3)
    assert rep4.killing_value.equals(RF.coerce(mpq(5, 4)))
    assert rep4.numeric_rank == 4 and not rep4.det_zero
    assert min_poly_residual(m4.Sz, 3).is_zero()


def test_immersions(models):
    m = models[1]
    assert immersion_X(m, 0).equals(immersion_X(m, 1))
    with pytest.raises(IndexOutOfRange):
        immersion_X(m, 2)
    for m in models.values():
        assert spin_from_immersions(m).equals(m.Sz)


def test_x_chain_telescoping(models):
    for m in models.values():
        n = m.N
        for k in range(m.two_s):
            lhs = m.X[k + 1] - m.X[k]
            inner = m.P[k + 1] + m.P[k] - MatrixRF.identity(n).scale(RF.coerce(mpq(2, n)))
            assert lhs.equals(inner.scale(-I_UNIT))


def test_seed_admission():
    with pytest.raises(NonHolomorphic):
        SigmaModel.build(VectorRF([ONE, XIBAR]))
    with pytest.raises(DegenerateChain):
        SigmaModel.build(parse_seed("1, xi, 2*xi"))
    with pytest.raises(ZeroSeed):
        SigmaModel.build(VectorRF.zeros(2))


def test_constraints_and_recurrence(models):
    for m in models.values():
        assert all(chain_constraints(m).values())
        assert all(recurrence_consistent(m, k) for k in range(m.two_s))
        assert numeric_chain_check(m, 100) < 1e-10


@given(st.lists(st.fractions(-5, 5, max_denominator=7), min_size=3, max_size=3))
def test_linear_combinations_solve_el(coeffs):
    m = SigmaModel.build(veronese_seed(2))
    combo = mat_sum(P.scale(mpq(c.numerator, c.denominator)) for c, P in zip(coeffs, m.P))
    assert el_residual(combo).is_zero
