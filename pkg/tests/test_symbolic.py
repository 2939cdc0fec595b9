from __future__ import annotations

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

import oracle
from sigmaspin.errors import DegreeOverflow, DimensionMismatch, DivisionByZero
from sigmaspin.exact_scalar import RadicalScalar
from sigmaspin.symbolic import (
    XI,
    XIBAR,
    MatrixRF,
    Polynomial,
    RationalFunction,
    VectorRF,
    dagger,
    determinant,
    outer,
    rf_equal,
    wirtinger_d,
)
from strategies import polynomials, rational_functions

RF = RationalFunction
ONE = RF.one()
I = RF.coerce(RadicalScalar.imag_unit())
W = ONE + XI * XIBAR


# -- polynomials ---------------------------------------------------------------


def test_polynomial_basic_arithmetic():
    p = Polynomial.xi() + Polynomial.one()
    q = p * p
    assert q == Polynomial({(2, 0): 1, (1, 0): 2, (0, 0): 1})
    assert q.exact_div(p) == p
    assert (q + Polynomial.one()).exact_div(p) is None
    assert q.degree() == 2 and q.leading_monomial() == (2, 0)


def test_polynomial_derivative_and_involution():
    p = Polynomial({(2, 1): 3, (0, 1): RadicalScalar.imag_unit()})
    assert p.derivative("xi") == Polynomial({(1, 1): 6})
    assert p.involution() == Polynomial({(1, 2): 3, (1, 0): -RadicalScalar.imag_unit()})


def test_polynomial_render_is_grlex():
    p = Polynomial({(0, 0): 1, (1, 1): 4, (2, 2): 1})
    assert str(p) == "xi^2*xibar^2 + 4*xi*xibar + 1"


def test_degree_cap():
    with pytest.raises(DegreeOverflow):
        Polynomial.monomial(300, 0) * Polynomial.monomial(300, 0)


def test_polynomial_evaluate_vectorised():
    p = Polynomial({(2, 0): 1, (0, 1): 2})
    z = np.array([1.0, 2.0j])
    w = np.array([3.0, -1.0])
    assert np.allclose(p.evaluate(z, w), z**2 + 2 * w)


# -- rational functions ----------------------------------------------------


def test_rf_equal_examples():
    assert rf_equal(XI / W, (XI + XI * XI * XIBAR) / W**2)
    assert not rf_equal(XI, XIBAR)
    assert rf_equal((ONE - XI * XIBAR) / W, (ONE - XI**2 * XIBAR**2) / W**2)


def test_reduction_cancels_known_factor():
    r = (XI + XI * XI * XIBAR) / W**2
    assert str(r) == "xi/(xi*xibar + 1)"


def test_wirtinger_examples():
    assert wirtinger_d(XI**2 * XIBAR, "xi").equals(RF.coerce(2) * XI * XIBAR)
    assert wirtinger_d(ONE / W, "xi").equals(-XIBAR / W**2)
    az = (XI * XIBAR - ONE) / (RF.coerce(2) * W)
    assert wirtinger_d(wirtinger_d(az, "xibar"), "xi").equals((ONE - XI * XIBAR) / W**3)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ONE / RF.zero()


def test_counterexample_element_evaluates():
    el = RF.coerce(-3) * XI * XIBAR**3 / ((XI**2 * XIBAR**2 + XI * XIBAR + ONE) * (XI**2 * XIBAR**2 + RF.coerce(4) * XI * XIBAR + ONE))
    assert complex(el.evaluate(1.0, 1.0)) == pytest.approx(-1 / 6)


def test_render_matches_oracle():
    r = (RF.coerce(mpq(1, 2)) * XI - I * XIBAR) / W**2 + RF.coerce(RadicalScalar.sqrt(2)) / XI
    assert oracle.same(r, oracle.to_sympy(str(r)))
    sym = (oracle.xi / 2 - oracle.sp.I * oracle.xibar) / (1 + oracle.xi * oracle.xibar) ** 2
    sym = sym + oracle.sp.sqrt(2) / oracle.xi
    assert oracle.same(r, sym)


@given(rational_functions(), rational_functions())
def test_arithmetic_matches_oracle(a, b):
    ea, eb = oracle.to_sympy(a), oracle.to_sympy(b)
    assert oracle.same(a + b, ea + eb)
    assert oracle.same(a * b, ea * eb)


@given(rational_functions(), rational_functions())
def test_leibniz_rule(a, b):
    for which in ("xi", "xibar"):
        lhs = wirtinger_d(a * b, which)
        rhs = wirtinger_d(a, which) * b + a * wirtinger_d(b, which)
        assert lhs.equals(rhs)


@given(rational_functions())
def test_mixed_partials_commute(a):
    assert a.d_xi().d_xibar().equals(a.d_xibar().d_xi())


@given(rational_functions())
def test_derivative_matches_oracle(a):
    assert oracle.same(a.d_xi(), oracle.sp.diff(oracle.to_sympy(a), oracle.xi))


@given(rational_functions())
def test_involution_is_involutive(a):
    assert a.involution().involution().equals(a)
    assert oracle.same(a.involution(), oracle.dagger_expr(oracle.to_sympy(a)))


@given(rational_functions(), rational_functions(), st.integers(0, 2**31 - 1))
def test_numeric_cross_check(a, b, seed):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.2, 1.5, size=(20, 2)) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(20, 2)))
    xi, xb = pts[:, 0], pts[:, 1]
    av, bv = a.evaluate(xi, xb), b.evaluate(xi, xb)
    for exact, ref in ((a + b, av + bv), (a * b, av * bv), (a - b, av - bv)):
        val = exact.evaluate(xi, xb)
        assert np.allclose(val, ref, rtol=1e-10, atol=1e-10 * max(1.0, np.max(np.abs(ref))))


@given(polynomials(), polynomials())
def test_polynomial_exact_division_round_trip(p, q):
    if q.is_zero():
        return
    assert (p * q).exact_div(q) == p


# -- matrices ------------------------------------------------------------------


def test_dagger_examples():
    assert dagger(MatrixRF([[XI]])).equals(MatrixRF([[XIBAR]]))
    assert dagger(MatrixRF([[I]])).equals(MatrixRF([[-I]]))


def test_commutator_with_identity():
    m = MatrixRF([[XI, ONE], [XIBAR / W, RF.coerce(3)]])
    assert MatrixRF.identity(2).commutator(m).is_zero()


def test_outer_product_and_trace():
    f = VectorRF([1, XI])
    assert outer(f, f).equals(MatrixRF([[ONE, XIBAR], [XI, XI * XIBAR]]))
    m = MatrixRF([[ONE / W, XIBAR], [XI, XI * XIBAR / W]])
    assert m.trace().equals(ONE)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        MatrixRF.identity(2) @ MatrixRF.identity(3)
    with pytest.raises(DimensionMismatch):
        MatrixRF.identity(2) + MatrixRF.identity(3)
    with pytest.raises(DimensionMismatch):
        MatrixRF([[1, 2], [3]])


def test_determinant_matches_oracle():
    m = MatrixRF([[XI / W, ONE, XIBAR], [ONE, XI * XIBAR, I], [XIBAR / W, RF.coerce(2), XI]])
    assert oracle.same(determinant(m), oracle.matrix(m).det())


@st.composite
def matrices(draw, n=2):
    return MatrixRF([[draw(rational_functions()) for _ in range(n)] for _ in range(n)])


@given(matrices(), matrices())
def test_dagger_reverses_products(a, b):
    assert dagger(a @ b).equals(dagger(b) @ dagger(a))
    assert dagger(dagger(a)).equals(a)
