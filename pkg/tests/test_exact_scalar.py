from __future__ import annotations

import cmath

import pytest
from gmpy2 import mpq
from hypothesis import given

from sigmaspin.errors import DivisionByZero, RadicandOverflow
from sigmaspin.exact_scalar import (
    GaussianRational,
    RadicalScalar,
    radical_product,
    render_scalar,
    squarefree_decompose,
)
from strategies import scalars

R = RadicalScalar
I = R.imag_unit()
ONE = R.one()


def sqrt(n):
    return R.sqrt(n)


# -- worked examples ---------------------------------------------------------


def test_square_of_root():
    assert sqrt(2) * sqrt(2) == R(2)


def test_coprime_radicands_multiply():
    assert sqrt(2) * sqrt(3) == sqrt(6)


def test_conjugate_pair_product():
    assert (ONE + sqrt(2)) * (ONE - sqrt(2)) == R(-1)


def test_shared_prime_radicands():
    # sqrt(6) sqrt(10) = 2 sqrt(15)
    assert sqrt(6) * sqrt(10) == R(2) * sqrt(15)


def test_inverse_examples():
    assert R(2).inverse() == R(mpq(1, 2))
    assert sqrt(2).inverse() == R(mpq(1, 2)) * sqrt(2)
    assert (ONE + sqrt(2)).inverse() == R(-1) + sqrt(2)


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        R.zero().inverse()
    with pytest.raises(ZeroDivisionError):
        ONE / R.zero()


def test_conjugate_examples():
    assert (I * sqrt(2)).conjugate() == -(I * sqrt(2))
    assert R(mpq(3, 5)).conjugate() == R(mpq(3, 5))
    a = R(1) + R(2) * I + (R(1) - I) * sqrt(3)
    b = R(1) - R(2) * I + (R(1) + I) * sqrt(3)
    assert a.conjugate() == b


def test_sqrt_extracts_square_part():
    assert sqrt(12) == R(2) * sqrt(3)
    assert sqrt(mpq(1, 2)) == R(mpq(1, 2)) * sqrt(2)
    assert sqrt(49) == R(7)
    assert sqrt(0).is_zero()


def test_squarefree_decompose():
    assert squarefree_decompose(72) == (6, 2)
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(2 * 3 * 5 * 7) == (1, 210)


def test_radical_product_rule():
    assert radical_product(6, 10) == (2, 15)
    assert radical_product(2, 2) == (2, 1)


def test_radicand_limit():
    # the product of many distinct primes leaves the supported tower
    big = ONE
    with pytest.raises(RadicandOverflow):
        for p in (2, 3, 5, 7, 11, 13, 17):
            big = big * (ONE + sqrt(p))


def test_canonical_zero_and_rational_part():
    z = sqrt(2) - sqrt(2)
    assert z.is_zero() and z == R.zero()
    a = R(mpq(3, 4)) + sqrt(5)
    assert a.rational_part() == GaussianRational(mpq(3, 4))
    assert a.radicands() == {1, 5}
    assert not a.is_rational() and a.is_real()


def test_render():
    assert render_scalar(R(mpq(1, 2)) + I * R(mpq(3, 4)) + sqrt(2) * R(mpq(5, 6))) == "1/2 + (3/4)*i + (5/6)*sqrt(2)"
    assert render_scalar(-sqrt(3)) == "-sqrt(3)"
    assert render_scalar(R.zero()) == "0"


def test_float_evaluation():
    assert complex(R(1) + sqrt(2) * I) == pytest.approx(1 + 1.4142135623730951j)
    assert float(sqrt(8)) == pytest.approx(2.8284271247461903)


# -- properties ---------------------------------------------------------------


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(scalars(nonzero=True))
def test_inverse_property(a):
    assert a * a.inverse() == ONE


@given(scalars(), scalars())
def test_conjugation_is_an_involutive_automorphism(a, b):
    assert a.conjugate().conjugate() == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()


@given(scalars(), scalars())
def test_numeric_homomorphism(a, b):
    prod = complex(a * b)
    ref = complex(a) * complex(b)
    assert cmath.isclose(prod, ref, rel_tol=1e-12, abs_tol=1e-12)
