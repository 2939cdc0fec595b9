from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from gmpy2 import mpq

import oracle
from sigmaspin.errors import ConventionBoundary, DegenerateChain, ParameterOutOfRange
from sigmaspin.exact_scalar import RadicalScalar
from sigmaspin.parser import parse_seed
from sigmaspin.sigma_model import SigmaModel, projector_from_f
from sigmaspin.symbolic import XI, XIBAR, MatrixRF, RationalFunction, VectorRF
from sigmaspin.veronese import (
    algebraic_lower_P,
    algebraic_raise_P,
    algebraic_raise_X,
    closed_form_f,
    closed_form_projector,
    decompose_spin,
    evaluate_alpha,
    is_tridiagonal,
    krawtchouk,
    krawtchouk_orthogonality,
    krawtchouk_value,
    ladder_expected,
    ladder_on_f,
    pauli_algebra_ok,
    pauli_basis,
    spherical_angles,
    spherical_field,
    stereographic_p,
    su2_relations,
    veronese_alpha_closed_form,
    veronese_seed,
    veronese_spin_components,
)

RF = RationalFunction
ONE = RF.one()
W = ONE + XI * XIBAR
SQ2 = RF.coerce(RadicalScalar.sqrt(2))
I = RF.coerce(RadicalScalar.imag_unit())


@pytest.fixture(scope="module")
def models():
    return {n: SigmaModel.build(veronese_seed(n)) for n in range(1, 6)}


def test_veronese_seed():
    assert veronese_seed(1).equals(VectorRF([1, XI]))
    assert veronese_seed(2).equals(VectorRF([ONE, SQ2 * XI, XI * XI]))


def test_krawtchouk_values():
    assert all(krawtchouk_value(j, 0, 4, Fraction(1, 3)) == 1 for j in range(5))
    assert krawtchouk_value(1, 1, 2, Fraction(1, 2)) == 0
    # K_1(1; p, 2s) = 1 - 1/(2s p)
    p = stereographic_p()
    assert krawtchouk(1, 1, 3, p).equals(ONE - (ONE / (RF.coerce(3) * p)))
    with pytest.raises(ParameterOutOfRange):
        krawtchouk_value(3, 0, 2, Fraction(1, 2))


def test_krawtchouk_orthogonality():
    for n in range(1, 5):
        for k in range(n + 1):
            for k2 in range(n + 1):
                val = krawtchouk_orthogonality(n, k, k2)
                assert val.is_zero() == (k != k2)


def test_pauli_basis():
    b = pauli_basis(1)
    assert b.sigma_x.equals(MatrixRF([[0, 1], [1, 0]]))
    assert b.sigma_y.equals(MatrixRF([[0, -I], [I, 0]]))
    assert b.sigma_z.equals(MatrixRF([[1, 0], [0, -1]]))
    assert pauli_basis(2).sigma_x[0, 1].equals(SQ2)
    assert pauli_basis(3).casimir().equals(MatrixRF.identity(4).scale(15))
    for n in range(1, 6):
        assert all(pauli_algebra_ok(pauli_basis(n)).values())


def test_decomposition_veronese_n3(models):
    dec = decompose_spin(models[2].Sz, pauli_basis(2))
    assert dec.exists
    two = RF.coerce(2)
    assert dec.alpha_z.equals((XI * XIBAR - ONE) / (two * W))
    assert dec.alpha_x.equals(-(XI + XIBAR) / (two * W))
    assert dec.alpha_y.equals(I * (XI - XIBAR) / (two * W))
    assert dec.normalization().equals(ONE) and dec.is_real()
    assert dec.rebuild(pauli_basis(2)).equals(models[2].Sz)


def test_decomposition_counterexample():
    m = SigmaModel.build(parse_seed("1, xi, xi^2"))
    dec = decompose_spin(m.Sz, pauli_basis(2))
    assert not dec.exists
    expected = oracle.to_sympy("-3*xi*xibar^3/((xi^2*xibar^2+xi*xibar+1)*(xi^2*xibar^2+4*xi*xibar+1))")
    assert oracle.same(dec.residual[0, 2], expected)
    assert not is_tridiagonal(m.Sz)


def test_decomposition_of_constant():
    b = pauli_basis(3)
    dec = decompose_spin(b.sigma_z.scale(mpq(1, 2)), b)
    assert dec.exists
    assert [str(a) for a in dec.alpha] == ["0", "0", "1/2"]


def test_spin_components_and_su2(models):
    Sz, Sp, Sm = veronese_spin_components(1)
    two = RF.coerce(2)
    expected = MatrixRF([[XI * XIBAR - ONE, -two * XIBAR], [-two * XI, ONE - XI * XIBAR]]).scale(ONE / (two * W))
    assert Sz.equals(expected)
    for n, m in models.items():
        Sz, Sp, Sm = veronese_spin_components(n)
        assert Sz.equals(m.Sz)
        assert all(su2_relations(Sz, Sp, Sm).values())
        assert is_tridiagonal(Sz)


def test_ladder_examples():
    v = ladder_on_f("plus", 0, 1)
    assert v.equals(VectorRF([XIBAR, -ONE]))
    assert v.equals(closed_form_f(1, 1).scale(-W))
    assert ladder_on_f("minus", 0, 2).is_zero()
    assert ladder_on_f("plus", 2, 2).is_zero()
    with pytest.raises(ConventionBoundary):
        ladder_on_f("plus", 3, 2)
    for n in range(1, 6):
        for k in range(n + 1):
            for w in ("plus", "minus"):
                assert ladder_on_f(w, k, n).equals(ladder_expected(w, k, n))


def test_closed_forms_match_chain(models):
    for n, m in models.items():
        for k in range(n + 1):
            assert projector_from_f(closed_form_f(k, n)).equals(m.P[k])
            assert closed_form_projector(k, n).equals(m.P[k])


def test_algebraic_recurrences(models):
    m = models[1]
    _, Sp, Sm = veronese_spin_components(1)
    assert algebraic_raise_P(m.P[0], Sp, Sm).equals(MatrixRF([[XI * XIBAR, -XIBAR], [-XI, ONE]]).scale(ONE / W))
    m3 = models[2]
    _, Sp, Sm = veronese_spin_components(2)
    P1 = m3.P[1]
    assert algebraic_raise_P(algebraic_lower_P(P1, Sp, Sm), Sp, Sm).equals(P1)
    assert algebraic_raise_X(m3.X[0], m3.P[0], Sp, Sm).equals(m3.X[1])
    with pytest.raises(DegenerateChain):
        algebraic_raise_P(m3.P[2], Sp, Sm)


def test_alpha_closed_form_for_every_spin(models):
    for n, m in models.items():
        dec = decompose_spin(m.Sz, pauli_basis(n))
        assert all(a.equals(b) for a, b in zip(dec.alpha, veronese_alpha_closed_form()))


def test_spherical_probes(models):
    dec = decompose_spin(models[2].Sz, pauli_basis(2))
    origin = evaluate_alpha(dec, np.array([0j]))[:, 0]
    assert np.allclose(origin, [0, 0, -0.5], atol=0)
    eq = np.exp(1j * np.linspace(0.1, 6.0, 25))
    theta, _, _ = spherical_angles(evaluate_alpha(dec, eq))
    assert np.max(np.abs(theta - np.pi / 2)) < 1e-12
    _, phi, pole = spherical_angles(evaluate_alpha(dec, np.array([1.0 + 0j])))
    assert not pole[0] and phi[0] == pytest.approx(np.pi)


def test_spherical_convention_report(models):
    dec = decompose_spin(models[2].Sz, pauli_basis(2))
    xi = 0.3 * np.exp(1j * np.linspace(0, 6, 7)) * np.arange(1, 8)
    sf = spherical_field(dec, xi)
    assert sf.theta_convention == "theta = pi - 2*arctan|xi|"
    assert sf.phi_convention == "phi = arg(xi) + pi"
    assert np.all((sf.theta >= 0) & (sf.theta <= np.pi))
