"""End-to-end acceptance criteria, one test per criterion at its stated tolerance."""

from __future__ import annotations

import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from sigmaspin.heisenberg import (
    AlphaField,
    congruence_test,
    dyn_eq_residual,
    full_el_residual,
    lattice_stationarity,
)
from sigmaspin.numeric import random_unitary, sample_points
from sigmaspin.parser import parse_expression, parse_seed
from sigmaspin.pipeline import HEISENBERG_LATTICE, ModelSpec, run_pipeline, strip_timings
from sigmaspin.sigma_model import (
    SigmaModel,
    chain_constraints,
    el_residual,
    projector_from_f,
    spin_from_immersions,
    spin_properties,
)
from sigmaspin.symbolic import RationalFunction
from sigmaspin.veronese import (
    algebraic_lower_P,
    algebraic_lower_X,
    algebraic_raise_P,
    algebraic_raise_X,
    closed_form_f,
    closed_form_projector,
    decompose_spin,
    evaluate_alpha,
    krawtchouk_orthogonality,
    ladder_expected,
    ladder_on_f,
    pauli_basis,
    spherical_field,
    su2_relations,
    veronese_alpha_closed_form,
    veronese_seed,
    veronese_spin_components,
)

SPINS = (1, 2, 3, 4, 5)
COUNTEREXAMPLE = "-3*xi*xibar^3/((xi^2*xibar^2 + xi*xibar + 1)*(xi^2*xibar^2 + 4*xi*xibar + 1))"


@pytest.fixture(scope="module")
def chains():
    t0 = time.perf_counter()
    models = {n: SigmaModel.build(veronese_seed(n)) for n in SPINS}
    return models, time.perf_counter() - t0


@pytest.fixture(scope="module")
def alphas(chains):
    models, _ = chains
    return {n: decompose_spin(models[n].Sz, pauli_basis(n)) for n in SPINS}


def test_criterion_01_counterexample_reproduction():
    t0 = time.perf_counter()
    m = SigmaModel.build(parse_seed("1, xi, xi^2"))
    dec = decompose_spin(m.Sz, pauli_basis(2))
    elapsed = time.perf_counter() - t0
    assert not dec.exists
    assert dec.residual[0, 2].equals(parse_expression(COUNTEREXAMPLE))
    assert elapsed < 10.0


def test_criterion_02_veronese_chain_integrity(chains):
    models, build_time = chains
    t0 = time.perf_counter()
    for n, m in models.items():
        flags = chain_constraints(m)
        assert all(flags.values()), (n, flags)
        for P in m.P:
            r = el_residual(P)
            assert r.is_zero and r.conservation_is_zero
    assert build_time + time.perf_counter() - t0 < 300.0


def test_criterion_03_spin_matrix_properties(chains):
    models, _ = chains
    for n, m in models.items():
        rep = spin_properties(m.Sz, n, 1e-8)
        N = n + 1
        assert rep.trace_zero and rep.hermitian
        assert rep.killing_expected == Fraction(N * N - 1, 12) and rep.killing_ok
        assert rep.min_poly_zero
        assert rep.det_zero == (N % 2 == 1)
        assert rep.numeric_rank == (N if N % 2 == 0 else N - 1)
    assert spin_properties(models[3].Sz, 3).killing_expected == Fraction(5, 4)


def test_criterion_04_spin_from_immersions(chains):
    models, _ = chains
    for m in models.values():
        assert spin_from_immersions(m).equals(m.Sz)
    m1 = SigmaModel.build(parse_seed("1, xi"))
    assert m1.X[0].equals(m1.X[1])


def test_criterion_05_su2_structure_and_ladders(chains, alphas):
    models, _ = chains
    for n, m in models.items():
        Sz, Sp, Sm = veronese_spin_components(n)
        assert Sz.equals(m.Sz)
        assert alphas[n].exists
        assert all(su2_relations(Sz, Sp, Sm).values())
        for k in range(n + 1):
            for which in ("plus", "minus"):
                assert ladder_on_f(which, k, n).equals(ladder_expected(which, k, n))
        for k in range(n):
            assert algebraic_raise_P(m.P[k], Sp, Sm).equals(m.P[k + 1])
            assert algebraic_lower_P(m.P[k + 1], Sp, Sm).equals(m.P[k])
            assert algebraic_raise_X(m.X[k], m.P[k], Sp, Sm).equals(m.X[k + 1])
            assert algebraic_lower_X(m.X[k + 1], m.P[k + 1], Sp, Sm).equals(m.X[k])


def test_criterion_06_closed_form_and_krawtchouk(chains):
    models, _ = chains
    for n, m in models.items():
        for k in range(n + 1):
            assert projector_from_f(closed_form_f(k, n)).equals(m.P[k])
            assert closed_form_projector(k, n).equals(m.P[k])
        for k in range(n + 1):
            for k2 in range(n + 1):
                value = krawtchouk_orthogonality(n, k, k2)
                if k != k2:
                    assert value.is_zero()
                else:
                    assert not value.is_zero()


def test_criterion_07_alpha_dynamics(alphas):
    pts = sample_points(100, "conjugate", 12345)
    for n, dec in alphas.items():
        assert dec.normalization().equals(RationalFunction.one())
        assert all(a.equals(b) for a, b in zip(dec.alpha, veronese_alpha_closed_form()))
        alpha = AlphaField.from_decomposition(dec)
        assert dyn_eq_residual(alpha).is_zero
        assert full_el_residual(alpha).is_zero
        xi = np.array([p.xi for p in pts])
        vals = alpha.evaluate(xi)
        assert np.max(np.abs(4 * np.sum(vals * vals, axis=0) - 1)) < 1e-10
        assert dyn_eq_residual(alpha, "numeric", pts).max_norm < 1e-10
        assert full_el_residual(alpha, "numeric", pts).max_norm < 1e-10


def test_criterion_08_unitary_congruence(alphas):
    pts = sample_points(100, "conjugate", 12345)
    for n in (1, 2, 3):
        alpha = AlphaField.from_decomposition(alphas[n])
        for j in range(10):
            u = random_unitary(n + 1, 1000 * n + j)
            r = congruence_test(alpha, n, u, pts, 1e-8, 1000 * n + j)
            assert r.n_points == 100
            assert r.max_commutator < 1e-8
            assert r.max_dyn_residual < 1e-8
            assert r.algebra_ok


def test_criterion_09_lattice_second_order(alphas):
    t0 = time.perf_counter()
    cfg = HEISENBERG_LATTICE
    alpha = AlphaField.from_decomposition(alphas[2])
    h0 = (cfg.region[1] - cfg.region[0]) / 127
    rep = lattice_stationarity(cfg, alpha, spacings=(h0, h0 / 2, h0 / 4))
    elapsed = time.perf_counter() - t0
    assert len(rep.lattice_residual_by_spacing) >= 3
    assert len(rep.convergence_ratios) >= 2
    assert all(3.2 <= r <= 4.8 for r in rep.convergence_ratios), rep.convergence_ratios
    print("convergence ratios:", [round(r, 4) for r in rep.convergence_ratios])
    assert elapsed < 60.0


def test_criterion_10_spherical_field_report(alphas):
    dec = alphas[2]
    eq = np.exp(2j * np.pi * np.arange(64) / 64)
    sf = spherical_field(dec, eq)
    assert np.max(np.abs(sf.theta - np.pi / 2)) < 1e-12
    assert sf.theta_convention == "undetermined"
    generic = np.array([p.xi for p in sample_points(200, "conjugate", 7, rmin=0.05, rmax=5.0)])
    found = spherical_field(dec, generic)
    assert found.theta_convention in ("theta = 2*arctan|xi|", "theta = pi - 2*arctan|xi|")
    origin = evaluate_alpha(dec, np.array([0j]))[:, 0]
    assert np.allclose(origin, [0.0, 0.0, -0.5], atol=0)
    report = run_pipeline(ModelSpec(two_s=2, checks=("decomposition",)))
    sph = report.record("decomposition").details["spherical"]
    assert sph["theta_convention"] == found.theta_convention
    assert sph["phi_convention"] == found.phi_convention
    assert sph["origin_alpha"] == [0.0, 0.0, -0.5]
    assert sph["stated_convention_holds"] is False
    assert sph["equator_theta_max_error"] < 1e-12
    assert math.isfinite(sph["equator_theta_max_error"])


def _cli_report(tmp_path, tag: str) -> str:
    out = tmp_path / f"{tag}.json"
    cmd = [sys.executable, "-m", "sigmaspin.cli", "verify", "--two-s", "2", "--seed-rng", "2024", "-o", str(out)]
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    return out.read_text()


def test_criterion_11_determinism(tmp_path):
    a, b = _cli_report(tmp_path, "a"), _cli_report(tmp_path, "b")
    assert "timings" in json.loads(a)["environment"]
    assert strip_timings(a) == strip_timings(b)
    for spec in (ModelSpec(two_s=3), ModelSpec(two_s=2, seed="1, xi, xi^2")):
        first = run_pipeline(spec).to_json(with_timings=False)
        second = run_pipeline(spec).to_json(with_timings=False)
        assert first == second
