"""Solution chains of the CP^{N-1} sigma model built from a holomorphic seed.

The chain ``f_0 -> f_1 -> ... -> f_{2s}`` comes from the raising operator
``f -> (I - f f^dagger / f^dagger f) d_xi f``; the rank-1 projectors, the
scalars ``t_j``, the immersion functions ``X_k`` and the spin matrix
``S^z = sum_k (k - s) P_k`` are all derived from it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .errors import DegenerateChain, IndexOutOfRange, NonHolomorphic, ZeroSeed
from .exact_scalar import RadicalScalar
from .numeric import SamplePoint, eval_matrix, sample_points
from .symbolic import MatrixRF, Polynomial, RationalFunction, VectorRF, determinant, mat_sum, outer
from .symbolic.polynomial import ONE_PLUS_XIXIBAR
from .symbolic.rational import _common_den, _lifted_num

I_UNIT = RationalFunction.coerce(RadicalScalar.imag_unit())


def spin_of(two_s: int) -> Fraction:
    return Fraction(two_s, 2)


def _shift_coeff(k: int, two_s: int) -> RationalFunction:
    """The eigenvalue ``k - s`` as an exact constant."""
    return RationalFunction.coerce(mpq(2 * k - two_s, 2))


def normalize_vector(v: VectorRF) -> VectorRF:
    """Projectively normalise: polynomial entries, no common monomial or (1 + xi xibar) content,
    and a unit leading coefficient on the first nonzero entry."""
    entries = [e for e in v.entries if not e.is_zero()]
    if not entries:
        return VectorRF.zeros(v.dim)
    mono, factors = _common_den(entries)
    polys = [_lifted_num(e, mono, factors) if not e.is_zero() else Polynomial.zero() for e in v.entries]
    nonzero = [p for p in polys if not p.is_zero()]
    ca = min(p.monomial_content()[0] for p in nonzero)
    cb = min(p.monomial_content()[1] for p in nonzero)
    if ca or cb:
        polys = [p.shift(-ca, -cb) if not p.is_zero() else p for p in polys]
    for h in [ONE_PLUS_XIXIBAR, *factors]:
        while True:
            qs = [p.exact_div(h) for p in polys]
            if any(q is None for q in qs) or all(p.is_constant() for p in polys if not p.is_zero()):
                break
            polys = qs
    lead = next(p for p in polys if not p.is_zero()).leading_coefficient()
    inv = Polynomial.constant(lead.inverse())
    return VectorRF(RationalFunction.coerce(p * inv) for p in polys)


def raise_f(f_k: VectorRF, normalize: bool = True) -> VectorRF:
    """Apply the raising operator; zero exactly when ``f_k`` is antiholomorphic."""
    if f_k.is_zero():
        raise ZeroSeed("raising operator applied to the zero vector")
    df = f_k.derivative("xi")
    if df.is_zero():
        return VectorRF.zeros(f_k.dim)
    # (f^dag f) df - (f^dag df) f  is (I - P) df up to the scalar f^dag f
    g = df.scale(f_k.norm2()) - f_k.scale(f_k.dagger_dot(df))
    if g.is_zero():
        return VectorRF.zeros(f_k.dim)
    return normalize_vector(g) if normalize else g


def projector_from_f(f: VectorRF) -> MatrixRF:
    if f.is_zero():
        raise ZeroSeed("projector of the zero vector")
    return outer(f, f).scale(f.norm2().inverse())


def t_scalar(P_prev: MatrixRF) -> RationalFunction:
    """``t_j = 1 / tr(dP_{j-1} . P_{j-1} . dbar P_{j-1})``."""
    tr = (P_prev.derivative("xi") @ P_prev @ P_prev.derivative("xibar")).trace()
    if tr.is_zero():
        raise DegenerateChain("trace of dP.P.dbarP vanishes identically")
    return tr.inverse()


def raise_projector(P_k: MatrixRF) -> MatrixRF:
    dP = P_k.derivative("xi")
    core = dP @ P_k @ P_k.derivative("xibar")
    tr = core.trace()
    if tr.is_zero():
        raise DegenerateChain("cannot raise: the chain ends here")
    return core.scale(tr.inverse())


def lower_projector(P_k: MatrixRF) -> MatrixRF:
    core = P_k.derivative("xibar") @ P_k @ P_k.derivative("xi")
    tr = core.trace()
    if tr.is_zero():
        raise DegenerateChain("cannot lower: the chain starts here")
    return core.scale(tr.inverse())


@dataclass
class ELResidual:
    matrix: MatrixRF
    is_zero: bool
    conservation: MatrixRF
    conservation_is_zero: bool

    @property
    def both_zero(self) -> bool:
        return self.is_zero and self.conservation_is_zero


def el_residual(P: MatrixRF) -> ELResidual:
    """``[P, d dbar P]`` and the conservation form ``d[dbar P, P] + dbar[d P, P]``."""
    dP = P.derivative("xi")
    dbP = P.derivative("xibar")
    el = P.commutator(dP.derivative("xibar"))
    cons = dbP.commutator(P).derivative("xi") + dP.commutator(P).derivative("xibar")
    return ELResidual(el, el.is_zero(), cons, cons.is_zero())


@dataclass
class SigmaModel:
    """Full solution chain for one holomorphic seed and ``N = 2s + 1``."""

    two_s: int
    f: list[VectorRF]
    P: list[MatrixRF]
    t: list[RationalFunction]
    X: list[MatrixRF] = field(repr=False)
    Sz: MatrixRF = field(repr=False)

    @property
    def N(self) -> int:
        return self.two_s + 1

    @property
    def s(self) -> Fraction:
        return spin_of(self.two_s)

    @classmethod
    def build(cls, seed: VectorRF, with_t: bool = True) -> SigmaModel:
        n = seed.dim
        if n < 2:
            raise ValueError("the seed needs at least two components")
        if seed.is_zero():
            raise ZeroSeed("zero seed vector")
        for e in seed.entries:
            if not e.d_xibar().is_zero():
                raise NonHolomorphic("seed components must not depend on xibar")
        two_s = n - 1
        fs = [seed]
        for k in range(two_s):
            nxt = raise_f(fs[-1])
            if nxt.is_zero():
                raise DegenerateChain(f"chain terminates after f_{k}; seed spans too few directions")
            fs.append(nxt)
        Ps = [projector_from_f(f) for f in fs]
        zero = RationalFunction.zero()
        ts = [zero]
        if with_t:
            ts += [t_scalar(Ps[j - 1]) for j in range(1, two_s + 1)]
        ts.append(zero)
        Xs = [_immersion(Ps, k, two_s) for k in range(n)]
        Sz = mat_sum(P.scale(_shift_coeff(k, two_s)) for k, P in enumerate(Ps))
        return cls(two_s, fs, Ps, ts, Xs, Sz)


def _immersion(Ps: Sequence[MatrixRF], k: int, two_s: int) -> MatrixRF:
    n = two_s + 1
    acc = mat_sum([Ps[k]] + [Ps[j].scale(2) for j in range(k)])
    ident = MatrixRF.identity(n).scale(RationalFunction.coerce(mpq(1 + 2 * k, n)) * I_UNIT)
    return acc.scale(-I_UNIT) + ident


def immersion_X(model: SigmaModel, k: int) -> MatrixRF:
    """``X_k = -i(P_k + 2 sum_{j<k} P_j) + i(1+2k)/(2s+1) I``."""
    if not 0 <= k <= model.two_s:
        raise IndexOutOfRange(f"k={k} outside 0..{model.two_s}")
    return _immersion(model.P, k, model.two_s)


def spin_matrix(model: SigmaModel) -> MatrixRF:
    return model.Sz


def spin_from_immersions(model: SigmaModel) -> MatrixRF:
    """``(-i/2) sum_k X_k``; equals the spin matrix exactly."""
    return mat_sum(model.X).scale(-I_UNIT * RationalFunction.coerce(mpq(1, 2)))


# -- verification helpers -------------------------------------------------


def chain_constraints(model: SigmaModel) -> dict[str, bool]:
    """Exact idempotency, Hermiticity, unit trace, orthogonality and partition of unity."""
    Ps = model.P
    n = model.N
    one = RationalFunction.one()
    out = {
        "idempotent": all((P @ P).equals(P) for P in Ps),
        "hermitian": all(P.is_hermitian() for P in Ps),
        "trace_one": all(P.trace().equals(one) for P in Ps),
        "orthogonal": all((Ps[j] @ Ps[k]).is_zero() for j in range(n) for k in range(n) if j != k),
        "partition_of_unity": mat_sum(Ps).equals(MatrixRF.identity(n)),
    }
    return out


@dataclass
class PropertyReport:
    trace: RationalFunction
    trace_zero: bool
    hermitian: bool
    killing_value: RationalFunction
    killing_expected: Fraction
    killing_ok: bool
    min_poly_zero: bool
    determinant: RationalFunction
    det_zero: bool
    det_parity_ok: bool
    numeric_rank: int
    expected_rank: int
    singular_values: list[float]

    @property
    def rank_ok(self) -> bool:
        return self.numeric_rank == self.expected_rank

    @property
    def passed(self) -> bool:
        return all(
            (self.trace_zero, self.hermitian, self.killing_ok, self.min_poly_zero, self.det_parity_ok, self.rank_ok)
        )


def min_poly_residual(Sz: MatrixRF, two_s: int) -> MatrixRF:
    """``prod_{k=0}^{2s} (S^z - (k - s) I)``."""
    n = two_s + 1
    ident = MatrixRF.identity(n)
    acc = ident
    for k in range(n):
        acc = acc @ (Sz - ident.scale(_shift_coeff(k, two_s)))
    return acc


def numeric_rank(M: MatrixRF, threshold: float = 1e-8, seed: int = 12345) -> tuple[int, list[float]]:
    p = sample_points(1, "conjugate", seed, guard=[e for row in M.entries for e in row])[0]
    sv = np.linalg.svd(eval_matrix(M, p), compute_uv=False)
    return int(np.sum(sv > threshold)), [float(x) for x in sv]


def spin_properties(Sz: MatrixRF, two_s: int, rank_threshold: float = 1e-8, seed: int = 12345) -> PropertyReport:
    n = two_s + 1
    tr = Sz.trace()
    killing = (Sz @ Sz).trace() * RationalFunction.coerce(mpq(1, n))
    expected = Fraction(n * n - 1, 12)
    det = determinant(Sz)
    rank, sv = numeric_rank(Sz, rank_threshold, seed)
    return PropertyReport(
        trace=tr,
        trace_zero=tr.is_zero(),
        hermitian=Sz.is_hermitian(),
        killing_value=killing,
        killing_expected=expected,
        killing_ok=killing.equals(RationalFunction.coerce(expected)),
        min_poly_zero=min_poly_residual(Sz, two_s).is_zero(),
        determinant=det,
        det_zero=det.is_zero(),
        det_parity_ok=det.is_zero() == (n % 2 == 1),
        numeric_rank=rank,
        expected_rank=n if n % 2 == 0 else n - 1,
        singular_values=sv,
    )


def recurrence_consistent(model: SigmaModel, k: int) -> bool:
    """``projector_from_f(raise_f(f_k)) == raise_projector(P_k)``."""
    return projector_from_f(raise_f(model.f[k])).equals(raise_projector(model.P[k]))


def numeric_chain_check(model: SigmaModel, n_points: int = 100, seed: int = 7) -> float:
    """Max relative deviation of the projector identities at random independent points.

    Off the conjugate locus the entries can be large, so each deviation is
    scaled by the magnitude of the operands.
    """
    guard = [e for P in model.P for row in P.entries for e in row]
    pts = sample_points(n_points, "independent", seed, guard)
    worst = 0.0
    n = model.N
    for p in pts:
        mats = [eval_matrix(P, p) for P in model.P]
        size = [max(1.0, float(np.max(np.abs(A)))) for A in mats]
        worst = max(worst, float(np.max(np.abs(sum(mats) - np.eye(n)))) / max(size))
        for j, A in enumerate(mats):
            worst = max(worst, float(np.max(np.abs(A @ A - A))) / (n * size[j] ** 2))
            worst = max(worst, abs(np.trace(A) - 1.0) / (n * size[j]))
            for i, B in enumerate(mats[j + 1 :], start=j + 1):
                worst = max(worst, float(np.max(np.abs(A @ B))) / (n * size[j] * size[i]))
    return worst
