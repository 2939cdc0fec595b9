"""Veronese chains, Krawtchouk closed forms and the generalized Pauli basis.

For the Veronese seed ``f_0 = (sqrt(binom(2s, r)) xi^r)_r`` the spin matrix is an
exact combination of the generalized Pauli matrices, the ladder matrices
``S^+`` and ``S^-`` move along the chain, and the analytic recurrences have
algebraic counterparts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .errors import ConventionBoundary, DegenerateChain, ParameterOutOfRange
from .exact_scalar import RadicalScalar
from .symbolic import XI, XIBAR, MatrixRF, Polynomial, RationalFunction, VectorRF, mat_sum, rf_sum
from .symbolic.polynomial import ONE_PLUS_XIXIBAR

RF = RationalFunction
I_UNIT = RF.coerce(RadicalScalar.imag_unit())
ONE_PLUS = RF.coerce(ONE_PLUS_XIXIBAR)


def _c(value) -> RationalFunction:
    return RF.coerce(value)


def _check_two_s(two_s: int) -> None:
    if two_s < 1:
        raise ParameterOutOfRange("2s must be a positive integer")


def veronese_seed(two_s: int) -> VectorRF:
    _check_two_s(two_s)
    return VectorRF(
        RF.coerce(Polynomial.monomial(r, 0, RadicalScalar.sqrt(math.comb(two_s, r)))) for r in range(two_s + 1)
    )


def stereographic_p() -> RationalFunction:
    """``p = xi xibar / (1 + xi xibar)``."""
    return (XI * XIBAR) / ONE_PLUS


def _pochhammer(a: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= a + i
    return out


def krawtchouk_coefficients(j: int, k: int, two_s: int) -> list[Fraction]:
    """Coefficients ``c_m`` of ``K_j(k) = sum_m c_m p^{-m}``."""
    return [
        Fraction(_pochhammer(-j, m) * _pochhammer(-k, m), _pochhammer(-two_s, m) * math.factorial(m))
        for m in range(min(j, k) + 1)
    ]


def krawtchouk(j: int, k: int, two_s: int, p) -> RationalFunction:
    """Terminating 2F1(-j, -k; -2s; 1/p) with ``p`` any nonzero rational function."""
    if not (0 <= j <= two_s and 0 <= k <= two_s):
        raise ParameterOutOfRange(f"K_{j}({k}) needs 0 <= j, k <= 2s = {two_s}")
    p = RF.coerce(p)
    if p.is_zero():
        raise ParameterOutOfRange("p must be nonzero")
    inv_p = p.inverse()
    total = RF.zero()
    power = RF.one()
    for c in krawtchouk_coefficients(j, k, two_s):
        total = total + power * _c(mpq(c.numerator, c.denominator))
        power = power * inv_p
    return total


def krawtchouk_value(j: int, k: int, two_s: int, p: Fraction) -> Fraction:
    """Exact rational value of K_j(k) at a rational ``p``."""
    if not (0 <= j <= two_s and 0 <= k <= two_s):
        raise ParameterOutOfRange(f"K_{j}({k}) needs 0 <= j, k <= 2s = {two_s}")
    p = Fraction(p)
    if p == 0:
        raise ParameterOutOfRange("p must be nonzero")
    return sum((c / p**m for m, c in enumerate(krawtchouk_coefficients(j, k, two_s))), Fraction(0))


def krawtchouk_orthogonality(two_s: int, k: int, k2: int, p=None) -> RationalFunction:
    """``sum_j binom(2s,j) p^j (1-p)^(2s-j) K_j(k) K_j(k2)`` as an exact function of ``p``.

    ``p`` defaults to the formal variable ``xi``; the sum vanishes for ``k != k2``.
    """
    p = XI if p is None else RF.coerce(p)
    q = _c(1) - p
    terms = [
        _c(math.comb(two_s, j)) * p**j * q ** (two_s - j) * krawtchouk(j, k, two_s, p) * krawtchouk(j, k2, two_s, p)
        for j in range(two_s + 1)
    ]
    return rf_sum(terms)


@dataclass
class KrawtchoukEvaluator:
    two_s: int
    p: RationalFunction = field(default_factory=stereographic_p)

    def __call__(self, j: int, k: int) -> RationalFunction:
        return krawtchouk(j, k, self.two_s, self.p)


def closed_form_f(k: int, two_s: int) -> VectorRF:
    """Un-normalised ``f_k`` of the Veronese chain from Krawtchouk polynomials.

    ``(f_k)_j = (2s)!/(2s-k)! (-xibar/(1+xi xibar))^k sqrt(binom(2s,j)) xi^j K_j(k)``
    """
    _check_two_s(two_s)
    if not 0 <= k <= two_s:
        raise ParameterOutOfRange(f"k={k} outside 0..{two_s}")
    K = KrawtchoukEvaluator(two_s)
    pref = _c(math.factorial(two_s) // math.factorial(two_s - k)) * ((-XIBAR) / ONE_PLUS) ** k
    return VectorRF(
        pref * RF.coerce(Polynomial.monomial(j, 0, RadicalScalar.sqrt(math.comb(two_s, j)))) * K(j, k)
        for j in range(two_s + 1)
    )


def closed_form_projector(k: int, two_s: int) -> MatrixRF:
    """Entry formula ``binom(2s,k) (xi xibar)^k / (1+xi xibar)^{2s} xi^i xibar^j sqrt(..) K_i K_j``."""
    if not 0 <= k <= two_s:
        raise ParameterOutOfRange(f"k={k} outside 0..{two_s}")
    K = KrawtchoukEvaluator(two_s)
    Ks = [K(i, k) for i in range(two_s + 1)]
    pref = _c(math.comb(two_s, k)) * (XI * XIBAR) ** k / ONE_PLUS**two_s
    return MatrixRF(
        [
            [
                pref
                * RF.coerce(
                    Polynomial.monomial(i, j, RadicalScalar.sqrt(math.comb(two_s, i) * math.comb(two_s, j)))
                )
                * Ks[i]
                * Ks[j]
                for j in range(two_s + 1)
            ]
            for i in range(two_s + 1)
        ]
    )


# -- generalized Pauli matrices ------------------------------------------


@dataclass
class PauliBasis:
    N: int
    sigma_x: MatrixRF
    sigma_y: MatrixRF
    sigma_z: MatrixRF

    @property
    def two_s(self) -> int:
        return self.N - 1

    @property
    def sigma_plus(self) -> MatrixRF:
        return self.sigma_x + self.sigma_y.scale(I_UNIT)

    @property
    def sigma_minus(self) -> MatrixRF:
        return self.sigma_x - self.sigma_y.scale(I_UNIT)

    def as_tuple(self) -> tuple[MatrixRF, MatrixRF, MatrixRF]:
        return (self.sigma_x, self.sigma_y, self.sigma_z)

    def numeric(self) -> np.ndarray:
        """Array of shape (3, N, N)."""
        return np.array([[[complex(e.constant_value()) for e in row] for row in m.entries] for m in self.as_tuple()])

    def casimir(self) -> MatrixRF:
        return mat_sum(m @ m for m in self.as_tuple())


def pauli_basis(two_s: int) -> PauliBasis:
    _check_two_s(two_s)
    n = two_s + 1
    s = Fraction(two_s, 2)

    def off(m: int, k: int) -> RadicalScalar:
        return RadicalScalar.sqrt(s * (m + k + 1) - m * k)

    zero = RadicalScalar.zero()
    i = RadicalScalar.imag_unit()
    sx = [[off(m, k) if abs(m - k) == 1 else zero for k in range(n)] for m in range(n)]
    # (sigma_y)_{mn} = i (delta_{m,n+1} - delta_{m+1,n}) sqrt(...)
    sy = [
        [(i * off(m, k) if m == k + 1 else (-i * off(m, k) if m + 1 == k else zero)) for k in range(n)]
        for m in range(n)
    ]
    sz = [[RadicalScalar(two_s - 2 * m) if m == k else zero for k in range(n)] for m in range(n)]
    return PauliBasis(n, MatrixRF(sx), MatrixRF(sy), MatrixRF(sz))


def pauli_algebra_ok(basis: PauliBasis) -> dict[str, bool]:
    """``[sx, sy] = 2i sz`` cyclically and the Casimir ``4 s (s+1) I``."""
    sx, sy, sz = basis.as_tuple()
    two_i = I_UNIT * _c(2)
    n = basis.N
    return {
        "xy": sx.commutator(sy).equals(sz.scale(two_i)),
        "yz": sy.commutator(sz).equals(sx.scale(two_i)),
        "zx": sz.commutator(sx).equals(sy.scale(two_i)),
        "casimir": basis.casimir().equals(MatrixRF.identity(n).scale(_c((n - 1) * (n + 1)))),
    }


# -- decomposition -------------------------------------------------------


@dataclass
class SpinDecomposition:
    alpha_x: RationalFunction
    alpha_y: RationalFunction
    alpha_z: RationalFunction
    exists: bool
    residual: MatrixRF | None = None

    @property
    def alpha(self) -> tuple[RationalFunction, RationalFunction, RationalFunction]:
        return (self.alpha_x, self.alpha_y, self.alpha_z)

    def normalization(self) -> RationalFunction:
        """``4 alpha . alpha`` (bilinear, no conjugation)."""
        return _c(4) * (self.alpha_x * self.alpha_x + self.alpha_y * self.alpha_y + self.alpha_z * self.alpha_z)

    def rebuild(self, basis: PauliBasis) -> MatrixRF:
        return mat_sum(m.scale(a) for a, m in zip(self.alpha, basis.as_tuple()))

    def is_real(self) -> bool:
        return all(a.involution().equals(a) for a in self.alpha)


def decompose_spin(Sz: MatrixRF, basis: PauliBasis) -> SpinDecomposition:
    """Read alpha from entries (0,0), (0,1), (1,0); then demand a zero residual."""
    if Sz.shape != (basis.N, basis.N):
        raise ParameterOutOfRange("spin matrix and basis sizes differ")
    two_s = basis.two_s
    alpha_z = Sz[0, 0] * _c(mpq(1, two_s))
    root = RF.coerce(RadicalScalar.sqrt(two_s))
    # S_01 = (ax - i ay) sqrt(2s),  S_10 = (ax + i ay) sqrt(2s); note 2s == two_s
    alpha_x = (Sz[0, 1] + Sz[1, 0]) / (root * _c(2))
    alpha_y = (Sz[0, 1] - Sz[1, 0]) * I_UNIT / (root * _c(2))
    dec = SpinDecomposition(alpha_x, alpha_y, alpha_z, True)
    residual = Sz - dec.rebuild(basis)
    dec.residual = residual
    dec.exists = residual.is_zero()
    return dec


def is_tridiagonal(M: MatrixRF) -> bool:
    return all(abs(i - j) <= 1 for i, j in M.nonzero_entries())


# -- spin components for the Veronese chain ------------------------------


def veronese_spin_components(two_s: int) -> tuple[MatrixRF, MatrixRF, MatrixRF]:
    """Closed-form ``S^z``, ``S^+`` and ``S^- = (S^+)^dagger``."""
    b = pauli_basis(two_s)
    sz, sp, sm = b.sigma_z, b.sigma_plus, b.sigma_minus
    half = _c(1) / (_c(2) * ONE_PLUS)
    Sz = mat_sum([sz.scale(XI * XIBAR - 1), sm.scale(-XI), sp.scale(-XIBAR)]).scale(half)
    Splus = mat_sum([sz.scale(_c(2) * XIBAR), sp.scale(XIBAR * XIBAR), -sm]).scale(half)
    Sminus = mat_sum([sz.scale(_c(2) * XI), -sp, sm.scale(XI * XI)]).scale(half)
    return Sz, Splus, Sminus


def su2_relations(Sz: MatrixRF, Splus: MatrixRF, Sminus: MatrixRF) -> dict[str, bool]:
    return {
        "[Sz,S+]=S+": Sz.commutator(Splus).equals(Splus),
        "[Sz,S-]=-S-": Sz.commutator(Sminus).equals(-Sminus),
        "[S+,S-]=2Sz": Splus.commutator(Sminus).equals(Sz.scale(2)),
        "S-=dagger(S+)": Sminus.equals(Splus.dagger()),
    }


def ladder_on_f(which: str, k: int, two_s: int) -> VectorRF:
    """``S^+ f_k`` or ``S^- f_k`` on the closed-form (un-normalised) chain vectors."""
    if which not in ("plus", "minus"):
        raise ValueError("which must be 'plus' or 'minus'")
    if not 0 <= k <= two_s:
        raise ConventionBoundary(f"f_{k} lies outside the chain 0..{two_s}")
    _, Sp, Sm = veronese_spin_components(two_s)
    return (Sp if which == "plus" else Sm) @ closed_form_f(k, two_s)


def ladder_expected(which: str, k: int, two_s: int) -> VectorRF:
    """``-(1+xi xibar) f_{k+1}`` or ``k(k-1-2s)/(1+xi xibar) f_{k-1}``, zero past the ends."""
    n = two_s + 1
    if which == "plus":
        if k + 1 > two_s:
            return VectorRF.zeros(n)
        return closed_form_f(k + 1, two_s).scale(-ONE_PLUS)
    if k - 1 < 0:
        return VectorRF.zeros(n)
    return closed_form_f(k - 1, two_s).scale(_c(k * (k - 1 - two_s)) / ONE_PLUS)


def algebraic_raise_P(P_k: MatrixRF, Splus: MatrixRF, Sminus: MatrixRF) -> MatrixRF:
    core = Splus @ P_k @ Sminus
    tr = core.trace()
    if tr.is_zero():
        raise DegenerateChain("S+ P S- has zero trace: top of the chain")
    return core.scale(tr.inverse())


def algebraic_lower_P(P_k: MatrixRF, Splus: MatrixRF, Sminus: MatrixRF) -> MatrixRF:
    core = Sminus @ P_k @ Splus
    tr = core.trace()
    if tr.is_zero():
        raise DegenerateChain("S- P S+ has zero trace: bottom of the chain")
    return core.scale(tr.inverse())


def algebraic_raise_X(X_k: MatrixRF, P_k: MatrixRF, Splus: MatrixRF, Sminus: MatrixRF) -> MatrixRF:
    """``X_{k+1} = X_k - i (S+ P_k S- / tr + P_k - 2/(2s+1) I)``."""
    n = P_k.rows
    inner = algebraic_raise_P(P_k, Splus, Sminus) + P_k - MatrixRF.identity(n).scale(_c(mpq(2, n)))
    return X_k - inner.scale(I_UNIT)


def algebraic_lower_X(X_k: MatrixRF, P_k: MatrixRF, Splus: MatrixRF, Sminus: MatrixRF) -> MatrixRF:
    """``X_{k-1} = X_k + i (S- P_k S+ / tr + P_k - 2/(2s+1) I)``."""
    n = P_k.rows
    inner = algebraic_lower_P(P_k, Splus, Sminus) + P_k - MatrixRF.identity(n).scale(_c(mpq(2, n)))
    return X_k + inner.scale(I_UNIT)


# -- spherical coordinates -----------------------------------------------


@dataclass
class SphericalField:
    xi: np.ndarray
    alpha: np.ndarray  # (3, ...) real
    theta: np.ndarray
    phi: np.ndarray  # nan where sin(theta) vanishes
    pole: np.ndarray
    theta_convention: str
    phi_convention: str


THETA_CANDIDATES = {
    "theta = 2*arctan|xi|": lambda z: 2.0 * np.arctan(np.abs(z)),
    "theta = pi - 2*arctan|xi|": lambda z: np.pi - 2.0 * np.arctan(np.abs(z)),
}

PHI_CANDIDATES = {
    "phi = -arg(xi)": lambda z: -np.angle(z),
    "phi = arg(xi)": lambda z: np.angle(z),
    "phi = arg(xi) + pi": lambda z: np.angle(z) + np.pi,
    "phi = pi - arg(xi)": lambda z: np.pi - np.angle(z),
}


def _angle_gap(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = np.mod(a - b + np.pi, 2 * np.pi) - np.pi
    return np.abs(d)


def spherical_angles(alpha: np.ndarray, pole_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ax, ay, az = alpha
    rho = np.hypot(ax, ay)
    theta = np.arctan2(2.0 * rho, 2.0 * az)
    pole = 2.0 * rho < pole_tol
    phi = np.mod(np.arctan2(ay, ax), 2 * np.pi)
    phi = np.where(pole, np.nan, phi)
    return theta, phi, pole


def evaluate_alpha(dec: SpinDecomposition, xi) -> np.ndarray:
    """Real alpha on the conjugate locus, shape (3, ...)."""
    xi = np.asarray(xi, dtype=complex)
    vals = np.array([a.evaluate(xi, np.conj(xi)) for a in dec.alpha])
    return vals.real


def spherical_field(dec: SpinDecomposition, xi, tol: float = 1e-9) -> SphericalField:
    """Angles recovered from alpha plus the sign conventions they satisfy.

    A convention is reported when it matches at every non-polar sample (theta
    is only tested away from |xi| = 1, where both candidates agree). Without
    informative samples the convention is "undetermined".
    """
    if not dec.exists:
        raise ParameterOutOfRange("spin matrix has no Pauli decomposition")
    xi = np.asarray(xi, dtype=complex)
    alpha = evaluate_alpha(dec, xi)
    theta, phi, pole = spherical_angles(alpha)
    mask = np.abs(np.abs(xi) - 1.0) > 1e-6
    theta_conv = "none" if mask.any() else "undetermined"
    for name, fn in THETA_CANDIDATES.items():
        if mask.any() and np.all(np.abs(theta[mask] - fn(xi[mask])) < tol):
            theta_conv = name
            break
    ok = ~pole
    phi_conv = "none" if ok.any() else "undetermined"
    for name, fn in PHI_CANDIDATES.items():
        if ok.any() and np.all(_angle_gap(phi[ok], fn(xi[ok])) < tol):
            phi_conv = name
            break
    return SphericalField(xi, alpha, theta, phi, pole, theta_conv, phi_conv)


def veronese_alpha_closed_form() -> tuple[RationalFunction, RationalFunction, RationalFunction]:
    """alpha read off the closed-form S^z; independent of 2s."""
    den = _c(2) * ONE_PLUS
    return (-(XI + XIBAR) / den, I_UNIT * (XI - XIBAR) / den, (XI * XIBAR - 1) / den)
