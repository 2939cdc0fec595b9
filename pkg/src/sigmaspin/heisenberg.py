"""Spin-vector dynamics and the classical 2D Heisenberg lattice.

The spin matrix ``S^z = alpha . sigma`` turns the sigma-model equations into
equations for a real 3-vector field ``alpha`` with ``|alpha| = 1/2``:

* ``alpha x alpha_{xi xibar} = 0``
* ``(I - 4 alpha alpha^T) alpha_{xi xibar} = 0`` with multiplier ``mu = alpha . alpha_{xi xibar}``

The same equation is the constrained stationarity condition of an anisotropic
Heisenberg lattice after the linear substitution implemented in
:func:`substitution`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from gmpy2 import mpq

from .errors import GridTooSmall, NotUnitary, ParameterOutOfRange
from .numeric import SamplePoint, check_unitary, fd_wirtinger2, sample_points
from .symbolic import RationalFunction, rf_sum
from .veronese import SpinDecomposition, pauli_basis

RF = RationalFunction
Triple = tuple[RationalFunction, RationalFunction, RationalFunction]


def _cross(u: Sequence[RF], v: Sequence[RF]) -> list[RF]:
    return [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]


def _dot(u: Sequence[RF], v: Sequence[RF]) -> RF:
    return rf_sum(a * b for a, b in zip(u, v))


class AlphaField:
    """Spin-vector field, exact or numeric.

    ``evaluate`` maps complex ``xi`` (any shape) on the conjugate locus to a
    real array of shape ``(3, *xi.shape)``.
    """

    def __init__(
        self,
        exact: Triple | None = None,
        numeric: Callable[[np.ndarray], np.ndarray] | None = None,
        fd_step: float = 1e-4,
    ) -> None:
        if exact is None and numeric is None:
            raise ValueError("an alpha field needs an exact or a numeric form")
        self.exact = tuple(exact) if exact is not None else None
        self._numeric = numeric
        self.fd_step = fd_step
        self._second: Triple | None = None

    @classmethod
    def from_decomposition(cls, dec: SpinDecomposition) -> AlphaField:
        if not dec.exists:
            raise ParameterOutOfRange("spin matrix has no Pauli decomposition")
        return cls(exact=dec.alpha)

    @classmethod
    def constant(cls, vec: Sequence[float]) -> AlphaField:
        v = np.asarray(vec, dtype=float)
        if abs(4.0 * float(v @ v) - 1.0) > 1e-12:
            raise ParameterOutOfRange("constant alpha must have length 1/2")
        fracs = [RF.coerce(_exact_float(x)) for x in v]
        return cls(exact=tuple(fracs))

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def evaluate(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=complex)
        if self.exact is not None:
            return np.array([np.real(a.evaluate(xi, np.conj(xi))) for a in self.exact])
        return np.asarray(self._numeric(xi), dtype=float)

    def second(self) -> Triple:
        """Exact ``alpha_{xi xibar}``."""
        if self.exact is None:
            raise ValueError("exact second derivative needs an exact field")
        if self._second is None:
            self._second = tuple(a.derivative("xi").derivative("xibar") for a in self.exact)
        return self._second

    def evaluate_second(self, xi) -> np.ndarray:
        """``alpha_{xi xibar}`` at conjugate-locus points: exact when available, else finite differences."""
        xi = np.asarray(xi, dtype=complex)
        if self.exact is not None:
            return np.array([np.real(a.evaluate(xi, np.conj(xi))) for a in self.second()])
        flat = xi.ravel()
        out = np.empty((3, flat.size))
        for i, z in enumerate(flat):
            out[:, i] = np.real(fd_wirtinger2(self.evaluate, SamplePoint.conjugate(z), self.fd_step))
        return out.reshape((3,) + xi.shape)


def _exact_float(x: float) -> mpq:
    f = Fraction(x).limit_denominator(10**12)
    if float(f) != x:
        f = Fraction(x)
    return mpq(f.numerator, f.denominator)


def perturbed_field(base: AlphaField, eps: float) -> AlphaField:
    """``alpha + eps (xi xibar, 0, 0)`` renormalised to length 1/2 (numeric only)."""

    def fn(xi: np.ndarray) -> np.ndarray:
        v = base.evaluate(xi)
        v = v + eps * np.array([np.abs(xi) ** 2, np.zeros(xi.shape), np.zeros(xi.shape)])
        return 0.5 * v / np.linalg.norm(v, axis=0)

    return AlphaField(numeric=fn, fd_step=base.fd_step)


def normalization_error(alpha: AlphaField, xi) -> float:
    v = alpha.evaluate(xi)
    return float(np.max(np.abs(4.0 * np.sum(v * v, axis=0) - 1.0)))


# -- dynamical equations ---------------------------------------------------


@dataclass
class DynResidual:
    components: list[RationalFunction] | None
    is_zero: bool
    max_norm: float | None = None


def _conjugate_points(points) -> np.ndarray:
    if points is None:
        points = sample_points(100, "conjugate", seed=11)
    if len(points) and isinstance(points[0], SamplePoint):
        return np.array([p.xi for p in points], dtype=complex)
    return np.asarray(points, dtype=complex)


def dyn_eq_residual(alpha: AlphaField, mode: str = "exact", points=None, atol: float = 1e-8) -> DynResidual:
    """``alpha x alpha_{xi xibar}``: exact rational functions or the numeric max norm."""
    if mode == "exact":
        comps = _cross(alpha.exact, alpha.second()) if alpha.is_exact else None
        if comps is None:
            raise ValueError("exact mode needs an exact field")
        return DynResidual(comps, all(c.is_zero() for c in comps))
    if mode != "numeric":
        raise ValueError(f"unknown mode {mode!r}")
    xi = _conjugate_points(points)
    r = np.cross(alpha.evaluate(xi), alpha.evaluate_second(xi), axis=0)
    worst = float(np.max(np.linalg.norm(r, axis=0)))
    return DynResidual(None, worst < atol, worst)


@dataclass
class FullELResidual:
    components: list[RationalFunction] | None
    mu: RationalFunction | None
    is_zero: bool
    max_norm: float | None = None
    mu_samples: list[float] = field(default_factory=list)

    def consistent(self, alpha: AlphaField) -> bool:
        """``alpha_{xi xibar} - 4 mu alpha`` reproduces the stored residual."""
        if self.components is None or self.mu is None:
            return False
        four_mu = self.mu * RF.coerce(4)
        return all(
            (d - four_mu * a).equals(c) for d, a, c in zip(alpha.second(), alpha.exact, self.components)
        )


def full_el_residual(alpha: AlphaField, mode: str = "exact", points=None, atol: float = 1e-8) -> FullELResidual:
    """``(I - 4 alpha alpha^T) alpha_{xi xibar}`` and ``mu = alpha . alpha_{xi xibar}``."""
    if mode == "exact":
        if not alpha.is_exact:
            raise ValueError("exact mode needs an exact field")
        a, d = alpha.exact, alpha.second()
        mu = _dot(a, d)
        four_mu = mu * RF.coerce(4)
        comps = [dk - four_mu * ak for dk, ak in zip(d, a)]
        return FullELResidual(comps, mu, all(c.is_zero() for c in comps))
    if mode != "numeric":
        raise ValueError(f"unknown mode {mode!r}")
    xi = _conjugate_points(points)
    a, d = alpha.evaluate(xi), alpha.evaluate_second(xi)
    mu = np.sum(a * d, axis=0)
    r = d - 4.0 * mu * a
    worst = float(np.max(np.linalg.norm(r, axis=0)))
    return FullELResidual(None, None, worst < atol, worst, [float(m) for m in np.ravel(mu)[:10]])


def perpendicularity(alpha: AlphaField) -> dict[str, bool]:
    """``alpha . alpha_xi = alpha . alpha_xibar = 0`` exactly (hence also for x and y)."""
    a = alpha.exact
    return {
        which: _dot(a, [c.derivative(which) for c in a]).is_zero() for which in ("xi", "xibar")
    }


def mu_is_real(alpha: AlphaField) -> bool:
    mu = full_el_residual(alpha).mu
    return mu.involution().equals(mu)


# -- congruent bases -----------------------------------------------------


@dataclass
class CongruenceReport:
    unitary_seed: int | None
    n_points: int
    max_commutator: float
    max_dyn_residual: float
    co_vanishing: bool
    algebra_error: float
    algebra_ok: bool

    @property
    def passed(self) -> bool:
        return self.co_vanishing and self.algebra_ok


def congruent_basis(two_s: int, U: np.ndarray) -> np.ndarray:
    """``s^k = U sigma^k U^{-1}``, shape (3, N, N)."""
    U = np.asarray(U, dtype=complex)
    sig = pauli_basis(two_s).numeric()
    if U.shape != sig.shape[1:]:
        raise NotUnitary(f"unitary of shape {U.shape} does not act on dimension {sig.shape[1]}")
    check_unitary(U)
    return np.einsum("ij,kjl,ml->kim", U, sig, U.conj())


def congruence_test(
    alpha: AlphaField,
    two_s: int,
    U: np.ndarray,
    points=None,
    atol: float = 1e-8,
    unitary_seed: int | None = None,
) -> CongruenceReport:
    """Evaluate ``[S^z, S^z_{xi xibar}]`` with ``S^z = alpha . s`` alongside ``alpha x alpha_{xi xibar}``."""
    s = congruent_basis(two_s, U)
    xi = _conjugate_points(points)
    a, d = alpha.evaluate(xi), alpha.evaluate_second(xi)
    S = np.einsum("kp,kij->pij", a, s)
    Sd = np.einsum("kp,kij->pij", d, s)
    comm = S @ Sd - Sd @ S
    max_comm = float(np.max(np.abs(comm)))
    max_dyn = float(np.max(np.linalg.norm(np.cross(a, d, axis=0), axis=0)))
    alg = 0.0
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        alg = max(alg, float(np.max(np.abs(s[i] @ s[j] - s[j] @ s[i] - 2j * s[k]))))
    return CongruenceReport(
        unitary_seed=unitary_seed,
        n_points=len(xi),
        max_commutator=max_comm,
        max_dyn_residual=max_dyn,
        co_vanishing=(max_comm < atol) == (max_dyn < atol),
        algebra_error=alg,
        algebra_ok=alg < 1e-10,
    )


# -- lattice model -------------------------------------------------------


@dataclass(frozen=True)
class LatticeConfig:
    J1: float = 1.0
    J2: float = 1.0
    J3: float = 0.0
    a: float = 1.0
    b: float = 1.0
    nx: int = 32
    ny: int = 32
    region: tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0)

    def __post_init__(self) -> None:
        if not (self.J2 + 2 * self.J3 > 0 and self.J1 + 2 * self.J3 > 0):
            raise ParameterOutOfRange("need J2 + 2 J3 > 0 and J1 + 2 J3 > 0")
        if not (self.a > 0 and self.b > 0):
            raise ParameterOutOfRange("lattice constants must be positive")
        x0, x1, y0, y1 = self.region
        if not (x1 > x0 and y1 > y0):
            raise ParameterOutOfRange("empty region")

    @property
    def cx(self) -> float:
        """Coefficient of ``alpha_xx`` in the stationarity equation."""
        return self.a**2 * (self.J2 + 2 * self.J3)

    @property
    def cy(self) -> float:
        return self.b**2 * (self.J1 + 2 * self.J3)


def substitution(cfg: LatticeConfig, x, y) -> np.ndarray:
    """``xi = x / (a sqrt(2(J2+2J3))) + i y / (b sqrt(2(J1+2J3)))``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x / (cfg.a * math.sqrt(2 * (cfg.J2 + 2 * cfg.J3))) + 1j * y / (
        cfg.b * math.sqrt(2 * (cfg.J1 + 2 * cfg.J3))
    )


def lattice_sum(spins: np.ndarray, J1: float, J2: float, J3: float) -> float:
    """Open-boundary Heisenberg energy of spins with shape (nx, ny, 3).

    Axis 0 is the x index ``k``, axis 1 the y index ``m``; J3 couples both diagonals.
    """
    s = np.asarray(spins, dtype=float)
    if s.ndim != 3 or s.shape[2] != 3:
        raise ValueError("spins must have shape (nx, ny, 3)")
    e = J1 * np.sum(s[:-1, :, :] * s[1:, :, :])
    e += J2 * np.sum(s[:, :-1, :] * s[:, 1:, :])
    if J3:
        e += J3 * (np.sum(s[:-1, :-1, :] * s[1:, 1:, :]) + np.sum(s[1:, :-1, :] * s[:-1, 1:, :]))
    return float(e)


def bond_counts(nx: int, ny: int) -> dict[str, int]:
    return {"horizontal": (nx - 1) * ny, "vertical": nx * (ny - 1), "diagonal": 2 * (nx - 1) * (ny - 1)}


def lattice_nodes(cfg: LatticeConfig) -> tuple[np.ndarray, np.ndarray]:
    """``x_k = x0 + k a``, ``y_m = y0 + m b``; arrays of shape (nx, ny)."""
    if cfg.nx < 3 or cfg.ny < 3:
        raise GridTooSmall("lattice needs at least 3 x 3 sites")
    x0, _, y0, _ = cfg.region
    xs = x0 + cfg.a * np.arange(cfg.nx)
    ys = y0 + cfg.b * np.arange(cfg.ny)
    return np.meshgrid(xs, ys, indexing="ij")


def sample_spins(cfg: LatticeConfig, alpha: AlphaField) -> np.ndarray:
    X, Y = lattice_nodes(cfg)
    return np.moveaxis(alpha.evaluate(substitution(cfg, X, Y)), 0, -1)


def lattice_energy(cfg: LatticeConfig, alpha: AlphaField) -> float:
    """Energy of the spins ``alpha(x_k, y_m)`` read through the substitution."""
    return lattice_sum(sample_spins(cfg, alpha), cfg.J1, cfg.J2, cfg.J3)


def site_energy_delta(spins: np.ndarray, k: int, m: int, new: Sequence[float], J1: float, J2: float, J3: float) -> float:
    """Energy change from replacing the spin at ``(k, m)``; only bonds touching the site."""
    s = np.asarray(spins, dtype=float)
    nx, ny, _ = s.shape
    delta = np.asarray(new, dtype=float) - s[k, m]
    neigh = np.zeros(3)
    for dk, dm, J in ((1, 0, J1), (-1, 0, J1), (0, 1, J2), (0, -1, J2), (1, 1, J3), (-1, -1, J3), (1, -1, J3), (-1, 1, J3)):
        kk, mm = k + dk, m + dm
        if 0 <= kk < nx and 0 <= mm < ny:
            neigh = neigh + J * s[kk, mm]
    return float(delta @ neigh)


def gradient_energy(cfg: LatticeConfig, alpha: AlphaField, h: float) -> float:
    """Lattice energy minus the aligned value on a grid of step ``h`` over ``cfg.region``.

    The field is read through the substitution fixed by ``cfg``, so refining
    ``h`` samples the same physical field more densely.
    """
    X, Y = _region_grid(cfg, h)
    spins = np.moveaxis(alpha.evaluate(substitution(cfg, X, Y)), 0, -1)
    nx, ny = X.shape
    c = bond_counts(nx, ny)
    aligned = 0.25 * (cfg.J1 * c["horizontal"] + cfg.J2 * c["vertical"] + cfg.J3 * c["diagonal"])
    return lattice_sum(spins, cfg.J1, cfg.J2, cfg.J3) - aligned


def continuum_gradient_energy(cfg: LatticeConfig, alpha: AlphaField, n: int = 801) -> float:
    """``-1/2 int (J1+2J3)|alpha_x|^2 + (J2+2J3)|alpha_y|^2`` over the region (trapezoid rule).

    This is the small-spacing limit of :func:`gradient_energy`; the derivatives
    come from the exact Wirtinger derivatives of ``alpha``.
    """
    if not alpha.is_exact:
        raise ValueError("continuum estimate needs an exact field")
    x0, x1, y0, y1 = cfg.region
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    xi = substitution(cfg, X, Y)
    kx = 1.0 / (cfg.a * math.sqrt(2 * (cfg.J2 + 2 * cfg.J3)))
    ky = 1.0 / (cfg.b * math.sqrt(2 * (cfg.J1 + 2 * cfg.J3)))
    dx = np.array([np.real(kx * (a.d_xi().evaluate(xi, np.conj(xi)) + a.d_xibar().evaluate(xi, np.conj(xi)))) for a in alpha.exact])
    dy = np.array([np.real(1j * ky * (a.d_xi().evaluate(xi, np.conj(xi)) - a.d_xibar().evaluate(xi, np.conj(xi)))) for a in alpha.exact])
    dens = (cfg.J1 + 2 * cfg.J3) * np.sum(dx * dx, axis=0) + (cfg.J2 + 2 * cfg.J3) * np.sum(dy * dy, axis=0)
    return float(-0.5 * np.trapezoid(np.trapezoid(dens, ys, axis=1), xs))


def _region_grid(cfg: LatticeConfig, h: float) -> tuple[np.ndarray, np.ndarray]:
    x0, x1, y0, y1 = cfg.region
    nx = int(round((x1 - x0) / h)) + 1
    ny = int(round((y1 - y0) / h)) + 1
    if nx < 3 or ny < 3:
        raise GridTooSmall(f"step {h} leaves fewer than 3 nodes per direction")
    return np.meshgrid(x0 + h * np.arange(nx), y0 + h * np.arange(ny), indexing="ij")


@dataclass
class StationarityReport:
    max_cross_residual: float
    max_full_el_residual: float
    lagrange_multiplier_samples: list[float]
    lattice_residual_by_spacing: list[tuple[float, float]]
    convergence_ratios: list[float]
    ratio_window: tuple[float, float] = (3.2, 4.8)

    @property
    def second_order(self) -> bool:
        lo, hi = self.ratio_window
        return bool(self.convergence_ratios) and all(lo <= r <= hi for r in self.convergence_ratios)

    def as_dict(self) -> dict:
        return {
            "max_cross_residual": self.max_cross_residual,
            "max_full_el_residual": self.max_full_el_residual,
            "lagrange_multiplier_samples": self.lagrange_multiplier_samples,
            "lattice_residual_by_spacing": [{"h": h, "max_residual": r} for h, r in self.lattice_residual_by_spacing],
            "convergence_ratios": self.convergence_ratios,
            "second_order": self.second_order,
        }


def discrete_residual(cfg: LatticeConfig, alpha: AlphaField, h: float) -> float:
    """Max over interior nodes of ``(I - 4 alpha alpha^T)(cx alpha_xx + cy alpha_yy)``.

    Second differences with step ``h`` over ``cfg.region``; the tangent
    projection eliminates the multiplier.
    """
    X, Y = _region_grid(cfg, h)
    A = alpha.evaluate(substitution(cfg, X, Y))
    c = A[:, 1:-1, 1:-1]
    axx = (A[:, 2:, 1:-1] - 2 * c + A[:, :-2, 1:-1]) / h**2
    ayy = (A[:, 1:-1, 2:] - 2 * c + A[:, 1:-1, :-2]) / h**2
    g = cfg.cx * axx + cfg.cy * ayy
    r = g - 4.0 * np.sum(c * g, axis=0) * c
    return float(np.max(np.linalg.norm(r, axis=0)))


def lattice_stationarity(
    cfg: LatticeConfig,
    alpha: AlphaField,
    spacings: Sequence[float] | None = None,
    n_points: int = 200,
    seed: int = 11,
) -> StationarityReport:
    """Continuum equations at sample points plus discrete residuals per step ``h``.

    Default steps put 128, 255 and 509 nodes across the x extent of the region.
    """
    if spacings is None:
        base = (cfg.region[1] - cfg.region[0]) / 127
        spacings = (base, base / 2, base / 4)
    if len(spacings) < 1:
        raise ValueError("need at least one spacing")
    pts = sample_points(n_points, "conjugate", seed)
    cross = dyn_eq_residual(alpha, "numeric", pts)
    full = full_el_residual(alpha, "numeric", pts)
    by_h = [(float(h), discrete_residual(cfg, alpha, h)) for h in spacings]
    ratios = [
        r0 / r1 if r1 > 0 else math.inf for (_, r0), (_, r1) in zip(by_h, by_h[1:]) if r0 > 1e-13
    ]
    return StationarityReport(cross.max_norm, full.max_norm, full.mu_samples, by_h, ratios)
