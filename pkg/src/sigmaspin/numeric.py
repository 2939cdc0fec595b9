"""Float64 evaluation, sampling, finite differences and tolerance policy.

This is the independent oracle for the exact engine: every exact identity can
be re-checked by evaluating both sides at random points.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import NearPole, NotUnitary
from .symbolic import MatrixRF, RationalFunction

POLE_THRESHOLD = 1e-13
TOLERANCE_ENV = "SIGMASPIN_TOLERANCES"


@dataclass(frozen=True)
class SamplePoint:
    xi: complex
    xibar: complex
    on_conjugate_locus: bool = False

    def __post_init__(self) -> None:
        conj = abs(self.xibar - np.conj(self.xi)) <= 1e-15 * max(1.0, abs(self.xi))
        if self.on_conjugate_locus and not conj:
            raise ValueError("point flagged as conjugate but xibar != conj(xi)")

    @classmethod
    def conjugate(cls, xi: complex) -> SamplePoint:
        xi = complex(xi)
        return cls(xi, xi.conjugate(), True)


@dataclass(frozen=True)
class ToleranceConfig:
    identity_rtol: float = 1e-10
    residual_atol: float = 1e-8
    rank_svd_threshold: float = 1e-8
    fd_step: float = 1e-4

    def __post_init__(self) -> None:
        for f in dataclasses.fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"tolerance {f.name} must be positive")

    def with_overrides(self, **overrides: float) -> ToleranceConfig:
        known = {f.name for f in dataclasses.fields(self)}
        bad = set(overrides) - known
        if bad:
            raise ValueError(f"unknown tolerance keys: {sorted(bad)}")
        return dataclasses.replace(self, **{k: float(v) for k, v in overrides.items()})

    @classmethod
    def from_env(cls, environ: dict | None = None) -> ToleranceConfig:
        """Defaults overridden by ``SIGMASPIN_TOLERANCES="key=value,key=value"``."""
        text = (os.environ if environ is None else environ).get(TOLERANCE_ENV, "").strip()
        if not text:
            return cls()
        pairs = {}
        for item in text.split(","):
            if item.strip():
                k, _, v = item.partition("=")
                pairs[k.strip()] = float(v)
        return cls().with_overrides(**pairs)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def eval_rf(f: RationalFunction, p: SamplePoint) -> complex:
    den = complex(f.evaluate_den(p.xi, p.xibar))
    if abs(den) < POLE_THRESHOLD:
        raise NearPole(f"denominator {abs(den):.3e} at xi={p.xi}")
    return complex(f.num.evaluate(p.xi, p.xibar)) / den


def eval_rf_array(f: RationalFunction, xi, xibar) -> np.ndarray:
    den = f.evaluate_den(xi, xibar)
    if np.any(np.abs(den) < POLE_THRESHOLD):
        raise NearPole("denominator vanishes at a sample point")
    return f.num.evaluate(xi, xibar) / den


def eval_matrix(m: MatrixRF, p: SamplePoint) -> np.ndarray:
    return np.array([[eval_rf(e, p) for e in row] for row in m.entries])


def point_arrays(points: Sequence[SamplePoint]) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.array([p.xi for p in points], dtype=complex),
        np.array([p.xibar for p in points], dtype=complex),
    )


def sample_points(
    n: int,
    mode: str = "independent",
    seed: int = 0,
    guard: Iterable[RationalFunction] = (),
    rmin: float = 0.1,
    rmax: float = 2.0,
) -> list[SamplePoint]:
    """Deterministic random points with magnitudes in ``[rmin, rmax]``.

    Points where any ``guard`` denominator is below the pole threshold are
    discarded and redrawn.
    """
    if n < 1:
        raise ValueError("need at least one point")
    if mode not in ("independent", "conjugate"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    rng = np.random.default_rng(seed)
    guard = list(guard)
    out: list[SamplePoint] = []
    while len(out) < n:
        r, t = rng.uniform(rmin, rmax), rng.uniform(0.0, 2 * np.pi)
        xi = complex(r * np.cos(t), r * np.sin(t))
        if mode == "independent":
            r2, t2 = rng.uniform(rmin, rmax), rng.uniform(0.0, 2 * np.pi)
            p = SamplePoint(xi, complex(r2 * np.cos(t2), r2 * np.sin(t2)), False)
        else:
            p = SamplePoint.conjugate(xi)
        if all(abs(complex(g.evaluate_den(p.xi, p.xibar))) >= POLE_THRESHOLD for g in guard):
            out.append(p)
    return out


def fd_wirtinger2(field: Callable[[np.ndarray], np.ndarray], p: SamplePoint, h: float) -> np.ndarray:
    """``d^2/(dxi dxibar) = Laplacian/4`` by central differences on the conjugate locus.

    ``field`` maps complex xi (array) to values with the point axis last.
    """
    if not p.on_conjugate_locus:
        raise ValueError("finite differences need a conjugate-locus point")
    z = p.xi
    stencil = np.array([z + h, z - h, z + 1j * h, z - 1j * h, z])
    vals = np.asarray(field(stencil))
    lap = vals[..., 0] + vals[..., 1] + vals[..., 2] + vals[..., 3] - 4.0 * vals[..., 4]
    return lap / (4.0 * h * h)


def random_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-like unitary from the QR factorisation of a seeded complex Gaussian matrix."""
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def check_unitary(u: np.ndarray, tol: float = 1e-12) -> None:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary("not a square matrix")
    err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if err > tol:
        raise NotUnitary(f"U^dagger U deviates from identity by {err:.3e}")


def relative_error(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    return float(np.max(np.abs(a - b))) / scale if a.size else 0.0
