"""Model specifications, the verification pipeline and its JSON/CSV outputs."""

from __future__ import annotations

import dataclasses
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import __version__
from .errors import NoDecomposition, ParameterOutOfRange, SigmaSpinError
from .heisenberg import (
    AlphaField,
    LatticeConfig,
    congruence_test,
    dyn_eq_residual,
    full_el_residual,
    lattice_stationarity,
    mu_is_real,
    normalization_error,
    perpendicularity,
)
from .numeric import ToleranceConfig, random_unitary, sample_points
from .parser import parse_seed
from .sigma_model import (
    SigmaModel,
    chain_constraints,
    el_residual,
    numeric_chain_check,
    projector_from_f,
    recurrence_consistent,
    spin_from_immersions,
    spin_properties,
)
from .symbolic import MatrixRF, RationalFunction, VectorRF
from .veronese import (
    SpinDecomposition,
    algebraic_lower_P,
    algebraic_lower_X,
    algebraic_raise_P,
    algebraic_raise_X,
    closed_form_f,
    closed_form_projector,
    decompose_spin,
    evaluate_alpha,
    is_tridiagonal,
    krawtchouk_orthogonality,
    krawtchouk_value,
    ladder_expected,
    ladder_on_f,
    pauli_basis,
    spherical_angles,
    spherical_field,
    su2_relations,
    veronese_alpha_closed_form,
    veronese_seed,
    veronese_spin_components,
)

SCHEMA_VERSION = 1
ALL_CHECKS = (
    "constraints",
    "el",
    "immersion",
    "spin",
    "decomposition",
    "ladder",
    "algebraic-recurrence",
    "heisenberg",
)
DEPENDS = {
    "constraints": (),
    "el": ("constraints",),
    "immersion": ("constraints",),
    "spin": ("constraints",),
    "decomposition": ("spin",),
    "ladder": (),
    "algebraic-recurrence": ("constraints",),
    "heisenberg": ("decomposition",),
}
VERONESE_ONLY = ("ladder", "algebraic-recurrence")


# -- specification -------------------------------------------------------


@dataclass(frozen=True)
class ModelSpec:
    two_s: int
    seed: str = "veronese"
    checks: tuple[str, ...] = ALL_CHECKS
    seed_rng: int = 12345
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)

    def __post_init__(self) -> None:
        if self.two_s < 1:
            raise ParameterOutOfRange("two_s must be a positive integer")
        bad = [c for c in self.checks if c not in ALL_CHECKS]
        if bad:
            raise ParameterOutOfRange(f"unknown checks: {', '.join(bad)}")

    @property
    def is_veronese_keyword(self) -> bool:
        return self.seed.strip().lower() == "veronese"

    def seed_vector(self) -> VectorRF:
        if self.is_veronese_keyword:
            return veronese_seed(self.two_s)
        vec = parse_seed(self.seed)
        if vec.dim != self.two_s + 1:
            raise ParameterOutOfRange(f"seed has {vec.dim} components, expected two_s + 1 = {self.two_s + 1}")
        return vec

    def echo(self) -> dict:
        return {
            "two_s": self.two_s,
            "seed": self.seed.strip(),
            "checks": list(self.checks),
            "seed_rng": self.seed_rng,
            "tolerances": self.tolerances.as_dict(),
        }


def _parse_checks(text: str) -> tuple[str, ...]:
    items = [c.strip() for c in text.split(",") if c.strip()]
    if items == ["all"]:
        return ALL_CHECKS
    return tuple(c for c in ALL_CHECKS if c in items) + tuple(c for c in items if c not in ALL_CHECKS)


def spec_from_mapping(values: dict[str, str], base_tolerances: ToleranceConfig | None = None) -> ModelSpec:
    """Build a spec from string key/values; tolerance field names are accepted as keys."""
    tol = base_tolerances or ToleranceConfig.from_env()
    tol_keys = {f.name for f in dataclasses.fields(ToleranceConfig)}
    known = {"two_s", "seed", "checks", "seed_rng"} | tol_keys
    unknown = sorted(set(values) - known)
    if unknown:
        raise ParameterOutOfRange(f"unknown spec keys: {', '.join(unknown)}")
    if "two_s" not in values:
        raise ParameterOutOfRange("spec needs two_s")
    overrides = {k: float(v) for k, v in values.items() if k in tol_keys}
    return ModelSpec(
        two_s=int(values["two_s"]),
        seed=values.get("seed", "veronese"),
        checks=_parse_checks(values.get("checks", "all")),
        seed_rng=int(values.get("seed_rng", 12345)),
        tolerances=tol.with_overrides(**overrides) if overrides else tol,
    )


def parse_spec_text(text: str, base_tolerances: ToleranceConfig | None = None) -> ModelSpec:
    """``key = value`` per line; ``#`` starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParameterOutOfRange(f"line {lineno}: expected 'key = value'")
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return spec_from_mapping(values, base_tolerances)


# -- report records --------------------------------------------------------


@dataclass
class CheckRecord:
    name: str
    status: str  # pass | fail | skipped | not_applicable
    mode: str
    residual: str | float | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "not_applicable")

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "mode": self.mode,
            "pass": self.passed,
            "residual": self.residual,
            "details": self.details,
        }


@dataclass
class VerificationReport:
    model: dict
    records: list[CheckRecord]
    seeds: dict
    timings: dict

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def record(self, name: str) -> CheckRecord:
        return next(r for r in self.records if r.name == name)

    def as_dict(self, with_timings: bool = True) -> dict:
        counts = {s: sum(r.status == s for r in self.records) for s in ("pass", "fail", "skipped", "not_applicable")}
        env = {"version": __version__, "seeds": self.seeds}
        if with_timings:
            env["timings"] = self.timings
        return {
            "schema": SCHEMA_VERSION,
            "model": self.model,
            "checks": [r.as_dict() for r in self.records],
            "summary": {**counts, "all_pass": self.all_pass},
            "environment": env,
        }

    def to_json(self, with_timings: bool = True) -> str:
        return json.dumps(_clean(self.as_dict(with_timings)), indent=2, allow_nan=False) + "\n"


def _clean(obj):
    """Make a report JSON-safe: finite floats only, stable containers."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return 0.0 if v == 0 else v
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def strip_timings(report_json: str) -> str:
    data = json.loads(report_json)
    data.get("environment", {}).pop("timings", None)
    return json.dumps(data, indent=2, sort_keys=False)


# -- helpers -------------------------------------------------------------


def _first_nonzero(mats: list[MatrixRF]) -> str:
    for m in mats:
        for i, j in m.nonzero_entries():
            return f"[{i},{j}] {m[i, j]}"
    return "0"


def _sub(name: str, mode: str, ok: bool, residual=None, **extra) -> dict:
    out = {"name": name, "mode": mode, "pass": bool(ok)}
    if residual is not None:
        out["residual"] = residual
    out.update(extra)
    return out


def _record_from_subs(name: str, subs: list[dict], details: dict | None = None) -> CheckRecord:
    ok = all(s["pass"] for s in subs)
    modes = {s["mode"] for s in subs}
    mode = "exact" if "exact" in modes else "numeric"
    failing = [s for s in subs if not s["pass"]]
    residual = None
    exact_res = [s.get("residual") for s in subs if s["mode"] == "exact" and "residual" in s]
    if failing and "residual" in failing[0]:
        residual = failing[0]["residual"]
    elif mode == "exact":
        residual = "0" if all(r == "0" for r in exact_res) or not exact_res else exact_res[0]
    else:
        residual = max((s["residual"] for s in subs if isinstance(s.get("residual"), float)), default=0.0)
    d = {"subchecks": subs}
    if details:
        d.update(details)
    return CheckRecord(name, "pass" if ok else "fail", mode, residual, d)


# -- individual checks ---------------------------------------------------


@dataclass
class _Context:
    spec: ModelSpec
    model: SigmaModel
    is_veronese: bool
    decomposition: SpinDecomposition | None = None
    seeds: dict = field(default_factory=dict)


def _check_constraints(ctx: _Context) -> CheckRecord:
    m = ctx.model
    flags = chain_constraints(m)
    subs = [_sub(k, "exact", v, "0" if v else "nonzero") for k, v in flags.items()]
    rec = all(recurrence_consistent(m, k) for k in range(m.two_s))
    subs.append(_sub("projector_recurrence", "exact", rec, "0" if rec else "nonzero"))
    seed = ctx.spec.seed_rng
    worst = numeric_chain_check(m, n_points=100, seed=seed)
    ctx.seeds["constraints_points"] = seed
    subs.append(_sub("numeric_projector_identities", "numeric", worst < ctx.spec.tolerances.identity_rtol, worst))
    return _record_from_subs("constraints", subs)


def _check_el(ctx: _Context) -> CheckRecord:
    subs = []
    for k, P in enumerate(ctx.model.P):
        r = el_residual(P)
        subs.append(_sub(f"el_P{k}", "exact", r.is_zero, _first_nonzero([r.matrix])))
        subs.append(_sub(f"conservation_P{k}", "exact", r.conservation_is_zero, _first_nonzero([r.conservation])))
    return _record_from_subs("el", subs)


def _check_immersion(ctx: _Context) -> CheckRecord:
    m = ctx.model
    diff = spin_from_immersions(m) - m.Sz
    subs = [_sub("Sz_equals_minus_half_i_sum_X", "exact", diff.is_zero(), _first_nonzero([diff]))]
    traceless = all(X.trace().is_zero() for X in m.X)
    anti = all((X + X.dagger()).is_zero() for X in m.X)
    subs.append(_sub("X_traceless", "exact", traceless, "0" if traceless else "nonzero"))
    subs.append(_sub("X_anti_hermitian", "exact", anti, "0" if anti else "nonzero"))
    details = {}
    if m.two_s == 1:
        d = m.X[0] - m.X[1]
        subs.append(_sub("X0_equals_X1", "exact", d.is_zero(), _first_nonzero([d])))
        details["X0_equals_X1"] = d.is_zero()
    return _record_from_subs("immersion", subs, details)


def _check_spin(ctx: _Context) -> CheckRecord:
    tol = ctx.spec.tolerances
    rep = spin_properties(ctx.model.Sz, ctx.model.two_s, tol.rank_svd_threshold, ctx.spec.seed_rng)
    ctx.seeds["rank_point"] = ctx.spec.seed_rng
    subs = [
        _sub("trace_zero", "exact", rep.trace_zero, str(rep.trace)),
        _sub("hermitian", "exact", rep.hermitian),
        _sub("killing_form", "exact", rep.killing_ok, value=str(rep.killing_value), expected=str(rep.killing_expected)),
        _sub("minimal_polynomial", "exact", rep.min_poly_zero, "0" if rep.min_poly_zero else "nonzero"),
        _sub("determinant_parity", "exact", rep.det_parity_ok, determinant=str(rep.determinant)),
        _sub(
            "numeric_rank",
            "numeric",
            rep.rank_ok,
            rank=rep.numeric_rank,
            expected=rep.expected_rank,
            singular_values=rep.singular_values,
        ),
    ]
    return _record_from_subs("spin", subs)


def _equator_points(n: int = 16) -> np.ndarray:
    t = 2 * np.pi * (np.arange(n) + 0.5) / n
    return np.exp(1j * t)


def spherical_summary(dec: SpinDecomposition, seed: int) -> dict:
    """Convention finding plus the equator and origin probes."""
    pts = sample_points(200, "conjugate", seed, rmin=0.05, rmax=5.0)
    xi = np.array([p.xi for p in pts])
    sf = spherical_field(dec, xi)
    eq = _equator_points()
    theta_eq, _, _ = spherical_angles(evaluate_alpha(dec, eq))
    origin = evaluate_alpha(dec, np.array([0j]))[:, 0]
    return {
        "theta_convention": sf.theta_convention,
        "phi_convention": sf.phi_convention,
        "stated_convention": "theta = 2*arctan|xi|, phi = -arg(xi)",
        "stated_convention_holds": sf.theta_convention == "theta = 2*arctan|xi|"
        and sf.phi_convention == "phi = -arg(xi)",
        "equator_theta_max_error": float(np.max(np.abs(theta_eq - np.pi / 2))),
        "origin_alpha": [float(v) + 0.0 for v in origin],
    }


def _check_decomposition(ctx: _Context) -> CheckRecord:
    basis = pauli_basis(ctx.model.two_s)
    dec = decompose_spin(ctx.model.Sz, basis)
    ctx.decomposition = dec if dec.exists else None
    details: dict = {"exists": dec.exists, "tridiagonal": is_tridiagonal(ctx.model.Sz)}
    subs = [_sub("exists", "exact", dec.exists, _first_nonzero([dec.residual]))]
    if dec.exists:
        details["alpha"] = [str(a) for a in dec.alpha]
        norm = dec.normalization()
        subs.append(_sub("normalization", "exact", norm.equals(RationalFunction.one()), value=str(norm)))
        subs.append(_sub("alpha_real", "exact", dec.is_real()))
        if ctx.is_veronese:
            cf = all(a.equals(b) for a, b in zip(dec.alpha, veronese_alpha_closed_form()))
            subs.append(_sub("alpha_closed_form", "exact", cf))
        sph = spherical_summary(dec, ctx.spec.seed_rng)
        ctx.seeds["spherical_points"] = ctx.spec.seed_rng
        subs.append(_sub("equator_theta", "numeric", sph["equator_theta_max_error"] < 1e-12, sph["equator_theta_max_error"]))
        details["spherical"] = sph
    else:
        details["residual_nonzero_entries"] = {
            f"{i},{j}": str(dec.residual[i, j]) for i, j in dec.residual.nonzero_entries()
        }
    return _record_from_subs("decomposition", subs, details)


def _check_ladder(ctx: _Context) -> CheckRecord:
    two_s = ctx.model.two_s
    Sz, Sp, Sm = veronese_spin_components(two_s)
    subs = [_sub("Sz_closed_form", "exact", Sz.equals(ctx.model.Sz))]
    subs += [_sub(k, "exact", v) for k, v in su2_relations(Sz, Sp, Sm).items()]
    ladder = all(
        ladder_on_f(w, k, two_s).equals(ladder_expected(w, k, two_s)) for w in ("plus", "minus") for k in range(two_s + 1)
    )
    subs.append(_sub("ladder_actions", "exact", ladder))
    cf = all(projector_from_f(closed_form_f(k, two_s)).equals(ctx.model.P[k]) for k in range(two_s + 1))
    subs.append(_sub("closed_form_f_projectors", "exact", cf))
    cp = all(closed_form_projector(k, two_s).equals(ctx.model.P[k]) for k in range(two_s + 1))
    subs.append(_sub("closed_form_projector_entries", "exact", cp))
    orth = all(
        krawtchouk_orthogonality(two_s, k, k2).is_zero()
        for k in range(two_s + 1)
        for k2 in range(two_s + 1)
        if k != k2
    )
    subs.append(_sub("krawtchouk_orthogonality", "exact", orth))
    return _record_from_subs("ladder", subs)


def _check_algebraic(ctx: _Context) -> CheckRecord:
    m = ctx.model
    _, Sp, Sm = veronese_spin_components(m.two_s)
    n = m.two_s
    up_P = all(algebraic_raise_P(m.P[k], Sp, Sm).equals(m.P[k + 1]) for k in range(n))
    down_P = all(algebraic_lower_P(m.P[k], Sp, Sm).equals(m.P[k - 1]) for k in range(1, n + 1))
    up_X = all(algebraic_raise_X(m.X[k], m.P[k], Sp, Sm).equals(m.X[k + 1]) for k in range(n))
    down_X = all(algebraic_lower_X(m.X[k], m.P[k], Sp, Sm).equals(m.X[k - 1]) for k in range(1, n + 1))
    subs = [
        _sub("raise_P", "exact", up_P),
        _sub("lower_P", "exact", down_P),
        _sub("raise_X", "exact", up_X),
        _sub("lower_X", "exact", down_X),
    ]
    return _record_from_subs("algebraic-recurrence", subs)


HEISENBERG_LATTICE = LatticeConfig(J1=1.0, J2=1.5, J3=0.25, a=1.0, b=0.8, region=(-1.0, 1.0, -1.0, 1.0))


def _check_heisenberg(ctx: _Context) -> CheckRecord:
    tol = ctx.spec.tolerances
    alpha = AlphaField.from_decomposition(ctx.decomposition)
    dyn = dyn_eq_residual(alpha)
    full = full_el_residual(alpha)
    subs = [
        _sub("cross_product", "exact", dyn.is_zero, "0" if dyn.is_zero else str(dyn.components)),
        _sub("projected_el", "exact", full.is_zero, "0" if full.is_zero else str(full.components)),
        _sub("multiplier_real", "exact", mu_is_real(alpha), mu=str(full.mu)),
        _sub("perpendicularity", "exact", all(perpendicularity(alpha).values())),
    ]
    seed = ctx.spec.seed_rng
    pts = sample_points(100, "conjugate", seed)
    ctx.seeds["heisenberg_points"] = seed
    xi = np.array([p.xi for p in pts])
    nerr = normalization_error(alpha, xi)
    subs.append(_sub("normalization_samples", "numeric", nerr < 1e-12, nerr))
    ndyn = dyn_eq_residual(alpha, "numeric", pts).max_norm
    nfull = full_el_residual(alpha, "numeric", pts).max_norm
    subs.append(_sub("cross_product_numeric", "numeric", ndyn < 1e-10, ndyn))
    subs.append(_sub("projected_el_numeric", "numeric", nfull < 1e-10, nfull))
    useeds = [seed + j for j in range(10)]
    ctx.seeds["unitaries"] = useeds
    worst_comm = worst_dyn = worst_alg = 0.0
    co = True
    N = ctx.model.N
    for us in useeds:
        r = congruence_test(alpha, ctx.model.two_s, random_unitary(N, us), pts, tol.residual_atol, us)
        worst_comm = max(worst_comm, r.max_commutator)
        worst_dyn = max(worst_dyn, r.max_dyn_residual)
        worst_alg = max(worst_alg, r.algebra_error)
        co = co and r.co_vanishing
    subs.append(
        _sub(
            "congruent_basis",
            "numeric",
            co and worst_comm < tol.residual_atol and worst_alg < 1e-10,
            max(worst_comm, worst_alg),
            max_commutator=worst_comm,
            max_dyn_residual=worst_dyn,
            algebra_error=worst_alg,
        )
    )
    stat = lattice_stationarity(HEISENBERG_LATTICE, alpha)
    subs.append(
        _sub(
            "lattice_second_order",
            "numeric",
            stat.second_order,
            stat.lattice_residual_by_spacing[-1][1],
            **stat.as_dict(),
        )
    )
    cfg = dataclasses.asdict(HEISENBERG_LATTICE)
    return _record_from_subs("heisenberg", subs, {"lattice": cfg})


CHECKS: dict[str, Callable[[_Context], CheckRecord]] = {
    "constraints": _check_constraints,
    "el": _check_el,
    "immersion": _check_immersion,
    "spin": _check_spin,
    "decomposition": _check_decomposition,
    "ladder": _check_ladder,
    "algebraic-recurrence": _check_algebraic,
    "heisenberg": _check_heisenberg,
}


def _closure(requested: tuple[str, ...]) -> list[str]:
    """Requested checks plus their prerequisites, in dependency order."""
    need: set[str] = set()

    def visit(c: str) -> None:
        if c in need:
            return
        need.add(c)
        for d in DEPENDS[c]:
            visit(d)

    for c in requested:
        visit(c)
    return [c for c in ALL_CHECKS if c in need]


def run_pipeline(spec: ModelSpec) -> VerificationReport:
    """Build the chain and run the requested checks (and their prerequisites)."""
    timings: dict[str, float] = {}
    records: list[CheckRecord] = []
    t0 = time.perf_counter()
    order = _closure(spec.checks)
    ctx = None
    try:
        seed = spec.seed_vector()
        model = SigmaModel.build(seed)
        is_ver = spec.is_veronese_keyword or seed.equals(veronese_seed(spec.two_s))
        ctx = _Context(spec, model, is_ver)
        records.append(
            CheckRecord(
                "build",
                "pass",
                "exact",
                "0",
                {"seed_vector": [str(e) for e in seed.entries], "veronese": is_ver, "f": [str(f) for f in model.f]},
            )
        )
    except (SigmaSpinError, ValueError, ArithmeticError) as exc:
        records.append(CheckRecord("build", "fail", "exact", None, {"error": f"{type(exc).__name__}: {exc}"}))
    timings["build"] = time.perf_counter() - t0
    status: dict[str, str] = {}
    for name in order:
        t1 = time.perf_counter()
        if ctx is None:
            rec = CheckRecord(name, "skipped", "exact", None, {"reason": "model construction failed"})
        elif any(status.get(d) not in ("pass", "not_applicable") for d in DEPENDS[name]):
            failed = [d for d in DEPENDS[name] if status.get(d) not in ("pass", "not_applicable")]
            rec = CheckRecord(name, "skipped", "exact", None, {"reason": f"prerequisite failed: {', '.join(failed)}"})
        elif name in VERONESE_ONLY and not ctx.is_veronese:
            rec = CheckRecord(name, "not_applicable", "exact", None, {"reason": "defined for the Veronese chain only"})
        else:
            try:
                rec = CHECKS[name](ctx)
            except (SigmaSpinError, ValueError, ArithmeticError) as exc:
                rec = CheckRecord(name, "fail", "exact", None, {"error": f"{type(exc).__name__}: {exc}"})
        status[name] = rec.status
        records.append(rec)
        timings[name] = time.perf_counter() - t1
    timings["total"] = time.perf_counter() - t0
    seeds = {"seed_rng": spec.seed_rng}
    if ctx is not None:
        seeds.update(ctx.seeds)
    return VerificationReport(spec.echo(), records, seeds, {k: round(v, 6) for k, v in timings.items()})


# -- CSV outputs -----------------------------------------------------------


def _fmt(x: float) -> str:
    if x == 0:
        x = 0.0
    return format(float(x), ".17g")


def export_field(
    spec: ModelSpec,
    nx: int = 41,
    ny: int = 41,
    xrange: tuple[float, float] = (-2.0, 2.0),
    yrange: tuple[float, float] = (-2.0, 2.0),
) -> str:
    """CSV of alpha and the spherical angles on a grid with ``xi = x + i y``; y-major rows."""
    if nx < 1 or ny < 1:
        raise ParameterOutOfRange("grid extents must be positive")
    model = SigmaModel.build(spec.seed_vector())
    dec = decompose_spin(model.Sz, pauli_basis(model.two_s))
    if not dec.exists:
        raise NoDecomposition("the spin matrix of this model is not a combination of the Pauli basis")
    xs = np.linspace(xrange[0], xrange[1], nx) if nx > 1 else np.array([xrange[0]])
    ys = np.linspace(yrange[0], yrange[1], ny) if ny > 1 else np.array([yrange[0]])
    Y, X = np.meshgrid(ys, xs, indexing="ij")
    xi = (X + 1j * Y).ravel()
    alpha = evaluate_alpha(dec, xi)
    theta, phi, _ = spherical_angles(alpha)
    buf = io.StringIO()
    buf.write("x,y,alpha_x,alpha_y,alpha_z,theta,phi\n")
    for k in range(xi.size):
        row = [X.ravel()[k], Y.ravel()[k], alpha[0, k], alpha[1, k], alpha[2, k], theta[k], phi[k]]
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def krawtchouk_table(two_s: int, p_value: Fraction | str) -> str:
    """CSV rows ``j,k,exact,float`` of K_j(k; p, 2s) for ``0 < p < 1``."""
    if two_s < 1:
        raise ParameterOutOfRange("two_s must be a positive integer")
    p = Fraction(p_value)
    if not 0 < p < 1:
        raise ParameterOutOfRange("p must lie strictly between 0 and 1")
    buf = io.StringIO()
    buf.write("j,k,exact,float\n")
    for j in range(two_s + 1):
        for k in range(two_s + 1):
            v = krawtchouk_value(j, k, two_s, p)
            buf.write(f"{j},{k},{v},{_fmt(float(v))}\n")
    return buf.getvalue()


def describe_model(spec: ModelSpec) -> str:
    """Human-readable dump of the chain: f_k, P_k, t_k and S^z."""
    model = SigmaModel.build(spec.seed_vector())
    lines = [f"two_s = {model.two_s}", f"N = {model.N}", f"seed = {spec.seed.strip()}"]
    for k, f in enumerate(model.f):
        lines.append(f"f_{k} = {f}")
    for k, P in enumerate(model.P):
        lines.append(f"P_{k} =")
        lines.append(str(P))
    for k, t in enumerate(model.t):
        lines.append(f"t_{k} = {t}")
    lines.append("Sz =")
    lines.append(str(model.Sz))
    return "\n".join(lines) + "\n"
