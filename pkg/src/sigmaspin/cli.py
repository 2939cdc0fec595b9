"""Command-line interface: ``sigmaspin verify | export-field | krawtchouk | print-model``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import SigmaSpinError
from .numeric import ToleranceConfig
from .pipeline import (
    ALL_CHECKS,
    ModelSpec,
    describe_model,
    export_field,
    krawtchouk_table,
    parse_spec_text,
    run_pipeline,
    spec_from_mapping,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", type=Path, help="spec file with 'key = value' lines")
    p.add_argument("--two-s", type=int, help="2s, so N = 2s + 1")
    p.add_argument("--seed", help="'veronese' or comma-separated holomorphic components, e.g. '1, xi, xi^2'")
    p.add_argument("--checks", help=f"comma-separated subset of {', '.join(ALL_CHECKS)} (default: all)")
    p.add_argument("--seed-rng", type=int, help="seed for sample points and random unitaries")
    p.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE", help="tolerance override (repeatable)")


def _spec_from_args(args: argparse.Namespace) -> ModelSpec:
    values: dict[str, str] = {}
    if args.spec is not None:
        base = parse_spec_text(args.spec.read_text())
        values = {
            "two_s": str(base.two_s),
            "seed": base.seed,
            "checks": ",".join(base.checks),
            "seed_rng": str(base.seed_rng),
            **{k: repr(v) for k, v in base.tolerances.as_dict().items()},
        }
    if args.two_s is not None:
        values["two_s"] = str(args.two_s)
    if args.seed is not None:
        values["seed"] = args.seed
    if args.checks is not None:
        values["checks"] = args.checks
    if args.seed_rng is not None:
        values["seed_rng"] = str(args.seed_rng)
    for item in args.tol:
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"--tol expects KEY=VALUE, got {item!r}")
        values[key.strip()] = val.strip()
    return spec_from_mapping(values, ToleranceConfig.from_env())


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_verify(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    report = run_pipeline(spec)
    _write(report.to_json(with_timings=not args.no_timings), args.output)
    for r in report.records:
        print(f"{r.status.upper():15s} {r.name}", file=sys.stderr)
    return EXIT_OK if report.all_pass else EXIT_CHECK_FAILED


def cmd_export_field(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    text = export_field(spec, args.nx, args.ny, (args.xmin, args.xmax), (args.ymin, args.ymax))
    _write(text, args.output)
    return EXIT_OK


def cmd_krawtchouk(args: argparse.Namespace) -> int:
    _write(krawtchouk_table(args.two_s, Fraction(args.p)), args.output)
    return EXIT_OK


def cmd_print_model(args: argparse.Namespace) -> int:
    _write(describe_model(_spec_from_args(args)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigmaspin",
        description="Exact solution chains of the CP^(N-1) sigma model, their spin matrices and the Heisenberg link.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="build a model and emit a JSON verification report")
    _add_model_args(p)
    p.add_argument("--output", "-o", type=Path)
    p.add_argument("--no-timings", action="store_true", help="omit the timings block")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-field", help="CSV of alpha, theta, phi on a grid of xi = x + i y")
    _add_model_args(p)
    p.add_argument("--nx", type=int, default=41)
    p.add_argument("--ny", type=int, default=41)
    p.add_argument("--xmin", type=float, default=-2.0)
    p.add_argument("--xmax", type=float, default=2.0)
    p.add_argument("--ymin", type=float, default=-2.0)
    p.add_argument("--ymax", type=float, default=2.0)
    p.add_argument("--output", "-o", type=Path)
    p.set_defaults(func=cmd_export_field)

    p = sub.add_parser("krawtchouk", help="CSV table of K_j(k; p, 2s)")
    p.add_argument("--two-s", type=int, required=True)
    p.add_argument("--p", required=True, help="rational in (0, 1), e.g. 1/2")
    p.add_argument("--output", "-o", type=Path)
    p.set_defaults(func=cmd_krawtchouk)

    p = sub.add_parser("print-model", help="print f_k, P_k, t_k and S^z")
    _add_model_args(p)
    p.add_argument("--output", "-o", type=Path)
    p.set_defaults(func=cmd_print_model)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SigmaSpinError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"sigmaspin: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
