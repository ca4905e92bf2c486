"""Command line front end: ``bergcurve analyze|decide|l2delta|verify``."""

from __future__ import annotations

import argparse
import sys

from . import numeric
from .algebra import TruncSeries
from .dichotomy import a2_normalization_dim, decide, l2_delta
from .errors import BergcurveError, IrrationalCoefficients, UnresolvedLocus
from .fileio import (
    base_report,
    config_from_data,
    curve_from_data,
    curve_summary,
    divisors_summary,
    dump_report,
    jsonable,
    openset_from_data,
    verdict_summary,
)
from .puiseux import make_branch

EXIT_OK = 0
EXIT_NUMERIC = 6


def _default_branches():
    """Reference branches for the exponent checks when no curve is given."""
    def s(d, N=16):
        return TruncSeries.from_dict(d, N, exact=True)

    out = []
    specs = [
        ("cusp", {2: 1}, {3: 1}, None),
        ("smooth", {1: 1}, {}, None),
        ("e6", {3: 1}, {4: 1}, None),
        ("e8", {3: 1}, {5: 1}, None),
        ("w", {4: 1}, {5: 1, 7: 2}, None),
        ("a5", {5: 1}, {6: 1}, None),
    ]
    for name, a, b, _ in specs:
        out.append((make_branch([s(a), s(b)], branch_id=f"{name}.0"), numeric.Side.AT_CENTER))
    inf_specs = [("tangent", {1: 1}, {2: 1}), ("transversal", {1: 1}, {1: 1}),
                 ("flex", {1: 1}, {3: 1}), ("cuspinf", {2: 1}, {3: 1})]
    for name, a, b in inf_specs:
        br = make_branch([s(a), s(b)], center=(1, 0, 0), branch_id=f"{name}.0")
        out.append((br, numeric.Side.AT_INFINITY))
    return out


def _curve_branches(curve):
    out = []
    for p in curve.points:
        side = numeric.Side.AT_INFINITY if p.at_infinity else numeric.Side.AT_CENTER
        for b in p.branches:
            if b.mult <= 5:
                out.append((b.at_order(max(b.N, 12)) if not b.exact else b, side))
    return out


def cmd_analyze(args) -> tuple[dict, int]:
    curve, ambient = curve_from_data(args.curve)
    rep = base_report("analyze")
    rep["curve"] = curve_summary(curve, ambient)
    rep["divisors"] = divisors_summary(curve)
    return rep, EXIT_OK


def cmd_decide(args) -> tuple[dict, int]:
    curve, ambient = curve_from_data(args.curve)
    spec = openset_from_data(args.openset, curve, ambient)
    verdict = decide(curve, spec, exact=args.exact, bounds_only=args.bounds_only)
    rep = base_report("decide")
    rep["curve"] = curve_summary(curve, ambient)
    rep["divisors"] = divisors_summary(curve)
    rep["open_set"] = {
        "ambient": spec.ambient.value,
        "complement": spec.complement_kind.value,
        "points": {k: v.value for k, v in sorted(spec.point_classes.items())},
    }
    rep["verdict"] = verdict_summary(verdict)
    return rep, EXIT_OK


def cmd_l2delta(args) -> tuple[dict, int]:
    curve, ambient = curve_from_data(args.curve)
    spec = openset_from_data(args.openset, curve, ambient)
    value = l2_delta(curve, spec)
    rep = base_report("l2delta")
    rep["curve"] = curve_summary(curve, ambient)
    rep["divisors"] = divisors_summary(curve)
    rep["l2delta"] = {
        "value": value,
        "normalization_dim": a2_normalization_dim(curve, spec) if value else None,
        "delta_bound": sum(
            p.delta for p in curve.singular_points
            if spec.bind(curve).class_of(p.point_id).value in ("interior", "boundary")
        ),
    }
    return rep, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    cfg, data = config_from_data(args.config)
    wanted = data.get("checks") or ["membership", "isometry", "convergence", "exponents"]
    results = []
    if "membership" in wanted:
        results += numeric.membership_checks(cfg)
    if "isometry" in wanted:
        results += numeric.isometry_checks(cfg)
    if "convergence" in wanted:
        results += numeric.convergence_checks(cfg)
    if "exponents" in wanted:
        if args.curve:
            branches = _curve_branches(curve_from_data(args.curve)[0])
        else:
            branches = _default_branches()
        results += numeric.exponent_checks(cfg, branches)
    failed = [r for r in results if not r.passed]
    rep = base_report("verify")
    rep["numeric"] = {
        "config": {
            "annuli": cfg.annuli,
            "nodes_radial": cfg.nodes_radial,
            "nodes_angular": cfg.nodes_angular,
            "rel_tol": cfg.rel_tol,
            "isometry_tol": cfg.isometry_tol,
            "slope_tol": cfg.slope_tol,
        },
        "total": len(results),
        "failed": len(failed),
        "checks": [{"name": r.name, "passed": r.passed, **r.detail} for r in results],
    }
    return jsonable(rep), EXIT_OK if not failed else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergcurve",
        description="Bergman-space dichotomy and singularity invariants for plane curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, openset=False):
        p.add_argument("--curve", required=True, help="curve description (YAML)")
        if openset:
            p.add_argument("--openset", required=True, help="open set description (YAML)")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("analyze", help="special points, invariants and divisors")
    common(p)
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("decide", help="finite/infinite verdict with dimension or bounds")
    common(p, openset=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="fail unless the dimension is exact")
    g.add_argument("--bounds-only", action="store_true", help="report Riemann-Roch bounds only")
    p.set_defaults(func=cmd_decide)
    p = sub.add_parser("l2delta", help="L^2 delta invariant of the open set")
    common(p, openset=True)
    p.set_defaults(func=cmd_l2delta)
    p = sub.add_parser("verify", help="numeric quadrature checks")
    p.add_argument("--config", help="quadrature config (YAML); defaults if omitted")
    p.add_argument("--curve", help="take exponent-check branches from this curve")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except (IrrationalCoefficients, UnresolvedLocus) as exc:
        print(f"error: {exc} (describe the curve in parametrized mode instead)", file=sys.stderr)
        return exc.exit_code
    except BergcurveError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    text = dump_report(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
