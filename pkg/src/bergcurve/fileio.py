"""Reading curve, open-set and config files; building reports.

All files are YAML documents carrying ``schema_version: "1"``.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

import yaml

from .algebra import Poly, TruncSeries, as_rat, rat_str
from .curves import DEFAULT_ORDER, CurveModel, analyze_implicit, curve_from_map, curve_from_points
from .dichotomy import Ambient, ComplementKind, DichotomyReport, OpenSetSpec, PointClass
from .divisors import Divisor, affine_multiplicity_divisor, degree_consistency, multiplicity_divisor
from .errors import InconsistentInput, ParseError
from .invariants import build_record
from .numeric import QuadratureConfig
from .puiseux import Anchor, check_primitive, make_branch, normalize_point

SCHEMA_VERSION = "1"
SYMBOLIC = ("sym", "symbolic")


def load_yaml(source) -> dict:
    """Parse a file path, YAML text or an already parsed mapping."""
    if isinstance(source, Mapping):
        return dict(source)
    try:
        if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                         and Path(source).exists()):
            text = Path(source).read_text()
        else:
            text = source
        data = yaml.safe_load(text)
    except (OSError, yaml.YAMLError) as exc:
        raise ParseError(f"cannot read input: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("input must be a mapping")
    return data


def _check_version(data: Mapping) -> None:
    v = data.get("schema_version", SCHEMA_VERSION)
    if str(v) != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {v!r}")


def _rat(value, what: str) -> Fraction:
    if isinstance(value, float):
        raise ParseError(f"{what}: floating point value {value!r}; use an integer or p/q")
    try:
        return as_rat(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError(f"{what}: not a rational number: {value!r}") from None


def _int(value, what: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer")
    if minimum is not None and value < minimum:
        raise ParseError(f"{what} must be at least {minimum}")
    return value


def _series(spec, N: int | None, what: str) -> tuple[TruncSeries, bool]:
    """Exponent -> coefficient map to a series; returns ``(series, symbolic)``."""
    if spec is None:
        spec = {}
    if not isinstance(spec, Mapping):
        raise ParseError(f"{what}: expected an exponent -> coefficient mapping")
    coeffs = {}
    symbolic = False
    for k, c in spec.items():
        try:
            e = int(k)
        except (TypeError, ValueError):
            raise ParseError(f"{what}: exponent {k!r} is not an integer") from None
        if e < 0:
            raise ParseError(f"{what}: negative exponent {e}")
        if isinstance(c, str) and c.strip().lower() in SYMBOLIC:
            symbolic = True
            coeffs[e] = Fraction(1)
        else:
            coeffs[e] = _rat(c, what)
    if 0 in coeffs and coeffs[0] != 0:
        raise ParseError(f"{what}: branch coordinates are centered (no constant term)")
    top = max(coeffs, default=1)
    if N is None:
        return TruncSeries.from_dict(coeffs, max(top, 1), exact=True), symbolic
    if top > N:
        raise ParseError(f"{what}: exponent {top} beyond the declared truncation {N}")
    return TruncSeries.from_dict(coeffs, N), symbolic


def _anchor(spec, what: str) -> Anchor | None:
    if spec is None:
        return None
    if not isinstance(spec, Mapping) or "tau" not in spec:
        raise ParseError(f"{what}: anchor needs 'tau' (and optionally 'component')")
    tau = spec["tau"]
    comp = _int(spec.get("component", 0), f"{what}: component", 0)
    if isinstance(tau, str) and tau.strip().lower() in ("inf", "infinity"):
        return Anchor(comp, None)
    return Anchor(comp, _rat(tau, f"{what}: tau"))


def _center(spec, what: str):
    if spec is None or (isinstance(spec, str) and spec.strip().lower() in SYMBOLIC):
        return None
    if not isinstance(spec, (list, tuple)) or len(spec) != 3:
        raise ParseError(f"{what}: center must be three homogeneous coordinates or 'symbolic'")
    return normalize_point([_rat(c, what) for c in spec])[0]


def _point_records(points, default_N: int | None):
    if not isinstance(points, list) or not points:
        raise ParseError("parametrized mode needs a non-empty 'points' list")
    records = []
    for i, ps in enumerate(points):
        if not isinstance(ps, Mapping):
            raise ParseError(f"points[{i}] must be a mapping")
        base = str(ps.get("id", f"p{i}"))
        if "." in base:
            raise ParseError(f"point id {base!r} may not contain '.'")
        repeat = _int(ps.get("repeat", 1), f"points[{i}].repeat", 1)
        center = _center(ps.get("center"), f"points[{i}].center")
        branch_specs = ps.get("branches")
        if not isinstance(branch_specs, list) or not branch_specs:
            raise ParseError(f"points[{i}] needs a non-empty 'branches' list")
        at_inf = bool(ps.get("at_infinity", False))
        if center is not None and center[-1] == 0:
            at_inf = True
        delta = ps.get("delta")
        if delta is not None:
            delta = _int(delta, f"points[{i}].delta", 0)
        for rep in range(repeat):
            pid = base if repeat == 1 else f"{base}{rep + 1}"
            branches = []
            for j, bs in enumerate(branch_specs):
                what = f"points[{i}].branches[{j}]"
                if not isinstance(bs, Mapping) or "series" not in bs:
                    raise ParseError(f"{what} needs a 'series' list")
                N = bs.get("truncation", default_N)
                if N is not None:
                    N = _int(N, f"{what}.truncation", 1)
                comps, sym = [], False
                for k, s in enumerate(bs["series"]):
                    series, symk = _series(s, N, f"{what}.series[{k}]")
                    comps.append(series)
                    sym = sym or symk
                if len(comps) != 2:
                    raise ParseError(f"{what}: plane branches have two series")
                if N is None:
                    top = max(c.N for c in comps)
                    comps = [c.truncate(top) for c in comps]
                if bs.get("at_infinity", False):
                    if center is not None and center[-1] != 0:
                        raise ParseError(f"{what}: flagged at infinity but the center is affine")
                    at_inf = True
                mult = bs.get("mult")
                b = make_branch(
                    comps, center=center, branch_id=f"{pid}.{j}",
                    mult=None if mult is None else _int(mult, f"{what}.mult", 1),
                    anchor=_anchor(bs.get("anchor"), what), symbolic=sym,
                )
                check_primitive(b)
                branches.append(b)
            records.append(build_record(pid, branches, at_infinity=at_inf, delta=delta))
    return records


def curve_from_data(data) -> tuple[CurveModel, str]:
    """Build the curve model and return it with its declared ambient."""
    data = load_yaml(data)
    _check_version(data)
    mode = data.get("mode")
    ambient = str(data.get("ambient", "projective"))
    if ambient not in ("projective", "affine"):
        raise ParseError("ambient must be 'projective' or 'affine'")
    name = str(data.get("name", ""))
    N = data.get("truncation")
    N = DEFAULT_ORDER if N is None else _int(N, "truncation", 2)
    degree = data.get("degree")
    if degree is not None:
        degree = _int(degree, "degree", 1)
    if mode == "implicit":
        variables = tuple(data.get("variables", ("x", "y", "z")))
        if len(variables) != 3:
            raise ParseError("implicit mode uses three homogeneous variables")
        try:
            F = Poly.parse(str(data["equation"]), variables)
        except KeyError:
            raise ParseError("implicit mode needs 'equation'") from None
        except (ValueError, SyntaxError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse equation: {exc}") from None
        if F.is_zero() or not F.is_homogeneous():
            raise ParseError("equation must be a nonzero homogeneous polynomial")
        if degree is not None and degree != F.total_degree():
            raise ParseError(f"declared degree {degree} but the equation has degree {F.total_degree()}")
        curve = analyze_implicit(F, N, name)
    elif mode == "parametrized" and "map" in data:
        polys = data["map"]
        if not isinstance(polys, list) or len(polys) != 3:
            raise ParseError("'map' must list three polynomials in t")
        try:
            ps = [Poly.parse(str(p), ("t",)) for p in polys]
        except (ValueError, SyntaxError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse map: {exc}") from None
        curve = curve_from_map(ps, N, name)
        if degree is not None and degree != curve.degree:
            raise ParseError(f"declared degree {degree} but the map has degree {curve.degree}")
    elif mode == "parametrized":
        records = _point_records(data.get("points"), data.get("branch_truncation"))
        genus = data.get("genus")
        if genus is not None:
            genus = _int(genus, "genus")
        comps = _int(data.get("components", 1), "components", 1)
        curve = curve_from_points(records, degree, genus, comps, name=name)
    else:
        raise ParseError("mode must be 'implicit' or 'parametrized'")
    return curve, ambient


def openset_from_data(data, curve: CurveModel, default_ambient: str = "projective") -> OpenSetSpec:
    data = load_yaml(data)
    _check_version(data)
    ambient = data.get("ambient", default_ambient)
    kind = data.get("complement", data.get("complement_kind", "locally_polar"))
    try:
        ambient = Ambient(ambient)
        kind = ComplementKind(kind)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    classes: dict[str, PointClass] = {}
    raw = data.get("points", {}) or {}
    try:
        if isinstance(raw, Mapping):
            for pid, cls in raw.items():
                classes[str(pid)] = PointClass(cls)
        elif isinstance(raw, list):
            for i, item in enumerate(raw):
                cls = PointClass(item["class"])
                if "id" in item:
                    classes[str(item["id"])] = cls
                else:
                    at = normalize_point([_rat(c, f"points[{i}].at") for c in item["at"]])[0]
                    hits = [p.point_id for p in curve.points if p.center == at]
                    if not hits:
                        raise InconsistentInput(f"no special point at {item['at']}")
                    classes[hits[0]] = cls
        else:
            raise ParseError("'points' must be a mapping or a list")
        default = data.get("default")
        if default is not None:
            default = PointClass(default)
            for p in curve.points:
                if not (ambient == Ambient.AFFINE and p.at_infinity):
                    classes.setdefault(p.point_id, default)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad point classification: {exc}") from None
    return OpenSetSpec(ambient, kind, classes)


def config_from_data(data) -> tuple[QuadratureConfig, dict]:
    data = load_yaml(data) if data is not None else {}
    _check_version(data)
    q = data.get("quadrature", {}) or {}
    fields = ("annuli", "nodes_radial", "nodes_angular", "rel_tol", "isometry_tol",
              "slope_tol", "fit_kmin", "fit_kmax")
    unknown = set(q) - set(fields)
    if unknown:
        raise ParseError(f"unknown quadrature settings: {sorted(unknown)}")
    try:
        cfg = QuadratureConfig(**q)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad quadrature config: {exc}") from None
    return cfg, data


# ---------------------------------------------------------------------------
# reports


def _q(x: Fraction) -> str:
    return rat_str(x)


def _num(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def branch_summary(b, inf_mult=None) -> dict:
    out = {
        "id": b.branch_id,
        "mult": b.mult,
        "orders": [o for o in b.orders],
        "leading": ["symbolic" if b.symbolic else _q(c.leading_coefficient()) for c in b.components],
        "truncation": b.N,
        "exact": b.exact,
    }
    if inf_mult is not None:
        out["infinity_intersection"] = inf_mult
    if b.anchor is not None:
        out["anchor"] = {
            "component": b.anchor.component,
            "tau": "inf" if b.anchor.tau is None else _q(b.anchor.tau),
        }
    return out


def curve_summary(curve: CurveModel, ambient: str) -> dict:
    points = []
    for p in curve.points:
        rec = {
            "id": p.point_id,
            "center": "symbolic" if p.center is None else [_q(c) for c in p.center],
            "at_infinity": p.at_infinity,
            "singular": p.is_singular,
            "m": p.m,
            "r": p.r,
            "delta": p.delta,
            "branches": [
                branch_summary(b, p.inf_mults[i] if p.inf_mults else None)
                for i, b in enumerate(p.branches)
            ],
        }
        points.append(rec)
    return {
        "name": curve.name,
        "mode": curve.mode,
        "ambient": ambient,
        "degree": curve.degree,
        "genus": curve.genus,
        "components": curve.components,
        "total_delta": curve.total_delta,
        "points": points,
    }


def divisor_summary(D: Divisor) -> dict:
    return {"entries": D.to_dict(), "degree": D.degree}


def divisors_summary(curve: CurveModel) -> dict:
    out = {"D_m": divisor_summary(multiplicity_divisor(curve))}
    if curve.has_infinity and not curve.unresolved_infinity:
        out["D_m_affine"] = divisor_summary(affine_multiplicity_divisor(curve))
        chk = degree_consistency(curve)
        out["degree_check"] = {
            "branchwise": chk.branchwise,
            "pointwise": chk.pointwise,
            "infinity_intersection": chk.intersection_branchwise,
            "consistent": chk.consistent,
        }
    return out


def verdict_summary(rep: DichotomyReport) -> dict:
    out = {"verdict": rep.verdict}
    if rep.finite:
        out.update(
            exact_dim=rep.exact_dim,
            lower_bound=rep.lower_bound,
            upper_bound=rep.upper_bound,
            effective_divisor_used=divisor_summary(rep.effective_divisor_used),
            interior_condition_count=rep.interior_condition_count,
        )
    out["genus"] = rep.genus
    out["notes"] = list(rep.notes)
    return out


def base_report(command: str) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command}


def dump_report(report: dict) -> str:
    return yaml.safe_dump(report, sort_keys=False, default_flow_style=False, allow_unicode=True)


def jsonable(obj: Any):
    """Numbers rounded for byte-stable output."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _num(obj)
    try:
        import numpy as np

        if isinstance(obj, np.generic):
            return jsonable(obj.item())
    except ImportError:  # pragma: no cover
        pass
    return str(obj)
