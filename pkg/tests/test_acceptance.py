"""One test per acceptance criterion; each prints a single pass/fail line."""

import time

import pytest

from bergcurve.cli import _curve_branches
from bergcurve.dichotomy import (
    OpenSetSpec,
    a2_normalization_dim,
    decide,
    h0_bounds,
    h0_rational,
    l2_delta,
    semigroup_gap_count,
    triviality_test,
)
from bergcurve.divisors import Divisor, affine_multiplicity_divisor, degree_consistency
from bergcurve.errors import UnsupportedGenus
from bergcurve.invariants import build_record
from bergcurve.numeric import (
    QuadratureConfig,
    Side,
    isometry_checks,
    membership_checks,
    pullback_form_exponent,
)
from bergcurve.puiseux import Anchor

from conftest import SMOOTH_AFFINE, branch, glued_curve, load_curve, record_criterion


def classify(curve, cls, ambient="projective", kind="locally_polar"):
    classes = {p.point_id: cls for p in curve.points if not (ambient == "affine" and p.at_infinity)}
    return OpenSetSpec(ambient, kind, classes)


def test_criterion_01_nodal_table():
    t0 = time.perf_counter()
    c = load_curve("nodal_cubic")
    dims = [decide(c, classify(c, cls)).exact_dim for cls in ("boundary", "interior")]
    verdict = decide(c, classify(c, "boundary", kind="nonpolar")).verdict
    dt = time.perf_counter() - t0
    ok = dims == [1, 1] and verdict == "Infinite" and dt < 1.0
    record_criterion(1, ok, f"nodal cubic dims {dims}, nonpolar {verdict}, {dt:.3f}s")
    assert ok


def test_criterion_02_unicuspidal_table():
    rows, ok = [], True
    for m in range(2, 7):
        t0 = time.perf_counter()
        c = load_curve(f"unicuspidal_{m}")
        b = decide(c, classify(c, "boundary")).exact_dim
        i = decide(c, classify(c, "interior")).exact_dim
        dt = time.perf_counter() - t0
        ok = ok and b == m and i == 1 and dt < 1.0
        rows.append(f"m={m}:({b},{i},{dt:.2f}s)")
    record_criterion(2, ok, "boundary/interior dims " + " ".join(rows))
    assert ok


def _glued_spec():
    return OpenSetSpec("projective", "locally_polar", {"p0": "interior", "p1": "boundary"})


def test_criterion_03_l2_delta_construction():
    bad, worst, k0_dims = [], 0.0, {}
    for n in range(0, 7):
        for k in range(0, n + 1):
            t0 = time.perf_counter()
            c = glued_curve(n, k)
            val = l2_delta(c, _glued_spec())
            dim = a2_normalization_dim(c, _glued_spec())
            dt = time.perf_counter() - t0
            worst = max(worst, dt)
            if val != min(k, n) or dt >= 1.0:
                bad.append((n, k, val))
            if k == 0:
                k0_dims[n] = dim  # checked separately below
            elif dim != 2 * k:
                bad.append((n, k, "dim", dim))
    ok = not bad
    record_criterion(3, ok, f"L2delta = min(k,n) and dim = 2k for 0<=k<=n<=6 (k=0 dim: "
                     f"{sorted(set(k0_dims.values()))}, see xfail), worst {worst:.3f}s, bad {bad}")
    assert ok


@pytest.mark.xfail(strict=True, reason="k = 0 glues in a smooth point: the normalization "
                   "space is the constants (dimension 1), while 2k = 0")
def test_criterion_03_intermediate_dimension_at_k0():
    for n in range(0, 7):
        assert a2_normalization_dim(glued_curve(n, 0), _glued_spec()) == 0


def _specs_for(curve):
    out = []
    for ambient in ("projective", "affine"):
        if ambient == "affine" and not curve.has_infinity:
            continue
        ids = [p.point_id for p in curve.points if not (ambient == "affine" and p.at_infinity)]
        for cls in ("interior", "boundary", "exterior"):
            out.append(classify(curve, cls, ambient))
        alternating = {pid: ("interior", "boundary")[i % 2] for i, pid in enumerate(ids)}
        out.append(OpenSetSpec(ambient, "locally_polar", alternating))
    return out


def test_criterion_04_l2_delta_bounded_by_delta(corpus):
    checked, skipped, bad = 0, 0, []
    per_curve = {}
    for name, c in corpus.items():
        for spec in _specs_for(c):
            try:
                val = l2_delta(c, spec)
            except UnsupportedGenus:
                skipped += 1
                continue
            bound = spec.bind(c)
            closure = sum(p.delta for p in c.singular_points
                          if not (bound.affine and p.at_infinity)
                          and bound.class_of(p.point_id) in ("interior", "boundary"))
            interior = sum(p.delta for p in c.singular_points
                           if not (bound.affine and p.at_infinity)
                           and bound.class_of(p.point_id) == "interior")
            checked += 1
            per_curve[name] = per_curve.get(name, 0) + 1
            if not (0 <= val <= interior <= closure):
                bad.append((name, val, interior, closure))
    ok = not bad and len(corpus) >= 20 and len(per_curve) == len(corpus)
    record_criterion(4, ok, f"{checked} (curve, spec) pairs on {len(per_curve)}/{len(corpus)} curves, "
                     f"{skipped} skipped (positive genus with interior points), violations {bad}")
    assert ok


def test_criterion_05_degree36_cusp_curve():
    t0 = time.perf_counter()
    c = load_curve("cusps36")
    deg = affine_multiplicity_divisor(c).degree
    lower = h0_bounds(deg, c.genus)[0]
    spec = OpenSetSpec("affine", "locally_polar",
                       {p.point_id: "boundary" for p in c.points if not p.at_infinity})
    rep = decide(c, spec)
    trivial = triviality_test(c)
    dt = time.perf_counter() - t0
    ok = (c.degree, deg, c.genus, lower, rep.lower_bound, trivial) == (36, 303, 220, 84, 84, False)
    ok = ok and dt < 1.0
    record_criterion(5, ok, f"d={c.degree} deg D_m^A={deg} g={c.genus} lower={lower} "
                     f"(decide {rep.lower_bound}) trivial={trivial}, {dt:.3f}s")
    assert ok


def test_criterion_06_smooth_affine_curves_trivial():
    bad, n_specs = [], 0
    degrees = set()
    for name in SMOOTH_AFFINE:
        c = load_curve(name)
        degrees.add(c.degree)
        assert c.total_delta == 0 or all(p.at_infinity for p in c.singular_points)
        inf = {p.point_id: "boundary" for p in c.infinity_points}
        specs = [
            OpenSetSpec("affine", "locally_polar", {}),
            OpenSetSpec("affine", "locally_polar", inf),
        ]
        for spec in specs:
            n_specs += 1
            if decide(c, spec).exact_dim != 0:
                bad.append((name, "polar"))
        if decide(c, OpenSetSpec("affine", "nonpolar", {})).verdict != "Infinite":
            bad.append((name, "nonpolar"))
    ok = not bad and len(SMOOTH_AFFINE) >= 10 and degrees == {1, 2, 3, 4, 5}
    record_criterion(6, ok, f"{len(SMOOTH_AFFINE)} smooth affine curves of degrees {sorted(degrees)}, "
                     f"{n_specs} locally polar specs give 0, nonpolar Infinite; failures {bad}")
    assert ok


def test_criterion_07_degree_formula(corpus):
    plane = {k: c for k, c in corpus.items() if c.has_infinity}
    bad = []
    for name, c in plane.items():
        chk = degree_consistency(c)
        if chk.branchwise != chk.pointwise or not chk.consistent:
            bad.append((name, chk))
    ok = not bad and len(plane) >= 20
    record_criterion(7, ok, f"branchwise == pointwise on {len(plane)} plane curves "
                     f"(abstract glued curves carry no line at infinity); mismatches {bad}")
    assert ok


def test_criterion_08_membership():
    t0 = time.perf_counter()
    res = membership_checks(QuadratureConfig())
    dt = time.perf_counter() - t0
    mismatches = [r.name for r in res if r.detail["finite"] != r.detail["expected_finite"]]
    errs = [r.detail["rel_error"] for r in res if "rel_error" in r.detail]
    ok = len(res) == 81 and not mismatches and max(errs) < 1e-4 and dt < 10
    record_criterion(8, ok, f"{len(res)} cases, {len(mismatches)} mismatches, "
                     f"max rel error {max(errs):.2e}, {dt:.2f}s")
    assert ok


def test_criterion_09_isometry():
    res = isometry_checks(QuadratureConfig())
    worst = max(r.detail["residual"] for r in res)
    ok = len(res) == 20 and worst < 1e-6 and all(r.passed for r in res)
    record_criterion(9, ok, f"{len(res)} pairs, worst residual {worst:.2e}")
    assert ok


def test_criterion_10_volume_form_exponents(corpus):
    bad, n = [], 0
    for name, c in corpus.items():
        for b, side in _curve_branches(c):
            if b.symbolic or b.mult > 5:
                continue
            fit = pullback_form_exponent(b, side)
            n += 1
            if abs(fit.slope - fit.predicted) >= 0.05:
                bad.append((name, b.branch_id, fit.slope, fit.predicted))
    cusp = pullback_form_exponent(branch({2: 1}, {3: 1}), Side.AT_CENTER)
    const_ok = abs(cusp.leading_constant - 4) / 4 < 0.01 and abs(cusp.slope - 2) < 0.05
    ok = not bad and const_ok and n > 0
    record_criterion(10, ok, f"{n} corpus branches within 0.05 of 2(m-1) or -2(m_N+1); "
                     f"cusp slope {cusp.slope:.4f} constant {cusp.leading_constant:.5f}; bad {bad}")
    assert ok


def brute_force_dim(n: int, k: int) -> int:
    """Monomials t^l, l <= 2k - 1, with l a non-negative combination of 2 and 2n + 1."""
    return sum(
        1 for l in range(2 * k)
        if any((l - (2 * n + 1) * b) >= 0 and (l - (2 * n + 1) * b) % 2 == 0
               for b in range(l // (2 * n + 1) + 1))
    )


def test_criterion_11_oracle_equivalence():
    t0 = time.perf_counter()
    bad = []
    for n in range(0, 9):
        cusp = build_record("p0", [branch({2 * n + 1: 1}, {2: 1}, branch_id="p0.0",
                                          anchor=Anchor(0, 0))])
        for k in range(0, 9):
            D = Divisor({"p1.0": 2 * k - 1})
            got = h0_rational(D, [cusp], {"p1.0": Anchor(0, None)})
            want = brute_force_dim(n, k)
            if got != want or want != 2 * k - semigroup_gap_count(2 * k - 1, [2, 2 * n + 1]):
                bad.append((n, k, got, want))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5
    record_criterion(11, ok, f"81 monomial instances (n, k <= 8), mismatches {bad}, {dt:.2f}s")
    assert ok
