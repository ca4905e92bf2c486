from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergcurve.algebra import Poly, TruncSeries, series_compose
from bergcurve.errors import (
    InconsistentMultiplicity,
    IrrationalCoefficients,
    NotOnCurve,
    NotSquareFree,
)
from bergcurve.puiseux import (
    PuiseuxBranch,
    RationalMap,
    find_special_points,
    local_equation,
    map_branch,
    newton_puiseux,
    validate_branch,
)

from conftest import branch, poly, series

ORIGIN = (0, 0, 1)


def _pts(points):
    return sorted(tuple(Fraction(c) for c in p) for p in points)


def test_special_points_cuspidal_cubic():
    sp = find_special_points(poly("y^2*z - x^3"))
    assert _pts(sp.singular) == [(0, 0, 1)]
    assert _pts(sp.infinity) == [(0, 1, 0)]
    assert not sp.unresolved


def test_special_points_conic_unresolved_at_infinity():
    sp = find_special_points(poly("x^2 + y^2 - z^2"))
    assert sp.singular == []
    assert sp.infinity == []
    assert sp.unresolved_infinity


def test_special_points_triangle():
    sp = find_special_points(poly("x*y*z"))
    assert _pts(sp.singular) == _pts([(1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_not_square_free():
    with pytest.raises(NotSquareFree):
        find_special_points(poly("(y*z - x^2)^2*z"))


def test_cusp_single_branch():
    (b,) = newton_puiseux(poly("y^2*z - x^3"), ORIGIN, 8)
    assert b.mult == 2
    assert b.orders == (2, 3)
    assert b.leading_terms() == ((2, 1), (3, 1))


def test_node_two_smooth_branches():
    bs = newton_puiseux(poly("y^2*z - x^2*z - x^3"), ORIGIN, 8)
    assert len(bs) == 2
    assert [b.mult for b in bs] == [1, 1]
    slopes = sorted(b.components[1].coeffs[1] / b.components[0].coeffs[1] for b in bs)
    assert slopes == [-1, 1]


def test_a4_branch():
    (b,) = newton_puiseux(poly("x^2*z^3 - y^5"), ORIGIN, 12)
    assert b.mult == 2
    assert b.orders == (5, 2)


def test_irrational_coefficients():
    with pytest.raises(IrrationalCoefficients):
        newton_puiseux(poly("y^2*z - 2*x^2*z - x^3"), ORIGIN, 8)
    with pytest.raises(IrrationalCoefficients):
        newton_puiseux(poly("y^3*z - x^4 - x^3*z"), ORIGIN, 8)


def test_branches_satisfy_equation_through_order():
    F = poly("y^2*z^2 - x^4 - y^3*z")
    for b in newton_puiseux(F, ORIGIN, 20):
        f = local_equation(F, b.center, b.chart)
        val = series_compose(f, b.components) if b.exact else None
        if val is not None:
            assert val.is_zero()
        else:
            validate_branch(b, F)


def test_validate_branch_examples():
    b = branch({2: 1}, {3: 1}, center=ORIGIN)
    assert validate_branch(b, poly("y^2*z - x^3")).mult == 2
    with pytest.raises(NotOnCurve):
        validate_branch(b, poly("y^2*z^3 - x^5"))
    bad = PuiseuxBranch(None, None, (series({3: 1}), series({2: 1})), 3)
    with pytest.raises(InconsistentMultiplicity):
        validate_branch(bad)


def _lowest_order(F: Poly, p) -> int:
    return min(sum(e) for e in local_equation(F, p, 2).terms)


CURVES_AT_ORIGIN = [
    "y^2*z - x^3",
    "y^2*z - x^2*z - x^3",
    "x^2*z^3 - y^5",
    "x^3*z - y^4",
    "y^2*z^2 - x^4 - y^3*z",
    "x*y*(x - y)*(x + 2*y)",
    "(y*z - x^2)^2 - x^3*y",
]


@pytest.mark.parametrize("eq", CURVES_AT_ORIGIN)
def test_multiplicity_additivity(eq):
    F = poly(eq)
    bs = newton_puiseux(F, ORIGIN, 16)
    assert sum(b.mult for b in bs) == _lowest_order(F, ORIGIN)


@pytest.mark.parametrize("eq", CURVES_AT_ORIGIN)
def test_generic_line_meets_with_multiplicity(eq):
    F = poly(eq)
    bs = newton_puiseux(F, ORIGIN, 16)
    line = Poly.parse("3*u - 7*v", ("u", "v"))  # not tangent to any of these curves
    total = sum(series_compose(line, b.components).exact_order for b in bs)
    assert total == _lowest_order(F, ORIGIN)


def _normal(b):
    return tuple(c.truncate(8).coeffs for c in b.components)


@pytest.mark.parametrize("eq", CURVES_AT_ORIGIN)
def test_expansion_stable_under_doubling(eq):
    F = poly(eq)
    a = sorted(_normal(b) for b in newton_puiseux(F, ORIGIN, 8))
    b = sorted(_normal(b) for b in newton_puiseux(F, ORIGIN, 16))
    assert a == b


def test_map_branch_at_node():
    phi = RationalMap.from_polys([Poly.parse(s, ("t",)) for s in ("t^2 - 1", "t^3 - t", "1")])
    b = map_branch(phi, Fraction(1), 8, "p0.0")
    assert b.center == (0, 0, 1)
    assert b.mult == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.integers(2, 9))
def test_monomial_curve_branch(p, q):
    from math import gcd

    if gcd(p, q) != 1 or p == q:
        return
    F = poly(f"x^{p}*z^{max(p, q) - p} - y^{q}*z^{max(p, q) - q}")
    (b,) = newton_puiseux(F, ORIGIN, 2 * max(p, q))
    assert b.mult == min(p, q)
    assert sorted(b.orders) == sorted((p, q)) and b.orders == (q, p)
