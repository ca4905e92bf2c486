from math import gcd, inf

import pytest

from bergcurve.algebra import Poly
from bergcurve.curves import curve_from_map
from bergcurve.errors import BoundTooSmall, NegativeGenus
from bergcurve.invariants import (
    build_record,
    delta_point,
    genus_of_normalization,
    intersection_multiplicity,
    value_semigroup,
)
from bergcurve.puiseux import newton_puiseux

from conftest import branch, poly

ORIGIN = (0, 0, 1)
UV = ("u", "v")


def semigroup_gaps(gens, limit=400):
    """Brute-force complement of the numerical semigroup generated by ``gens``."""
    reach = [False] * limit
    reach[0] = True
    for n in range(1, limit):
        reach[n] = any(g <= n and reach[n - g] for g in gens)
    return [n for n in range(limit) if not reach[n]]


def test_intersection_examples():
    cusp = branch({2: 1}, {3: 1}, center=ORIGIN)
    assert intersection_multiplicity(cusp, Poly.parse("v", UV), local=True) == 3
    a4 = branch({5: 1}, {2: 1}, center=ORIGIN)
    assert intersection_multiplicity(a4, Poly.parse("u", UV), local=True) == 5
    assert intersection_multiplicity(cusp, Poly.parse("v^2 - u^3", UV), local=True) == inf


def test_intersection_with_homogeneous_form():
    (b,) = newton_puiseux(poly("y^2*z - x^3"), ORIGIN, 8)
    assert intersection_multiplicity(b, poly("y")) == 3
    assert intersection_multiplicity(b, poly("x - y")) == 2
    assert intersection_multiplicity(b, poly("y^2*z - x^3")) == inf


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_semigroup_of_a2n(n):
    sg = value_semigroup(branch({2 * n + 1: 1}, {2: 1}), 40)
    assert sg.generators == (2, 2 * n + 1)
    assert sg.gaps == tuple(range(1, 2 * n, 2))
    assert sg.conductor == 2 * n
    assert len(sg.gaps) == n


def test_semigroup_small_cases():
    smooth = value_semigroup(branch({1: 1}, {}), 8)
    assert smooth.gaps == () and smooth.conductor == 0
    cusp = value_semigroup(branch({2: 1}, {3: 1}), 8)
    assert cusp.gaps == (1,) and cusp.conductor == 2 and cusp.generators == (2, 3)


def test_semigroup_bound_too_small():
    with pytest.raises(BoundTooSmall):
        value_semigroup(branch({4: 1}, {7: 1}), 12)


def test_semigroup_non_monomial_branch():
    # (t^4, t^6 + t^7): semigroup <4, 6, 13>
    sg = value_semigroup(branch({4: 1}, {6: 1, 7: 1}), 60)
    assert sg.generators == (4, 6, 13)
    assert list(sg.gaps) == semigroup_gaps([4, 6, 13])
    assert delta_point([branch({4: 1}, {6: 1, 7: 1})]) == len(sg.gaps)


PAIRS = [(p, q) for q in range(2, 10) for p in range(2, q) if gcd(p, q) == 1]


@pytest.mark.parametrize("p,q", PAIRS)
def test_delta_of_monomial_curve(p, q):
    b = branch({q: 1}, {p: 1})
    expected = (p - 1) * (q - 1) // 2
    assert delta_point([b]) == expected
    sg = value_semigroup(b, 4 * p * q)
    assert len(sg.gaps) == expected
    assert list(sg.gaps) == semigroup_gaps([p, q])
    assert sg.conductor == 2 * expected


def test_delta_examples():
    assert delta_point([branch({2: 1}, {3: 1})]) == 1
    node = [branch({1: 1}, {1: 1}), branch({1: 1}, {1: -1})]
    assert delta_point(node) == 1
    tacnode = [branch({1: 1}, {2: 1}), branch({1: 1}, {2: -1})]
    assert delta_point(tacnode) == 2
    lines = [branch({1: 1}, {1: c}) for c in (0, 1, 2, 3)]
    assert delta_point(lines) == 6  # ordinary m-fold point: m(m-1)/2
    assert delta_point([branch({1: 1}, {})]) == 0


def test_delta_node_via_parametrization():
    # the nodal cubic t -> (t^2 - 1, t^3 - t) has one node of delta 1
    t = ("t",)
    c = curve_from_map([Poly.parse(s, t) for s in ("t^2 - 1", "t^3 - t", "1")])
    (node,) = c.singular_points
    assert node.r == 2 and node.delta == 1


def test_delta_from_implicit_branches():
    cases = {
        "y^2*z - x^3": 1,
        "y^2*z - x^2*z - x^3": 1,
        "x^2*z^11 - y^13": 6,
        "x^3*z^4 - y^7": 6,
        "(y*z - x^2)^2 - x^3*y": 2,
        "x*y*(x - y)*(x + y)": 6,
    }
    for eq, d in cases.items():
        assert delta_point(newton_puiseux(poly(eq), ORIGIN, 16)) == d, eq


def test_delta_zero_iff_smooth():
    assert delta_point([branch({1: 1}, {5: 2})]) == 0
    for bs in ([branch({2: 1}, {5: 1})], [branch({1: 1}, {}), branch({}, {1: 1})]):
        assert delta_point(bs) > 0


def test_delta_stable_with_longer_branches():
    F = poly("(y*z - x^2)^2 - x^3*y")
    short = delta_point(newton_puiseux(F, ORIGIN, 12))
    longer = delta_point(newton_puiseux(F, ORIGIN, 48))
    assert short == longer == 2


def test_genus_examples():
    assert genus_of_normalization(36, [1] * 375) == 220
    assert genus_of_normalization(3, [1]) == 0
    assert genus_of_normalization(1, []) == 0
    with pytest.raises(NegativeGenus):
        genus_of_normalization(3, [1, 1])


def test_record_invariants():
    rec = build_record("p", [branch({1: 1}, {1: 1}), branch({1: 1}, {1: -1})])
    assert (rec.m, rec.r, rec.delta) == (2, 2, 1)
    rec = build_record("q", [branch({3: 1}, {4: 1})])
    assert (rec.m, rec.r, rec.delta) == (3, 1, 3)
