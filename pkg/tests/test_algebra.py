from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from bergcurve.algebra import (
    Poly,
    TruncSeries,
    as_rat,
    bareiss_det,
    rational_kth_root,
    rational_roots,
    resultant,
    series_compose,
    ugcd,
)
from bergcurve.errors import ParseError, TruncationInsufficient

XY = ("x", "y")


def P(text, variables=XY):
    return Poly.parse(text, variables)


def to_sympy(p: Poly):
    syms = sp.symbols(p.variables)
    return sum(
        sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s**k for s, k in zip(syms, e)])
        for e, c in p.terms.items()
    )


def sylvester_oracle(f, g, var):
    """Determinant of the Sylvester matrix built with sympy."""
    y = sp.Symbol(var)
    A = sp.Poly(to_sympy(f), y).all_coeffs()
    B = sp.Poly(to_sympy(g), y).all_coeffs()
    m, n = len(A) - 1, len(B) - 1
    M = sp.zeros(m + n, m + n)
    for i in range(n):
        for k, c in enumerate(A):
            M[i, i + k] = c
    for i in range(m):
        for k, c in enumerate(B):
            M[n + i, i + k] = c
    return sp.expand(M.det())


def test_rationals_in_lowest_terms():
    q = as_rat("6/-4")
    assert (q.numerator, q.denominator) == (-3, 2)
    assert as_rat(7) == 7
    with pytest.raises(ParseError):
        as_rat(0.5)


def test_parse_and_arithmetic():
    f = P("y^2 - x^3")
    assert f.terms == {(0, 2): 1, (3, 0): -1}
    assert (f * 0).is_zero()
    assert P("(x + y)^2") == P("x^2 + 2*x*y + y^2")
    assert P("x/2 + 1/3").coeff((1, 0)) == Fraction(1, 2)
    assert f.diff("x") == P("-3*x^2")
    assert f.evaluate({"x": 1, "y": 1}) == 0


def test_compose_coordinate_projection():
    s = (TruncSeries.monomial(2, 10), TruncSeries.monomial(3, 10))
    out = series_compose(P("y"), s)
    assert out.exact_order == 3
    assert out.coefficients == {3: 1}


def test_compose_difference():
    s = (TruncSeries.monomial(2, 10), TruncSeries.monomial(3, 10))
    out = series_compose(P("x - y"), s)
    assert out.coefficients == {2: 1, 3: -1}
    assert out.exact_order == 2


def test_compose_on_curve_is_zero_or_flagged():
    # exact inputs: provably zero
    s = (TruncSeries.from_dict({2: 1}, 10, exact=True), TruncSeries.from_dict({3: 1}, 10, exact=True))
    assert series_compose(P("x^3 - y^2"), s).is_zero()
    # truncated inputs: zero through N is not a proof
    s = (TruncSeries.from_dict({2: 1}, 10), TruncSeries.from_dict({3: 1}, 10))
    with pytest.raises(TruncationInsufficient):
        series_compose(P("x^3 - y^2"), s)


def test_resultant_examples():
    f = P("y^2 - x^3")
    assert resultant(f, f.diff("y"), "y") == Poly.parse("-4*x^3", ("x",))
    assert resultant(P("y"), P("y"), "y").is_zero()
    assert resultant(P("y - 1"), P("y + 1"), "y") == Poly.const(2, ("x",))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_resultant_matches_sylvester_oracle(data):
    def rand_poly():
        terms = data.draw(st.dictionaries(
            st.tuples(st.integers(0, 3), st.integers(0, 3)),
            st.fractions(min_value=-3, max_value=3, max_denominator=3),
            min_size=1, max_size=6,
        ))
        return Poly(XY, terms)

    f, g = rand_poly(), rand_poly()
    if f.is_zero() or g.is_zero() or f.degree_in("y") == 0 or g.degree_in("y") == 0:
        return
    mine = to_sympy(resultant(f, g, "y"))
    assert sp.expand(mine - sylvester_oracle(f, g, "y")) == 0


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.integers(-4, 4), min_size=1, max_size=3),
    st.lists(st.integers(-4, 4), min_size=1, max_size=3),
)
def test_resultant_vanishes_iff_common_root(roots_f, roots_g):
    y = Poly.var("y", XY)
    x = Poly.var("x", XY)
    f = Poly.const(1, XY)
    for a in roots_f:
        f = f * (y - a * x - a)
    g = Poly.const(1, XY)
    for b in roots_g:
        g = g * (y - b * x - b)
    common = bool(set(roots_f) & set(roots_g))
    assert resultant(f, g, "y").is_zero() == common


def _random_series(data, N):
    coeffs = data.draw(st.dictionaries(st.integers(1, N), st.integers(-3, 3), min_size=1, max_size=4))
    if not any(coeffs.values()):
        coeffs = {1: 1}
    return TruncSeries.from_dict(coeffs, N, exact=True)


_poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-3, 3), min_size=1, max_size=4,
)


@settings(max_examples=60, deadline=None)
@given(st.data(), _poly_terms, _poly_terms)
def test_valuation_is_additive(data, tf, tg):
    s = (_random_series(data, 8), _random_series(data, 8))
    f, g = Poly(XY, tf), Poly(XY, tg)
    if f.is_zero() or g.is_zero():
        return
    a, b = series_compose(f, s), series_compose(g, s)
    prod = series_compose(f * g, s)
    if a.exact_order is None or b.exact_order is None:
        assert prod.exact_order is None
    else:
        assert prod.exact_order == a.exact_order + b.exact_order


@settings(max_examples=60, deadline=None)
@given(st.data(), _poly_terms, _poly_terms)
def test_valuation_of_sum(data, tf, tg):
    s = (_random_series(data, 8), _random_series(data, 8))
    f, g = Poly(XY, tf), Poly(XY, tg)
    a, b, c = (series_compose(h, s).exact_order for h in (f, g, f + g))
    if a is None or b is None:
        return
    if c is not None:
        assert c >= min(a, b)
    if a != b:
        assert c == min(a, b)


def test_series_inverse_and_truncation():
    s = TruncSeries.from_dict({0: 1, 1: 1}, 6)
    inv = s.inverse()
    assert inv.coefficients == {k: (-1) ** k for k in range(7)}
    assert (s * inv).truncate(6).coefficients == {0: 1}


def test_bareiss_matches_sympy():
    M = [[Fraction(2), Fraction(-1), Fraction(0)], [Fraction(1, 2), 3, 4], [0, Fraction(5, 3), 1]]
    assert bareiss_det(M) == Fraction(sp.Matrix(M).det())


def test_univariate_helpers():
    roots, split = rational_roots([Fraction(-2), Fraction(1), Fraction(1)])  # (t+2)(t-1)
    assert sorted(roots) == [(Fraction(-2), 1), (Fraction(1), 1)] and split
    roots, split = rational_roots([Fraction(-2), 0, 1])
    assert roots == [] and not split
    assert rational_kth_root(Fraction(8, 27), 3) == Fraction(2, 3)
    assert rational_kth_root(Fraction(2), 2) is None
    assert ugcd([Fraction(-1), 0, 1], [Fraction(1), 1]) == [1, 1]
