"""Local branches of plane curve germs.

Branches come from three places: the Newton polygon recursion applied to an
implicit equation, local expansions of a global rational parametrization, or
parametrizations typed in by the user.  In every case a branch stores the
*centered* local coordinates of the chart it lives in: for the chart where the
homogeneous coordinate ``k`` is set to 1, the local coordinates are the other
homogeneous coordinates (in order) divided by coordinate ``k``, minus the
center.  For a point on the line at infinity ``z = 0`` the last local
coordinate is therefore the local equation of that line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Poly,
    TruncSeries,
    as_rat,
    rational_kth_root,
    rational_roots,
    resultant,
    series_compose,
    uderiv,
    ugcd,
    ueval,
)
from .errors import (
    InconsistentInput,
    InconsistentMultiplicity,
    IrrationalCoefficients,
    NotOnCurve,
    NotSquareFree,
    TruncationInsufficient,
)

LOCAL_VARS = ("u", "v")
MAX_ORDER = 512


@dataclass(frozen=True)
class Anchor:
    """Position of a branch point on a rational component of the normalization.

    ``tau is None`` stands for the point at infinity of P^1.  The branch
    parameter must be ``tau - anchor.tau`` (or ``1/tau`` at infinity).
    """

    component: int
    tau: Fraction | None


@dataclass(frozen=True)
class PuiseuxBranch:
    center: tuple[Fraction, ...] | None
    chart: int | None
    components: tuple[TruncSeries, ...]
    mult: int
    branch_id: str = ""
    anchor: Anchor | None = None
    symbolic: bool = False
    source: object = field(default=None, compare=False, hash=False, repr=False)

    @property
    def N(self) -> int:
        return min(c.N for c in self.components)

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.components)

    @property
    def orders(self) -> tuple[int | None, ...]:
        return tuple(c.exact_order for c in self.components)

    @property
    def point_id(self) -> str:
        return self.branch_id.rsplit(".", 1)[0]

    def leading_terms(self) -> tuple[tuple[int | None, Fraction], ...]:
        return tuple((c.exact_order, c.leading_coefficient()) for c in self.components)

    def at_order(self, N: int) -> "PuiseuxBranch":
        """Same branch with components known through ``t**N``."""
        if N <= self.N:
            return self if N == self.N else replace(
                self, components=tuple(c.truncate(N) for c in self.components)
            )
        if self.exact:
            return replace(self, components=tuple(c.truncate(N) for c in self.components))
        if self.source is None or N > MAX_ORDER:
            raise TruncationInsufficient(
                f"branch {self.branch_id} known to order {self.N}, {N} needed"
            )
        return replace(self, components=self.source.expand(self, N))


def computed_mult(components: Sequence[TruncSeries]) -> int:
    orders = [c.exact_order for c in components if c.exact_order is not None]
    if not orders:
        raise NotOnCurve("branch parametrization is constant")
    if min(orders) == 0:
        raise NotOnCurve("branch does not pass through its center")
    return min(orders)


def normalize_point(p: Sequence) -> tuple[tuple[Fraction, ...], int]:
    """Scale homogeneous coordinates so the chart coordinate equals 1.

    The chart is the last coordinate when nonzero (affine points), otherwise the
    first nonzero one.
    """
    p = [as_rat(c) for c in p]
    if not any(p):
        raise ValueError("the zero vector is not a projective point")
    k = len(p) - 1 if p[-1] else next(i for i, c in enumerate(p) if c)
    return tuple(c / p[k] for c in p), k


def local_equation(F: Poly, center: Sequence[Fraction], chart: int) -> Poly:
    """Dehomogenize ``F`` in ``chart`` and move ``center`` to the origin."""
    others = [i for i in range(F.nvars) if i != chart]
    if len(others) != len(LOCAL_VARS):
        raise ValueError("implicit mode is planar (three homogeneous variables)")
    mapping = {F.variables[chart]: 1}
    for name, i in zip(LOCAL_VARS, others):
        mapping[F.variables[i]] = Poly.var(name, LOCAL_VARS) + center[i]
    return F.substitute(mapping, LOCAL_VARS)


# ---------------------------------------------------------------------------
# special points of an implicit curve


@dataclass
class SpecialPoints:
    singular: list[tuple[Fraction, ...]]
    infinity: list[tuple[Fraction, ...]]
    unresolved_singular: list[str] = field(default_factory=list)
    unresolved_infinity: list[str] = field(default_factory=list)
    # the line at infinity is a component: ``infinity`` then holds only its singular points
    line_at_infinity: bool = False

    @property
    def unresolved(self) -> list[str]:
        return self.unresolved_singular + self.unresolved_infinity

    @property
    def points(self) -> list[tuple[Fraction, ...]]:
        return sorted(set(self.singular) | set(self.infinity))


_LINE_SAMPLES = (
    ((1, 2, 3), (2, -1, 5)),
    ((3, -2, 1), (1, 4, -3)),
    ((5, 1, -2), (-1, 3, 7)),
    ((2, 7, 1), (6, -5, 2)),
)


def check_square_free(F: Poly) -> None:
    """Raise :class:`NotSquareFree` if ``F`` has a repeated factor.

    ``F`` is restricted to a few fixed lines; a repeated factor survives every
    restriction while a square-free curve meets a general line transversally.
    """
    if F.is_zero():
        raise NotSquareFree("zero polynomial")
    d = F.total_degree()
    if d <= 1:
        return
    s = Poly.var("s", ("s",))
    for P, Q in _LINE_SAMPLES:
        images = {v: s * P[i] + Q[i] for i, v in enumerate(F.variables)}
        b = F.substitute(images, ("s",))
        if b.total_degree() < d - 1:
            continue
        cs = b.ucoeffs()
        if len(ugcd(cs, uderiv(cs))) == 1:
            return
    raise NotSquareFree(f"{F} has a repeated factor")


def _binary_form_roots(forms: Sequence[Poly], xv: str, yv: str):
    """Common roots ``[x:y]`` of binary forms, as rational points plus an
    'all rational' flag."""
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        raise InconsistentInput("the line at infinity is a component of the curve")
    g = None
    top = 0
    for f in forms:
        cs = f.substitute({yv: 1}, (xv,)).ucoeffs() if f.total_degree() > 0 else [f.constant_term()]
        g = cs if g is None else ugcd(g, cs)
        top = max(top, f.total_degree())
    pts = []
    # [1:0] is a common root iff every form is divisible by y
    at_inf = all(all(e[forms[0].variables.index(yv)] > 0 for e in f.terms) for f in forms)
    if at_inf:
        pts.append((Fraction(1), Fraction(0)))
    split = True
    if g and len(g) > 1:
        roots, split = rational_roots(g)
        pts.extend((r, Fraction(1)) for r, _ in roots)
    return pts, split


def find_special_points(F: Poly) -> SpecialPoints:
    """Rational singular points of ``F`` and rational points of ``F = z = 0``.

    The last variable of ``F`` is the hyperplane at infinity.  Points that could
    not be resolved over Q are described in ``unresolved``.
    """
    if F.nvars != 3 or not F.is_homogeneous():
        raise ValueError("F must be a homogeneous polynomial in three variables")
    check_square_free(F)
    xv, yv, zv = F.variables
    unres_sing: list[str] = []
    unres_inf: list[str] = []
    grads = [F.diff(v) for v in F.variables]

    # points on z = 0
    B = F.substitute({zv: 0}, (xv, yv))
    infinity: list[tuple[Fraction, ...]] = []
    singular: list[tuple[Fraction, ...]] = []
    line_component = B.is_zero()
    if line_component:
        # F = z G: singular points on the line are the zeros of dF/dz there
        forms = [g.substitute({zv: 0}, (xv, yv)) for g in grads]
        pts, split = _binary_form_roots(forms, xv, yv)
    else:
        pts, split = _binary_form_roots([B], xv, yv)
    if not split:
        if line_component:
            unres_inf.append("singular points on the line at infinity with irrational coordinates")
        else:
            unres_inf.append(f"points at infinity with irrational coordinates (roots of {B})")
    for a, b in pts:
        p = normalize_point((a, b, 0))[0]
        infinity.append(p)
        vals = {xv: p[0], yv: p[1], zv: p[2]}
        if all(g.evaluate(vals) == 0 for g in grads):
            singular.append(p)

    # affine chart z = 1
    f = F.substitute({zv: 1}, (xv, yv))
    fx, fy = f.diff(xv), f.diff(yv)
    d = F.total_degree()
    if d >= 2:
        R = None
        for c in range(0, d + 3):
            res = resultant(f, fx + fy * c, yv)
            if res.is_zero():
                continue
            cs = res.ucoeffs() if res.total_degree() > 0 else [res.constant_term()]
            R = cs if R is None else ugcd(R, cs)
            if R is not None and len(R) == 1:
                break
        if R is None:
            raise NotSquareFree(f"{F} has a repeated factor")
        if len(R) > 1:
            roots, split = rational_roots(R)
            if not split:
                unres_sing.append("affine singular points with irrational coordinates")
            for x0, _ in roots:
                polys = [q.substitute({xv: x0}, (yv,)) for q in (f, fx, fy)]
                polys = [q for q in polys if not q.is_zero()]
                if not polys:
                    raise NotSquareFree(f"{F} has a repeated factor")
                g = None
                for q in polys:
                    cs = q.ucoeffs() if q.total_degree() > 0 else [q.constant_term()]
                    g = cs if g is None else ugcd(g, cs)
                if len(g) > 1:
                    yroots, ysplit = rational_roots(g)
                    if not ysplit:
                        unres_sing.append(f"singular points with x = {x0} and irrational y")
                    for y0, _ in yroots:
                        singular.append((x0, y0, Fraction(1)))
    return SpecialPoints(
        sorted(set(singular)), sorted(set(infinity)), unres_sing, unres_inf, line_component
    )


# ---------------------------------------------------------------------------
# Newton polygon recursion


def _newton_edges(f: Poly):
    """Edges of the Newton polygon between the two coordinate axes.

    Yields ``(m, q, c, points)``: along the edge ``q*i + m*j == c``, so that
    ``v ~ u**(m/q)`` on the corresponding branches.
    """
    support = list(f.terms)
    j0 = min(j for i, j in support if i == 0)
    i0 = min(i for i, j in support if j == 0)
    A = (0, j0)
    while A[1] > 0:
        best = None
        for P in support:
            if P[0] <= A[0] or P[1] >= A[1]:
                continue
            slope = Fraction(P[1] - A[1], P[0] - A[0])
            if best is None or slope < best[0] or (slope == best[0] and P[0] > best[1][0]):
                best = (slope, P)
        B = best[1]
        di, dj = B[0] - A[0], A[1] - B[1]
        g = math.gcd(di, dj)
        m, q = di // g, dj // g
        c = q * A[0] + m * A[1]
        pts = {P: f.terms[P] for P in support if q * P[0] + m * P[1] == c}
        yield m, q, c, pts, B[1]
        A = B
    assert A == (i0, 0)


def _implicit_solve(f: Poly, N: int) -> TruncSeries:
    """Series ``v(u)`` with ``v(0) = 0`` and ``f(u, v(u)) = 0`` when ``f_v(0,0) != 0``."""
    u, v = f.variables
    fv = f.diff(v)
    T = TruncSeries([0, 1], N, exact=False)
    Y = TruncSeries([0], N)
    for _ in range(N.bit_length() + 2):
        try:
            val = series_compose(f, (T, Y))
        except TruncationInsufficient:
            break
        der = series_compose(fv, (T, Y))
        Y = Y - val / der
    return Y


def _np_local(f: Poly, N: int) -> list[tuple[TruncSeries, TruncSeries]]:
    u, v = f.variables
    if f.constant_term():
        return []
    out = []
    if all(e[0] > 0 for e in f.terms):
        out.append((TruncSeries.monomial(0, N, 0), TruncSeries.monomial(1, N)))
        f = f.exact_div(Poly.var(u, f.variables))
    if all(e[1] > 0 for e in f.terms):
        out.append((TruncSeries.monomial(1, N), TruncSeries.monomial(0, N, 0)))
        f = f.exact_div(Poly.var(v, f.variables))
    if f.constant_term() or f.is_constant():
        return out
    U, V = Poly.var(u, f.variables), Poly.var(v, f.variables)
    for m, q, c, pts, jb in _newton_edges(f):
        psi = [Fraction(0)] * (max((j - jb) // q for _, j in pts) + 1)
        for (i, j), a in pts.items():
            psi[(j - jb) // q] += a
        roots, split = rational_roots(psi)
        if not split:
            raise IrrationalCoefficients(
                "branch coefficients are not rational; use parametrized mode"
            )
        if m == 1:
            alpha, beta = 0, -1
        else:
            alpha = pow(q, -1, m)
            beta = (alpha * q - 1) // m
        for root, mult in roots:
            lam, mu = root**beta, root**alpha
            f1 = f.substitute({u: U**q * lam, v: U**m * (V + mu)}).exact_div(U**c)
            if mult == 1:
                subs = [(TruncSeries.monomial(1, N), _implicit_solve(f1, N))]
            else:
                subs = _np_local(f1, N)
            for X1, Y1 in subs:
                X1 = TruncSeries(X1.coeffs, N)
                Y1 = TruncSeries(Y1.coeffs, N)
                out.append(((X1**q) * lam, (X1**m) * (Y1 + mu)))
    return out


def _leading_key(comps: Sequence[TruncSeries]):
    orders = tuple(c.exact_order if c.exact_order is not None else 10**9 for c in comps)
    lead = tuple(c.leading_coefficient() for c in comps)
    head = tuple(tuple(c.coeffs[:16]) for c in comps)
    return orders, lead, head


def _normalize_parameter(comps: Sequence[TruncSeries]) -> tuple[TruncSeries, ...]:
    for c in comps:
        k = c.exact_order
        if k is None:
            continue
        s = rational_kth_root(1 / c.coeffs[k], k)
        if s is None:
            return tuple(comps)
        return tuple(x.scale_parameter(s) for x in comps)
    return tuple(comps)


def _mark_exact(f_loc: Poly, comps: tuple[TruncSeries, ...]) -> tuple[TruncSeries, ...]:
    """Flag polynomial parametrizations that satisfy the equation identically."""
    polys = tuple(TruncSeries(c.coeffs, c.N, exact=True) for c in comps)
    if series_compose(f_loc, polys).is_zero():
        return polys
    return comps


@dataclass(frozen=True)
class _ImplicitSource:
    F: Poly

    def expand(self, branch: PuiseuxBranch, N: int):
        fresh = newton_puiseux(self.F, branch.center, N, branch.point_id)
        for b in fresh:
            if b.branch_id == branch.branch_id:
                return b.components
        raise TruncationInsufficient(f"branch {branch.branch_id} lost on re-expansion")


def newton_puiseux(F: Poly, p: Sequence, N: int, point_id: str = "p") -> list[PuiseuxBranch]:
    """Branches of the projective curve ``F = 0`` at ``p``, known through ``t**N``."""
    center, chart = normalize_point(p)
    if F.evaluate(dict(zip(F.variables, center))) != 0:
        raise NotOnCurve(f"{center} is not on the curve")
    f_loc = local_equation(F, center, chart)
    while True:
        pairs = _np_local(f_loc, N)
        if all(not (xs.is_zero() and ys.is_zero()) or (xs.exact and ys.exact) for xs, ys in pairs):
            break
        if N >= MAX_ORDER:
            raise TruncationInsufficient(f"branch at {center} not visible below order {MAX_ORDER}")
        N = min(2 * N, MAX_ORDER)
    comps_list = []
    for xs, ys in pairs:
        comps = _normalize_parameter((xs.truncate(N), ys.truncate(N)))
        comps_list.append(_mark_exact(f_loc, comps))
    comps_list.sort(key=_leading_key)
    src = _ImplicitSource(F)
    return [
        PuiseuxBranch(center, chart, comps, computed_mult(comps), f"{point_id}.{i}", source=src)
        for i, comps in enumerate(comps_list)
    ]


def validate_branch(b: PuiseuxBranch, F: Poly | None = None) -> PuiseuxBranch:
    """Recompute the multiplicity and, when ``F`` is given, check the branch lies on it."""
    true_mult = computed_mult(b.components)
    if b.mult != true_mult:
        raise InconsistentMultiplicity(
            f"branch {b.branch_id or '?'} declares multiplicity {b.mult}, actual {true_mult}"
        )
    if F is not None:
        if b.center is None:
            raise NotOnCurve("cannot check a branch with a symbolic center")
        f_loc = local_equation(F, b.center, b.chart) if F.nvars == 3 else F
        try:
            val = series_compose(f_loc, b.components)
        except TruncationInsufficient:
            return b
        if not val.is_zero():
            raise NotOnCurve(
                f"branch {b.branch_id or '?'} leaves the curve at order {val.exact_order}"
            )
    return b


def make_branch(
    components: Sequence[TruncSeries],
    center=None,
    chart: int | None = None,
    branch_id: str = "",
    mult: int | None = None,
    anchor: Anchor | None = None,
    symbolic: bool = False,
    source=None,
) -> PuiseuxBranch:
    """Build a branch; ``mult`` defaults to the computed multiplicity."""
    comps = tuple(components)
    if center is not None:
        center, k = normalize_point(center)
        chart = k if chart is None else chart
    b = PuiseuxBranch(
        center,
        chart,
        comps,
        computed_mult(comps) if mult is None else mult,
        branch_id,
        anchor,
        symbolic,
        source,
    )
    return validate_branch(b)


def check_primitive(b: PuiseuxBranch) -> None:
    """Reject parametrizations that factor through ``t -> t**k``."""
    g = 0
    for c in b.components:
        for k in c.coefficients:
            g = math.gcd(g, k)
    if g > 1:
        raise InconsistentMultiplicity(
            f"branch {b.branch_id or '?'} is not primitive (all exponents divisible by {g})"
        )


# ---------------------------------------------------------------------------
# branches of a global rational parametrization


@dataclass(frozen=True)
class RationalMap:
    """``tau -> [p_0(tau) : ... : p_n(tau)]`` with coprime polynomials of max degree ``d``."""

    polys: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_polys(cls, polys: Sequence[Poly | Sequence]) -> "RationalMap":
        rows = []
        for p in polys:
            cs = p.ucoeffs() if isinstance(p, Poly) and not p.is_zero() else (
                [Fraction(0)] if isinstance(p, Poly) else [as_rat(c) for c in p]
            )
            while len(cs) > 1 and cs[-1] == 0:
                cs = cs[:-1]
            rows.append(tuple(cs))
        m = cls(tuple(rows))
        g = None
        for r in m.polys:
            if any(r):
                g = list(r) if g is None else ugcd(g, list(r))
        if g is None or len(g) > 1:
            raise InconsistentInput("parametrization has a base point (common factor)")
        return m

    @property
    def degree(self) -> int:
        return max(len(r) - 1 for r in self.polys)

    def reversed_polys(self) -> tuple[tuple[Fraction, ...], ...]:
        d = self.degree
        return tuple(tuple(list(r) + [Fraction(0)] * (d + 1 - len(r)))[::-1] for r in self.polys)

    def value(self, tau: Fraction | None) -> tuple[Fraction, ...]:
        if tau is None:
            return tuple(r[0] for r in self.reversed_polys())
        return tuple(ueval(r, tau) for r in self.polys)

    def local_series(self, tau: Fraction | None, N: int) -> list[TruncSeries]:
        """Each coordinate polynomial as a series in the local parameter at ``tau``."""
        rows = self.reversed_polys() if tau is None else self.polys
        shift = Fraction(0) if tau is None else tau
        out = []
        for r in rows:
            p = Poly.univariate(r, "t")
            if shift:
                p = p.translate({"t": shift})
            out.append(TruncSeries.from_poly(p, N).truncate(N) if not p.is_zero()
                       else TruncSeries([0], N, exact=True))
        return out


@dataclass(frozen=True)
class _MapSource:
    phi: RationalMap

    def expand(self, branch: PuiseuxBranch, N: int):
        return map_branch_components(self.phi, branch.anchor.tau, branch.center, branch.chart, N)


def map_branch_components(phi: RationalMap, tau, center, chart: int, N: int):
    series = phi.local_series(tau, N)
    den = series[chart]
    if den.coeffs[0] == 0:
        raise ValueError("chart coordinate vanishes at the branch point")
    inv = den.inverse()
    comps = []
    for i, s in enumerate(series):
        if i == chart:
            continue
        q = s * inv if not s.is_zero() else TruncSeries([0], N)
        q = TruncSeries(q.coeffs, N) if q.N != N else q
        comps.append(q - center[i])
    return tuple(TruncSeries(c.coeffs, N) for c in comps)


def map_branch(phi: RationalMap, tau, N: int, branch_id: str = "", component: int = 0) -> PuiseuxBranch:
    center, chart = normalize_point(phi.value(tau))
    comps = map_branch_components(phi, tau, center, chart, N)
    return PuiseuxBranch(
        center, chart, comps, computed_mult(comps), branch_id,
        Anchor(component, tau), False, _MapSource(phi),
    )


def map_preimages(phi: RationalMap, point: Sequence[Fraction]) -> tuple[list, bool]:
    """Parameters (``None`` = infinity) mapping to ``point``; flag is False when
    some preimages are irrational."""
    P = [as_rat(c) for c in point]
    n = len(P)
    g = None
    for i in range(n):
        for j in range(i + 1, n):
            a = [Fraction(0)] * (phi.degree + 1)
            for k, c in enumerate(phi.polys[j]):
                a[k] += P[i] * c
            for k, c in enumerate(phi.polys[i]):
                a[k] -= P[j] * c
            while len(a) > 1 and a[-1] == 0:
                a.pop()
            if any(a):
                g = a if g is None else ugcd(g, a)
    taus: list = []
    split = True
    if g is not None and len(g) > 1:
        roots, split = rational_roots(g)
        taus.extend(r for r, _ in roots)
    inf = phi.value(None)
    if all(inf[i] * P[j] == inf[j] * P[i] for i in range(n) for j in range(n)):
        taus.append(None)
    return taus, split


def map_special_parameters(phi: RationalMap) -> tuple[list, list[str]]:
    """Parameters whose image is a singular point (double points and cusps)."""
    vs = ("s", "t")
    S, T = Poly.var("s", vs), Poly.var("t", vs)
    ps = [Poly.univariate(r, "s").substitute({"s": S}, vs) for r in phi.polys]
    pt = [Poly.univariate(r, "s").substitute({"s": T}, vs) for r in phi.polys]
    n = len(ps)
    G = []
    for i in range(n):
        for j in range(i + 1, n):
            G.append((ps[i] * pt[j] - ps[j] * pt[i]).exact_div(S - T))
    weights = ((1, 2, 3, 5), (1, -1, 5, 2), (2, 3, -1, 7))
    H = []
    for w in weights:
        h = Poly(vs)
        for k, g in enumerate(G):
            h = h + g * w[k % len(w)]
        H.append(h)
    R = None
    for a in range(len(H)):
        for b in range(a + 1, len(H)):
            res = resultant(H[a], H[b], "t")
            if res.is_zero():
                continue
            cs = res.ucoeffs() if res.total_degree() > 0 else [res.constant_term()]
            R = cs if R is None else ugcd(R, cs)
    if R is None:
        if all(g.is_zero() for g in G):
            raise InconsistentInput("parametrization is constant")
        raise InconsistentInput("parametrization is not generically injective")
    unresolved = []
    taus: list = []
    if len(R) > 1:
        roots, split = rational_roots(R)
        if not split:
            unresolved.append("singular points with irrational parameter values")
        taus = [r for r, _ in roots]
    return taus, unresolved
