"""Local invariants of singular points such as delta and the value semigroup."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Poly, TruncSeries, series_compose
from .errors import (
    BoundTooSmall,
    InconsistentInput,
    NegativeGenus,
    TruncationInsufficient,
)
from .puiseux import MAX_ORDER, PuiseuxBranch, local_equation

INFINITE = float("inf")


class Echelon:
    """Row echelon form over Q keyed by the lowest nonzero index of each row."""

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        vec = {k: c for k, c in vec.items() if c}
        while vec:
            low = min(vec)
            row = self.rows.get(low)
            if row is None:
                break
            f = vec[low] / row[low]
            for k, c in row.items():
                v = vec.get(k, 0) - f * c
                if v:
                    vec[k] = v
                else:
                    vec.pop(k, None)
        return vec

    def add(self, vec: dict[int, Fraction]) -> int | None:
        """Insert ``vec``; return its new pivot or None if it was dependent."""
        vec = self.reduce(vec)
        if not vec:
            return None
        low = min(vec)
        self.rows[low] = vec
        return low

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)


def _order_or_none(s: TruncSeries) -> int | None:
    return s.exact_order


def monomial_jets(branches: Sequence[PuiseuxBranch], Nc: int):
    """Yield ``(exponent, jet)`` for every monomial in the local coordinates
    whose pullback is nonzero mod ``t**Nc`` on some branch.

    The jet is a sparse vector indexed by ``branch_index * Nc + order``.
    """
    comps = []
    for b in branches:
        bb = b.at_order(max(Nc - 1, 1))
        comps.append([TruncSeries(c.coeffs[:Nc], max(Nc - 1, 1)) for c in bb.components])
    nvar = len(comps[0])
    orders = [[_order_or_none(c) for c in cs] for cs in comps]
    powers: list[list[dict[int, TruncSeries]]] = [[{} for _ in range(nvar)] for _ in comps]

    def power(bi, i, k):
        cache = powers[bi][i]
        if k not in cache:
            if k == 0:
                cache[0] = TruncSeries([1], max(Nc - 1, 1))
            else:
                cache[k] = power(bi, i, k - 1) * comps[bi][i]
        return cache[k]

    def rec(i, exps, partial):
        if i == nvar:
            vec = {}
            for bi in range(len(comps)):
                if partial[bi] >= Nc:
                    continue
                s = None
                for j, k in enumerate(exps):
                    if k:
                        p = power(bi, j, k)
                        s = p if s is None else s * p
                if s is None:
                    vec[bi * Nc] = Fraction(1)
                    continue
                for o, c in enumerate(s.coeffs[:Nc]):
                    if c:
                        vec[bi * Nc + o] = c
            yield tuple(exps), vec
            return
        k = 0
        while True:
            new = []
            for bi, p in enumerate(partial):
                o = orders[bi][i]
                if k and o is None:
                    new.append(Nc)
                else:
                    new.append(p + k * (o or 0))
            if min(new) >= Nc:
                break
            yield from rec(i + 1, exps + [k], new)
            k += 1
            if all(orders[bi][i] is None for bi in range(len(comps))):
                break

    yield from rec(0, [], [0] * len(comps))


def jet_span(branches: Sequence[PuiseuxBranch], Nc: int) -> Echelon:
    ech = Echelon()
    for _, vec in monomial_jets(branches, Nc):
        ech.add(vec)
    return ech


_DELTA_CACHE: dict = {}


def _branch_key(branches: Sequence[PuiseuxBranch]):
    return tuple(tuple((c.coeffs, c.exact) for c in b.components) for b in branches)


def delta_point(branches: Sequence[PuiseuxBranch]) -> int:
    """delta invariant of the germ formed by ``branches``.

    Computed as the codimension of the image of the local ring in the product
    of the branch rings, on jets mod ``t**Nc`` with ``Nc`` doubled until the
    codimension stabilizes.
    """
    if not branches:
        raise ValueError("no branches")
    key = _branch_key(branches)
    if key in _DELTA_CACHE:
        return _DELTA_CACHE[key]
    r = len(branches)
    Nc = min(max(4, 2 * sum(b.mult * (b.mult + 1) for b in branches)), MAX_ORDER // 2)
    prev = None
    while True:
        corank = r * Nc - jet_span(branches, Nc).rank
        if corank == prev:
            break
        if Nc >= MAX_ORDER:
            raise TruncationInsufficient(f"delta did not stabilize below order {MAX_ORDER}")
        prev = corank
        Nc = min(2 * Nc, MAX_ORDER)
    _DELTA_CACHE[key] = corank
    return corank


@dataclass(frozen=True)
class SemigroupData:
    generators: tuple[int, ...]
    conductor: int
    gaps: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return self.generators[0] if self.generators else 1

    def __contains__(self, n: int) -> bool:
        return n >= 0 and (n >= self.conductor or (n not in self.gaps))

    def elements_below(self, n: int) -> list[int]:
        return [k for k in range(n) if k in self]


def value_semigroup(b: PuiseuxBranch, bound: int) -> SemigroupData:
    """Value semigroup of a single branch, from valuations of pullbacks below ``bound``."""
    if bound < 2:
        raise BoundTooSmall("bound must be at least 2")
    ech = jet_span([b], bound)
    values = set(ech.pivots)
    c = bound
    while c > 0 and (c - 1) in values:
        c -= 1
    if c + b.mult > bound:
        raise BoundTooSmall(
            f"values below {bound} do not determine the semigroup (need > {c + b.mult - 1})"
        )
    gaps = tuple(k for k in range(c) if k not in values)
    gens = []
    pos = sorted(v for v in values if 0 < v <= c + b.mult)
    for v in pos:
        if not any((v - g) in values and v - g > 0 for g in pos if g < v):
            gens.append(v)
    return SemigroupData(tuple(gens), c, gaps)


def auto_semigroup(b: PuiseuxBranch) -> SemigroupData:
    """Semigroup with the bound doubled until it suffices."""
    bound = max(8, 4 * b.mult)
    while True:
        try:
            return value_semigroup(b, bound)
        except BoundTooSmall:
            if bound >= MAX_ORDER:
                raise
            bound = min(2 * bound, MAX_ORDER)


def _curve_degree(b: PuiseuxBranch) -> int | None:
    src = b.source
    if src is None:
        return None
    if hasattr(src, "F"):
        return src.F.total_degree()
    if hasattr(src, "phi"):
        return src.phi.degree
    return None


def _localize(b: PuiseuxBranch, g: Poly, local: bool) -> Poly:
    n = len(b.components)
    if local:
        if g.nvars != n:
            raise ValueError("local polynomial must use the branch coordinates")
        return g
    if b.center is None:
        raise InconsistentInput("branch with symbolic center needs a local polynomial")
    if g.nvars == n + 1:
        return local_equation(g, b.center, b.chart)
    if g.nvars == n and b.chart == n:
        return g.translate(dict(zip(g.variables, b.center[:n])))
    raise ValueError("polynomial does not match the ambient coordinates of the branch")


def intersection_multiplicity(b: PuiseuxBranch, g: Poly, local: bool = False):
    """Order of vanishing of ``g`` along ``b`` (``inf`` when ``g`` contains the branch).

    ``g`` is homogeneous in the ambient coordinates, affine in the chart
    coordinates of ``b``, or already centered when ``local`` is true.
    """
    gl = _localize(b, g, local)
    bound = None
    d = _curve_degree(b)
    if d is not None:
        bound = d * max(gl.total_degree(), 1)
    cur = b
    while True:
        try:
            val = series_compose(gl, cur.components)
        except TruncationInsufficient:
            if bound is not None and cur.N > bound:
                return INFINITE
            if cur.N >= MAX_ORDER:
                raise
            cur = cur.at_order(min(2 * cur.N, MAX_ORDER))
            continue
        k = val.exact_order
        return INFINITE if k is None else k


def genus_of_normalization(d: int, deltas: Sequence[int]) -> int:
    g = (d - 1) * (d - 2) // 2 - sum(deltas)
    if g < 0:
        raise NegativeGenus(
            f"degree {d} with total delta {sum(deltas)} gives negative genus; "
            "the curve is reducible or a singular point is missing"
        )
    return g


@dataclass(frozen=True)
class SingularPointRecord:
    """A special point together with its branches and local invariants.

    ``inf_mults`` holds the intersection multiplicity of each branch with the
    line at infinity (only for points at infinity).
    """

    point_id: str
    center: tuple[Fraction, ...] | None
    branches: tuple[PuiseuxBranch, ...]
    m: int
    r: int
    delta: int
    at_infinity: bool = False
    inf_mults: tuple[int, ...] | None = None

    @property
    def is_singular(self) -> bool:
        return self.delta > 0

    @property
    def symbolic(self) -> bool:
        return self.center is None or any(b.symbolic for b in self.branches)


def infinity_multiplicity(b: PuiseuxBranch) -> int:
    """Intersection number of a branch at infinity with ``z = 0`` (last local coordinate)."""
    k = intersection_multiplicity(
        b, Poly.var("w", tuple(f"c{i}" for i in range(len(b.components) - 1)) + ("w",)),
        local=True,
    )
    if k == INFINITE:
        raise InconsistentInput(f"branch {b.branch_id} lies in the line at infinity")
    return int(k)


def build_record(
    point_id: str,
    branches: Sequence[PuiseuxBranch],
    at_infinity: bool = False,
    delta: int | None = None,
) -> SingularPointRecord:
    branches = tuple(branches)
    if delta is None:
        delta = delta_point(branches)
    m = sum(b.mult for b in branches)
    r = len(branches)
    inf = tuple(infinity_multiplicity(b) for b in branches) if at_infinity else None
    center = branches[0].center
    return SingularPointRecord(point_id, center, branches, m, r, delta, at_infinity, inf)
