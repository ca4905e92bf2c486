"""Finite/infinite decision for L^2 holomorphic functions on open subsets of curves.

A^2(U) is infinite dimensional exactly when the complement of U is not
locally polar.  Otherwise it is the space of meromorphic functions on the
normalization with ``div f + D_U >= 0`` that in addition descend to the local
rings of the interior singular points.  On rational normalizations this is an
exact rank computation; for higher genus only Riemann-Roch bounds are given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import Poly, TruncSeries
from .divisors import (
    Divisor,
    affine_multiplicity_divisor,
    multiplicity_divisor,
    open_set_restriction,
    point_of,
)
from .errors import InconsistentInput, UnclassifiedPoint, UnsupportedGenus
from .invariants import Echelon, SingularPointRecord, monomial_jets
from .puiseux import Anchor


class Ambient(str, Enum):
    PROJECTIVE = "projective"
    AFFINE = "affine"


class ComplementKind(str, Enum):
    NONPOLAR = "nonpolar"
    LOCALLY_POLAR = "locally_polar"


class PointClass(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class OpenSetSpec:
    """Description of ``U``: the kind of complement and where each special point lies.

    In affine mode the points at infinity are outside ``U`` and count as boundary.
    """

    ambient: Ambient = Ambient.PROJECTIVE
    complement_kind: ComplementKind = ComplementKind.LOCALLY_POLAR
    point_classes: Mapping[str, PointClass] = field(default_factory=dict, hash=False)
    infinity_ids: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "ambient", Ambient(self.ambient))
        object.__setattr__(self, "complement_kind", ComplementKind(self.complement_kind))
        object.__setattr__(
            self, "point_classes", {k: PointClass(v) for k, v in dict(self.point_classes).items()}
        )

    @property
    def affine(self) -> bool:
        return self.ambient == Ambient.AFFINE

    @property
    def nonpolar(self) -> bool:
        return self.complement_kind == ComplementKind.NONPOLAR

    def class_of(self, point_id: str) -> PointClass:
        if self.affine and point_id in self.infinity_ids:
            return PointClass.BOUNDARY
        try:
            return self.point_classes[point_id]
        except KeyError:
            raise UnclassifiedPoint(f"point {point_id} is not classified") from None

    def bind(self, curve) -> "OpenSetSpec":
        """Attach the curve's infinity points and check the classification is complete."""
        inf = frozenset(p.point_id for p in curve.infinity_points) if self.affine else frozenset()
        known = {p.point_id for p in curve.points}
        for pid, cls in self.point_classes.items():
            if pid not in known:
                raise InconsistentInput(f"classified point {pid} is not a special point")
            if pid in inf and cls != PointClass.BOUNDARY:
                raise InconsistentInput(
                    f"point {pid} lies at infinity and cannot be {cls.value} in affine mode"
                )
        bound = OpenSetSpec(self.ambient, self.complement_kind, self.point_classes, inf)
        if not self.nonpolar:
            for p in curve.singular_points:
                bound.class_of(p.point_id)
        return bound


@dataclass
class DichotomyReport:
    verdict: str
    exact_dim: int | None = None
    lower_bound: int | None = None
    upper_bound: int | None = None
    effective_divisor_used: Divisor | None = None
    interior_condition_count: int = 0
    genus: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return self.verdict == "Finite"


# ---------------------------------------------------------------------------
# Riemann-Roch and rational normalizations


def h0_bounds(D: Divisor | int, g: int) -> tuple[int, int, bool]:
    """``(lower, upper, exact)`` for ``h^0(D)`` on a curve of genus ``g``."""
    deg = D.degree if isinstance(D, Divisor) else int(D)
    if deg < 0:
        return 0, 0, True
    lower = max(0, 1 - g + deg)
    upper = deg + 1
    if deg > 2 * g - 2:
        return lower, lower, True
    if g == 0:
        return lower, lower, True
    return lower, upper, lower == upper


def semigroup_gap_count(Lmax: int, gens: Sequence[int]) -> int:
    """Number of ``0 <= l <= Lmax`` outside the semigroup generated by ``gens``."""
    if Lmax < 0:
        return 0
    reach = [False] * (Lmax + 1)
    reach[0] = True
    for n in range(1, Lmax + 1):
        reach[n] = any(g <= n and reach[n - g] for g in gens if g > 0)
    return reach.count(False)


def _ueval_series(coeffs: Sequence[Fraction], tau0, N: int) -> TruncSeries:
    """``p(tau0 + t)`` (or ``t**deg * p(1/t)`` when ``tau0`` is None) as a series."""
    if tau0 is None:
        return TruncSeries(list(reversed(list(coeffs))), max(N, len(coeffs) - 1), exact=True)
    p = Poly.univariate(list(coeffs), "t").translate({"t": tau0})
    if p.is_zero():
        return TruncSeries([0], N, exact=True)
    return TruncSeries(p.ucoeffs(), N, exact=True)


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _linear_power(root: Fraction, k: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(k):
        out = _poly_mul(out, [-root, Fraction(1)])
    return out


class _P1Basis:
    """Monomial basis ``Z(tau) tau^j / Q(tau)`` of ``H^0(P^1, D)`` for one component."""

    def __init__(self, coeffs: Mapping[object, int]):
        self.Q = [Fraction(1)]
        self.Z = [Fraction(1)]
        self.d_inf = 0
        for tau, c in coeffs.items():
            if tau is None:
                self.d_inf = c
            elif c > 0:
                self.Q = _poly_mul(self.Q, _linear_power(tau, c))
            elif c < 0:
                self.Z = _poly_mul(self.Z, _linear_power(tau, -c))
        self.degree = sum(coeffs.values())

    @property
    def size(self) -> int:
        return max(0, self.degree + 1)

    def jet(self, j: int, tau0, N: int) -> TruncSeries:
        """Expansion of the ``j``-th basis function at ``tau0`` through ``t**(N-1)``."""
        num = [Fraction(0)] * j + list(self.Z)
        work = N + len(num) + len(self.Q)
        if tau0 is None:
            shift = (len(self.Q) - 1) - (len(num) - 1)
            if shift < 0:
                raise ValueError("basis function has a pole at an interior point")
            n = TruncSeries(list(reversed(num)), work, exact=True)
            q = TruncSeries(list(reversed(self.Q)), work, exact=True)
            s = (n.truncate(work) * q.truncate(work).inverse()).shift(shift)
        else:
            n = _ueval_series(num, tau0, work)
            q = _ueval_series(self.Q, tau0, work)
            if q.coeffs[0] == 0:
                raise ValueError("basis function has a pole at an interior point")
            s = n.truncate(work) * q.truncate(work).inverse()
        return TruncSeries(s.coeffs[:N], max(N - 1, 1))


def _normal_form(ech: Echelon, vec: dict[int, Fraction]) -> dict[int, Fraction]:
    """Fully reduced representative of ``vec`` modulo the span held by ``ech``."""
    vec = {k: c for k, c in vec.items() if c}
    done: dict[int, Fraction] = {}
    while vec:
        k = min(vec)
        c = vec.pop(k)
        row = ech.rows.get(k)
        if row is None:
            done[k] = c
            continue
        f = c / row[k]
        for kk, cc in row.items():
            if kk == k:
                continue
            v = vec.get(kk, 0) - f * cc
            if v:
                vec[kk] = v
            else:
                vec.pop(kk, None)
    return done


def h0_rational(
    D: Divisor,
    interior_points: Sequence[SingularPointRecord] = (),
    anchors: Mapping[str, Anchor] | None = None,
    components: int | None = None,
) -> int:
    """``dim {f : div f + D >= 0, f in O_p at every interior point p}`` on a disjoint
    union of projective lines.

    ``anchors`` places the support of ``D`` on the components; branches of the
    interior points carry their own anchors.  Without interior points and with a
    single component the answer only depends on ``deg D``.
    """
    anchors = dict(anchors or {})
    for p in interior_points:
        for b in p.branches:
            if b.anchor is None:
                raise UnsupportedGenus(f"branch {b.branch_id} has no rational anchor")
            anchors.setdefault(b.branch_id, b.anchor)
    if not interior_points and (components in (None, 1)) and not any(
        bid in anchors for bid in D.support
    ):
        return max(0, D.degree + 1)
    missing = [bid for bid in D.support if bid not in anchors]
    if missing:
        raise UnsupportedGenus(f"branches {missing} have no rational anchor")
    ncomp = max([a.component + 1 for a in anchors.values()] + [components or 1])
    per_comp: list[dict] = [{} for _ in range(ncomp)]
    for bid, c in D.entries.items():
        a = anchors[bid]
        if a.tau in per_comp[a.component]:
            raise InconsistentInput(f"two branches anchored at the same point of P^1 ({bid})")
        per_comp[a.component][a.tau] = c
    bases = [_P1Basis(pc) for pc in per_comp]
    nbasis = sum(B.size for B in bases)
    if not interior_points or nbasis == 0:
        return nbasis
    for p in interior_points:
        for b in p.branches:
            if D[b.branch_id] > 0:
                raise InconsistentInput(f"interior branch {b.branch_id} carries a pole")

    # residuals of every basis function modulo the descent conditions
    cols: list[dict[int, Fraction]] = [{} for _ in range(nbasis)]
    offset = 0
    for p in interior_points:
        if p.delta == 0:
            continue
        Nc = 2 * p.delta
        ech = Echelon()
        for _, vec in monomial_jets(p.branches, Nc):
            ech.add(vec)
        col = 0
        for ci, B in enumerate(bases):
            for j in range(B.size):
                vec = {}
                for bi, b in enumerate(p.branches):
                    a = b.anchor
                    if a.component != ci:
                        continue
                    s = B.jet(j, a.tau, Nc)
                    for o, c in enumerate(s.coeffs[:Nc]):
                        if c:
                            vec[bi * Nc + o] = c
                for k, c in _normal_form(ech, vec).items():
                    cols[col][offset + k] = c
                col += 1
        offset += Nc * len(p.branches)
    rank = Echelon()
    for col in cols:
        rank.add(col)
    return nbasis - rank.rank


# ---------------------------------------------------------------------------
# decision


def _restricted_divisor(curve, spec: OpenSetSpec) -> Divisor:
    D = affine_multiplicity_divisor(curve) if spec.affine else multiplicity_divisor(curve)
    return open_set_restriction(D, spec)


def _interior_points(curve, spec: OpenSetSpec) -> list[SingularPointRecord]:
    return [
        p for p in curve.singular_points
        if not (spec.affine and p.at_infinity) and spec.class_of(p.point_id) == PointClass.INTERIOR
    ]


def _anchor_map(curve) -> dict[str, Anchor]:
    return {b.branch_id: b.anchor for b in curve.branches if b.anchor is not None}


def decide(curve, spec: OpenSetSpec, exact: bool = False, bounds_only: bool = False) -> DichotomyReport:
    """Classify ``A^2(U)``.

    With ``exact`` an exact dimension is required (``UnsupportedGenus``
    otherwise); ``bounds_only`` skips the rank computation.
    """
    if exact and bounds_only:
        raise ValueError("exact and bounds_only are exclusive")
    spec = spec.bind(curve)
    genus = curve.genus
    if spec.nonpolar:
        return DichotomyReport(
            "Infinite", genus=genus,
            notes=["complement of U is not locally polar"],
        )
    DU = _restricted_divisor(curve, spec)
    interior = _interior_points(curve, spec)
    icc = sum(p.delta for p in interior)
    report = DichotomyReport(
        "Finite", effective_divisor_used=DU, interior_condition_count=icc, genus=genus,
    )
    conditional = [p for p in interior if p.delta > 0]
    if genus == 0 and not bounds_only:
        anchors = _anchor_map(curve)
        try:
            if not conditional and curve.components == 1:
                dim = max(0, DU.degree + 1)
            else:
                dim = h0_rational(DU, conditional, anchors, curve.components)
            report.exact_dim = report.lower_bound = report.upper_bound = dim
            report.notes.append("exact rank computation on the rational normalization")
            return report
        except UnsupportedGenus as exc:
            report.notes.append(f"exact computation unavailable: {exc}")
    if curve.components != 1:
        raise UnsupportedGenus("bounds are only available for irreducible curves")
    g = curve.require_genus()
    lo, up, is_exact = h0_bounds(DU, g)
    if conditional:
        lo = max(0, lo - icc)
        is_exact = lo == up
    if DU.degree >= 0 and all(c >= 0 for c in DU.entries.values()):
        lo = max(lo, 1)
        is_exact = lo == up
    report.lower_bound, report.upper_bound = lo, up
    if is_exact:
        report.exact_dim = lo
    report.notes.append(f"Riemann-Roch bounds with genus {g}")
    if exact and report.exact_dim is None:
        raise UnsupportedGenus(
            f"exact dimension unavailable (genus {g}, bounds [{lo}, {up}])"
        )
    return report


def triviality_test(curve) -> bool:
    """Strict inequality ``sum_Y (m - r) < sum_{X cap H} ((X . H)_p + r)``."""
    lhs = sum(p.m - p.r for p in curve.points if not p.at_infinity)
    rhs = sum(sum(p.inf_mults) + p.r for p in curve.infinity_points)
    if not curve.has_infinity:
        raise InconsistentInput("affine analysis needs the points at infinity of the curve")
    return lhs < rhs


def l2_delta(curve, spec: OpenSetSpec) -> int:
    """``dim A^2(U~) - dim pi^* A^2(U)`` for a locally polar complement."""
    spec = spec.bind(curve)
    if spec.nonpolar:
        raise InconsistentInput("L^2 delta needs a locally polar complement")
    DU = _restricted_divisor(curve, spec)
    interior = [p for p in _interior_points(curve, spec) if p.delta > 0]
    if not interior:
        return 0
    if curve.genus != 0:
        raise UnsupportedGenus("L^2 delta with interior singular points needs genus 0")
    anchors = _anchor_map(curve)
    upstairs = h0_rational(DU, (), anchors, curve.components)
    downstairs = h0_rational(DU, interior, anchors, curve.components)
    return upstairs - downstairs


def a2_normalization_dim(curve, spec: OpenSetSpec) -> int:
    """``dim A^2(U~)``: the same divisor without descent conditions."""
    spec = spec.bind(curve)
    if spec.nonpolar:
        raise InconsistentInput("finite dimension needs a locally polar complement")
    DU = _restricted_divisor(curve, spec)
    if curve.genus == 0:
        return h0_rational(DU, (), _anchor_map(curve), curve.components)
    lo, up, ok = h0_bounds(DU, curve.require_genus())
    if not ok:
        raise UnsupportedGenus("exact dimension unavailable for positive genus")
    return lo
