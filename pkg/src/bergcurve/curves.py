"""Global curve models assembled from special points and their branches."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import Poly, rational_roots
from .errors import (
    InconsistentInput,
    IrrationalCoefficients,
    NegativeGenus,
    UnresolvedLocus,
)
from .invariants import SingularPointRecord, build_record, genus_of_normalization
from .puiseux import (
    PuiseuxBranch,
    RationalMap,
    find_special_points,
    map_branch,
    map_preimages,
    map_special_parameters,
    newton_puiseux,
    normalize_point,
)

DEFAULT_ORDER = 16


@dataclass(frozen=True)
class CurveModel:
    """An irreducible (or declared multi-component) plane curve with its special points.

    ``points`` holds every singular point and, when ``has_infinity`` is set,
    every point on the line at infinity.
    """

    mode: str
    points: tuple[SingularPointRecord, ...]
    degree: int | None = None
    genus: int | None = None
    components: int = 1
    equation: Poly | None = None
    rational_map: RationalMap | None = None
    has_infinity: bool = True
    name: str = ""
    unresolved_infinity: tuple[str, ...] = field(default=())

    @property
    def singular_points(self) -> tuple[SingularPointRecord, ...]:
        return tuple(p for p in self.points if p.is_singular)

    @property
    def infinity_points(self) -> tuple[SingularPointRecord, ...]:
        return tuple(p for p in self.points if p.at_infinity)

    @property
    def branches(self) -> tuple[PuiseuxBranch, ...]:
        return tuple(b for p in self.points for b in p.branches)

    def point(self, point_id: str) -> SingularPointRecord:
        for p in self.points:
            if p.point_id == point_id:
                return p
        raise KeyError(point_id)

    @property
    def anchored(self) -> bool:
        """True when every branch of every singular point has a rational anchor."""
        return all(b.anchor is not None for p in self.singular_points for b in p.branches)

    @property
    def total_delta(self) -> int:
        return sum(p.delta for p in self.points)

    def require_genus(self) -> int:
        if self.genus is None:
            raise NegativeGenus("genus unknown: the curve is reducible or data is incomplete")
        return self.genus


def _point_order(points: Iterable[tuple[Fraction, ...]]):
    return sorted(set(points), key=lambda p: (p[-1] == 0, p))


def analyze_implicit(F: Poly, N: int = DEFAULT_ORDER, name: str = "") -> CurveModel:
    """Model of ``F = 0`` in P^2; the last variable of ``F`` cuts out the line at infinity."""
    sp = find_special_points(F)
    if sp.line_at_infinity:
        raise InconsistentInput("the line at infinity is a component of the curve")
    if sp.unresolved_singular:
        raise UnresolvedLocus("; ".join(sp.unresolved_singular))
    records = []
    for i, p in enumerate(_point_order(sp.singular + sp.infinity)):
        pid = f"p{i}"
        try:
            branches = newton_puiseux(F, p, N, pid)
        except IrrationalCoefficients as exc:
            raise IrrationalCoefficients(f"at {pid} = {_fmt(p)}: {exc}") from None
        records.append(build_record(pid, branches, at_infinity=(p[-1] == 0)))
    d = F.total_degree()
    try:
        genus = genus_of_normalization(d, [r.delta for r in records])
    except NegativeGenus:
        genus = None
    return CurveModel(
        "implicit", tuple(records), d, genus, 1, equation=F, name=name,
        unresolved_infinity=tuple(sp.unresolved_infinity),
    )


def _fmt(p) -> str:
    return "[" + ":".join(str(c) for c in p) + "]"


def curve_from_map(polys: Sequence, N: int = DEFAULT_ORDER, name: str = "") -> CurveModel:
    """Model of the image of ``tau -> [p_0 : p_1 : p_2]`` (birational onto its image)."""
    phi = RationalMap.from_polys(polys)
    taus, unresolved = map_special_parameters(phi)
    if unresolved:
        raise UnresolvedLocus("; ".join(unresolved))
    candidates = {}
    for tau in list(taus) + [None]:
        p = normalize_point(phi.value(tau))[0]
        candidates.setdefault(p, None)
    # points on z = 0
    zrow = list(phi.polys[-1])
    unres_inf = []
    if any(zrow) and len(zrow) > 1:
        roots, split = rational_roots(zrow)
        if not split:
            unres_inf.append("points at infinity with irrational parameter values")
        for tau, _ in roots:
            candidates.setdefault(normalize_point(phi.value(tau))[0], None)
    records = []
    chosen = []
    for p in candidates:
        pre, split = map_preimages(phi, p)
        if not split:
            raise UnresolvedLocus(f"point {_fmt(p)} has irrational preimages")
        chosen.append((p, pre))
    chosen.sort(key=lambda item: (item[0][-1] == 0, item[0]))
    idx = 0
    for p, pre in chosen:
        pre = sorted(pre, key=lambda t: (t is None, t if t is not None else 0))
        pid = f"p{idx}"
        branches = [map_branch(phi, tau, N, f"{pid}.{i}") for i, tau in enumerate(pre)]
        singular = len(branches) > 1 or any(b.mult > 1 for b in branches)
        if not singular and p[-1] != 0:
            continue
        records.append(build_record(pid, branches, at_infinity=(p[-1] == 0)))
        idx += 1
    d = phi.degree
    genus = genus_of_normalization(d, [r.delta for r in records])
    if genus != 0:
        raise InconsistentInput(
            f"parametrization of degree {d} has total delta {sum(r.delta for r in records)}; "
            "it is not birational onto its image"
        )
    return CurveModel(
        "parametrized", tuple(records), d, 0, 1, rational_map=phi, name=name,
        unresolved_infinity=tuple(unres_inf),
    )


def curve_from_points(
    records: Sequence[SingularPointRecord],
    degree: int | None = None,
    genus: int | None = None,
    components: int = 1,
    has_infinity: bool | None = None,
    name: str = "",
) -> CurveModel:
    """Model built from hand-supplied points and branches (parametrized mode).

    The genus is the declared one, else 0 when every branch carries an anchor
    on a rational component, else the degree-genus formula.
    """
    records = tuple(records)
    ids = [r.point_id for r in records]
    if len(set(ids)) != len(ids):
        raise InconsistentInput("duplicate point ids")
    anchored = bool(records) and all(b.anchor is not None for r in records for b in r.branches)
    plucker = None
    if degree is not None:
        plucker = genus_of_normalization(degree, [r.delta for r in records])
    if genus is None:
        if anchored:
            genus = 0
        elif plucker is not None:
            genus = plucker
    else:
        if genus < 0:
            raise NegativeGenus(f"declared genus {genus} is negative")
        if anchored and genus != 0:
            raise InconsistentInput("anchored branches require rational components (genus 0)")
        if plucker is not None and components == 1 and plucker != genus:
            raise InconsistentInput(
                f"declared genus {genus} disagrees with the degree-genus formula ({plucker})"
            )
    if has_infinity is None:
        has_infinity = any(r.at_infinity for r in records)
    return CurveModel(
        "parametrized", records, degree, genus, components, has_infinity=has_infinity, name=name,
    )
