"""Divisors on the normalization, supported on branch ids."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .errors import InconsistentInput, UnresolvedLocus


class Divisor:
    """Finite integer combination of normalization points, keyed by branch id."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        out: dict[str, int] = {}
        for k, c in items:
            if isinstance(c, bool) or int(c) != c:
                raise ValueError(f"divisor coefficient {c!r} is not an integer")
            out[k] = out.get(k, 0) + int(c)
        self._entries = {k: c for k, c in sorted(out.items()) if c}

    @property
    def entries(self) -> dict[str, int]:
        return dict(self._entries)

    @property
    def degree(self) -> int:
        return sum(self._entries.values())

    @property
    def support(self) -> list[str]:
        return list(self._entries)

    def __getitem__(self, branch_id: str) -> int:
        return self._entries.get(branch_id, 0)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self._entries.items()) + list(other._entries.items()))

    def __neg__(self) -> "Divisor":
        return Divisor({k: -c for k, c in self._entries.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._entries == other._entries

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def __repr__(self):
        return f"Divisor({self._entries})"

    def is_effective(self) -> bool:
        return all(c > 0 for c in self._entries.values())

    def positive_part(self) -> "Divisor":
        return Divisor({k: c for k, c in self._entries.items() if c > 0})

    def negative_part(self) -> "Divisor":
        return Divisor({k: -c for k, c in self._entries.items() if c < 0})

    def restrict(self, keep: Callable[[str, int], bool]) -> "Divisor":
        return Divisor({k: c for k, c in self._entries.items() if keep(k, c)})

    def to_dict(self) -> dict[str, int]:
        return dict(self._entries)


def point_of(branch_id: str) -> str:
    return branch_id.rsplit(".", 1)[0]


def multiplicity_divisor(curve) -> Divisor:
    """Sum of ``(m_i - 1)`` over the branches of every point."""
    return Divisor(
        (b.branch_id, b.mult - 1) for p in curve.points for b in p.branches if b.mult > 1
    )


def _require_infinity(curve) -> None:
    if not curve.has_infinity:
        raise InconsistentInput("affine analysis needs the points at infinity of the curve")
    if curve.unresolved_infinity:
        raise UnresolvedLocus("; ".join(curve.unresolved_infinity))


def affine_multiplicity_divisor(curve) -> Divisor:
    """``(m_i - 1)`` on affine singular branches, ``-((X_i . H) + 1)`` on branches at infinity."""
    _require_infinity(curve)
    items = []
    for p in curve.points:
        for i, b in enumerate(p.branches):
            if p.at_infinity:
                items.append((b.branch_id, -(p.inf_mults[i] + 1)))
            elif b.mult > 1:
                items.append((b.branch_id, b.mult - 1))
    return Divisor(items)


@dataclass(frozen=True)
class DegreeCheck:
    branchwise: int
    pointwise: int
    intersection_branchwise: int
    intersection_pointwise: int | None
    degree: int | None

    @property
    def consistent(self) -> bool:
        ok = self.branchwise == self.pointwise
        if self.intersection_pointwise is not None:
            ok = ok and self.intersection_branchwise == self.intersection_pointwise
        if self.degree is not None:
            ok = ok and self.intersection_branchwise == self.degree
        return ok

    def as_pair(self) -> tuple[int, int]:
        return self.branchwise, self.pointwise


def _pointwise_infinity_numbers(curve) -> dict[str, int] | None:
    """``(X . H)_p`` for each point at infinity, computed without the branches."""
    from .algebra import rational_roots  # local import keeps the module light

    if curve.equation is not None:
        F = curve.equation
        xv, yv, zv = F.variables
        B = F.substitute({zv: 0}, (xv, yv))
        out = {}
        for p in curve.infinity_points:
            a, b, _ = p.center
            # multiplicity of [a:b] as a root of the binary form B
            if b != 0:
                cs = B.substitute({yv: 1}, (xv,)).ucoeffs()
                roots, _ = rational_roots(cs)
                out[p.point_id] = dict(roots).get(a / b, 0)
            else:
                out[p.point_id] = min(e[1] for e in B.terms)
        return out
    phi = curve.rational_map
    if phi is not None:
        zrow = list(phi.polys[-1])
        roots = dict(rational_roots(zrow)[0]) if len(zrow) > 1 and any(zrow) else {}
        out = {}
        for p in curve.infinity_points:
            total = 0
            for b in p.branches:
                tau = b.anchor.tau
                total += (phi.degree - (len(zrow) - 1)) if tau is None else roots.get(tau, 0)
            out[p.point_id] = total
        return out
    return None


def degree_consistency(curve) -> DegreeCheck:
    """Degree of the affine multiplicity divisor summed per branch and per point.

    Per point the degree is ``sum_Y (m - r) - sum_{X cap H} ((X . H)_p + r)``;
    the intersection numbers with the line at infinity are also checked against
    ``d`` and, when an equation or map is known, against an independent count.
    """
    _require_infinity(curve)
    D = affine_multiplicity_divisor(curve)
    pointwise = 0
    inf_total = 0
    for p in curve.points:
        if p.at_infinity:
            xh = sum(p.inf_mults)
            inf_total += xh
            pointwise -= xh + p.r
        else:
            pointwise += p.m - p.r
    direct = _pointwise_infinity_numbers(curve)
    direct_total = sum(direct.values()) if direct is not None else None
    return DegreeCheck(D.degree, pointwise, inf_total, direct_total, curve.degree)


def open_set_restriction(D: Divisor, spec, locate: Callable[[str], str] = point_of) -> Divisor:
    """Keep positive coefficients on boundary points and negative ones on the closure."""
    kept = {}
    for bid, c in D.entries.items():
        cls = spec.class_of(locate(bid))
        if c > 0 and cls == "boundary":
            kept[bid] = c
        elif c < 0 and cls in ("interior", "boundary"):
            kept[bid] = c
    return Divisor(kept)
