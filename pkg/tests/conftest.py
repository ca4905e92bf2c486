from __future__ import annotations

from pathlib import Path

import pytest

from bergcurve.algebra import Poly, TruncSeries
from bergcurve.curves import curve_from_points
from bergcurve.fileio import curve_from_data
from bergcurve.invariants import build_record
from bergcurve.puiseux import Anchor, make_branch

DATA = Path(__file__).parent / "data"
CURVES = DATA / "curves"
OPENSETS = DATA / "opensets"
CONFIGS = DATA / "configs"

SMOOTH_AFFINE = [
    "smooth_line", "smooth_line2", "smooth_parabola", "smooth_hyperbola", "smooth_elliptic",
    "smooth_cubic_graph", "smooth_x2y", "smooth_quartic_graph", "smooth_x3y",
    "smooth_quintic_graph", "smooth_genus2",
]


def series(d, N=16, exact=True):
    return TruncSeries.from_dict(d, N, exact=exact)


def branch(a, b, **kw):
    """Branch ``(sum a_k t^k, sum b_k t^k)`` from two exponent maps."""
    return make_branch([series(a), series(b)], **kw)


def poly(text, variables=("x", "y", "z")):
    return Poly.parse(text, variables)


def glued_curve(n: int, k: int):
    """Rational curve with the monomial cusp (t^(2n+1), t^2) at tau = 0 and the
    germ (s^(2k+1), s^(2k)) glued in at tau = infinity.

    For ``k = 0`` the second germ is a smooth branch.
    """
    p0 = branch({2 * n + 1: 1}, {2: 1}, branch_id="p0.0", anchor=Anchor(0, 0))
    if k == 0:
        p1 = branch({1: 1}, {}, branch_id="p1.0", anchor=Anchor(0, None))
    else:
        p1 = branch({2 * k + 1: 1}, {2 * k: 1}, branch_id="p1.0", anchor=Anchor(0, None))
    return curve_from_points([build_record("p0", [p0]), build_record("p1", [p1])],
                             name=f"glued_n{n}_k{k}")


def load_curve(name: str):
    return curve_from_data(CURVES / f"{name}.yaml")[0]


def corpus_names():
    return sorted(p.stem for p in CURVES.glob("*.yaml"))


@pytest.fixture(scope="session")
def corpus():
    """Every curve file plus the glued family for small parameters."""
    out = {name: load_curve(name) for name in corpus_names()}
    for n, k in [(1, 1), (2, 1), (3, 2), (2, 5), (3, 0)]:
        out[f"glued_n{n}_k{k}"] = glued_curve(n, k)
    return out


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
