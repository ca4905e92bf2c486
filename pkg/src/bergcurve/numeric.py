"""Quadrature checks for weighted monomial norms and pulled-back area densities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import GridUnderflow
from .puiseux import PuiseuxBranch


@dataclass(frozen=True)
class WeightSpec:
    """Weight ``|z|^(2m)`` on the punctured disc."""

    m: int


@dataclass(frozen=True)
class QuadratureConfig:
    annuli: int = 60
    nodes_radial: int = 1024
    nodes_angular: int = 8
    rel_tol: float = 1e-4
    isometry_tol: float = 1e-6
    slope_tol: float = 0.05
    fit_kmin: int = 14
    fit_kmax: int = 34

    def __post_init__(self):
        if not (0 < self.rel_tol <= 0.1):
            raise ValueError("rel_tol must lie in (0, 0.1]")
        for name in ("annuli", "nodes_radial", "nodes_angular"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.fit_kmax - self.fit_kmin < 2:
            raise ValueError("exponent fit needs at least three grid points")

    def doubled(self) -> "QuadratureConfig":
        return QuadratureConfig(
            self.annuli, 2 * self.nodes_radial, 2 * self.nodes_angular, self.rel_tol,
            self.isometry_tol, self.slope_tol, self.fit_kmin, self.fit_kmax,
        )


class _Divergent:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Divergent"


Divergent = _Divergent()


def _annulus_contributions(integrand, R: float, cfg: QuadratureConfig) -> np.ndarray:
    """Midpoint rule in ``(log r, theta)`` on the dyadic annuli ``R 2^-(k+1) < r < R 2^-k``."""
    h = math.log(2.0) / cfg.nodes_radial
    u_local = (np.arange(cfg.nodes_radial) + 0.5) * h
    theta = (np.arange(cfg.nodes_angular) + 0.5) * (2 * math.pi / cfg.nodes_angular)
    k = np.arange(cfg.annuli)[:, None]
    logr = math.log(R) - (k + 1) * math.log(2.0) + u_local[None, :]
    r = np.exp(logr)
    z = r[:, :, None] * np.exp(1j * theta)[None, None, :]
    vals = integrand(z) * (r * r)[:, :, None]
    dtheta = 2 * math.pi / cfg.nodes_angular
    # fixed summation order per annulus: angular first
    return vals.sum(axis=2).sum(axis=1) * h * dtheta


def _sum_or_divergent(contrib: np.ndarray):
    last = contrib[-5:]
    with np.errstate(invalid="ignore", divide="ignore"):
        if np.all(np.diff(last) >= -1e-12 * np.abs(last[:-1])) and last[-1] > 0:
            return Divergent
    total = float(contrib.sum())
    nz = contrib[contrib > 0]
    if len(nz) >= 2:
        ratio = nz[-1] / nz[-2]
        if ratio < 0.75:
            total += float(nz[-1] * ratio / (1 - ratio))
        else:
            return Divergent
    return total


def weighted_monomial_norm(j: int, w: WeightSpec, R: float = 1.0,
                           cfg: QuadratureConfig | None = None):
    """``int_{0<|z|<R} |z|^(2j) |z|^(2m)`` by quadrature, or ``Divergent``."""
    if R <= 0:
        raise ValueError("radius must be positive")
    cfg = cfg or QuadratureConfig()
    contrib = _annulus_contributions(
        lambda z: np.abs(z) ** (2 * j) * np.abs(z) ** (2 * w.m), R, cfg
    )
    return _sum_or_divergent(contrib)


def unweighted_norm(k: int, R: float = 1.0, cfg: QuadratureConfig | None = None):
    cfg = cfg or QuadratureConfig()
    contrib = _annulus_contributions(lambda z: np.abs(z**k) ** 2, R, cfg)
    return _sum_or_divergent(contrib)


def closed_form_norm(s: int, R: float = 1.0) -> float:
    """``int_{|z|<R} |z|^(2s) = pi R^(2(s+1)) / (s+1)`` for ``s >= 0``."""
    return math.pi * R ** (2 * (s + 1)) / (s + 1)


def isometry_residual(j: int, w: WeightSpec, R: float = 1.0,
                      cfg: QuadratureConfig | None = None) -> float:
    """Relative gap between the weighted norm of ``z^j`` and the plain norm of ``z^(j+m)``."""
    if j + w.m < 0:
        raise ValueError("isometry residual needs j + m >= 0")
    if w.m == 0:
        return 0.0
    a = weighted_monomial_norm(j, w, R, cfg)
    b = unweighted_norm(j + w.m, R, cfg)
    return abs(a - b) / b


class Side(str, Enum):
    AT_CENTER = "center"
    AT_INFINITY = "infinity"


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    residual: float
    predicted: float

    @property
    def leading_constant(self) -> float:
        return math.exp(self.intercept)

    def ok(self, tol: float = 0.05) -> bool:
        return abs(self.slope - self.predicted) < tol


def _horner(coeffs: Sequence[float], t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    for c in reversed(coeffs):
        out = out * t + c
    return out


def _values_and_derivs(b: PuiseuxBranch, t: np.ndarray):
    vals, ders = [], []
    for c in b.components:
        cs = c.to_float_coeffs()
        vals.append(_horner(cs, t))
        ders.append(_horner([k * a for k, a in enumerate(cs)][1:] or [0.0], t))
    return vals, ders


def _homogeneous(b: PuiseuxBranch, vals, ders):
    """Homogeneous coordinates of the branch and their derivatives."""
    n = len(vals) + 1
    chart = b.chart if b.chart is not None else 0
    center = b.center if b.center is not None else tuple(
        1.0 if i == chart else 0.0 for i in range(n)
    )
    P, dP = [], []
    it = iter(range(len(vals)))
    for i in range(n):
        if i == chart:
            P.append(np.ones_like(vals[0]))
            dP.append(np.zeros_like(vals[0]))
        else:
            k = next(it)
            P.append(vals[k] + float(center[i]))
            dP.append(ders[k])
    return P, dP


def pullback_density(b: PuiseuxBranch, side: Side, t: np.ndarray) -> np.ndarray:
    vals, ders = _values_and_derivs(b, t)
    if Side(side) == Side.AT_CENTER:
        return sum(d * d for d in ders)
    P, dP = _homogeneous(b, vals, ders)
    Z, dZ = P[-1], dP[-1]
    total = np.zeros_like(t)
    for Pi, dPi in zip(P[:-1], dP[:-1]):
        total = total + ((dPi * Z - Pi * dZ) / (Z * Z)) ** 2
    return total


def predicted_slope(b: PuiseuxBranch, side: Side) -> int:
    if Side(side) == Side.AT_CENTER:
        return 2 * (b.mult - 1)
    mN = b.components[-1].exact_order
    if mN is None:
        raise ValueError("branch does not meet the line at infinity properly")
    return -2 * (mN + 1)


def pullback_form_exponent(b: PuiseuxBranch, side: Side = Side.AT_CENTER,
                           cfg: QuadratureConfig | None = None) -> ExponentFit:
    """Least-squares fit of ``log density`` against ``log t`` on ``t = 2^-k``."""
    if b.symbolic:
        raise ValueError("symbolic branch: coefficients are not numeric")
    cfg = cfg or QuadratureConfig()
    ks = np.arange(cfg.fit_kmin, cfg.fit_kmax + 1, dtype=float)
    t = 2.0 ** (-ks)
    with np.errstate(all="ignore"):
        dens = pullback_density(b, side, t)
    if not np.all(np.isfinite(dens)) or np.any(dens <= 0):
        raise GridUnderflow(
            f"density of branch {b.branch_id} is not representable on t = 2^-{cfg.fit_kmin}..2^-{cfg.fit_kmax}"
        )
    x, y = np.log(t), np.log(dens)
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([slope, intercept]) - y) ** 2)))
    return ExponentFit(float(slope), float(intercept), resid, float(predicted_slope(b, side)))


# ---------------------------------------------------------------------------
# verification suite


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


def membership_checks(cfg: QuadratureConfig, jrange=range(-4, 5), mrange=range(-4, 5)):
    out = []
    for j in jrange:
        for m in mrange:
            val = weighted_monomial_norm(j, WeightSpec(m), 1.0, cfg)
            finite = val is not Divergent
            expected = j + m >= 0
            detail = {"j": j, "m": m, "finite": finite, "expected_finite": expected}
            ok = finite == expected
            if finite and expected:
                exact = closed_form_norm(j + m)
                rel = abs(val - exact) / exact
                detail.update(value=float(val), closed_form=exact, rel_error=rel)
                ok = ok and rel < cfg.rel_tol
            out.append(CheckResult(f"membership j={j} m={m}", ok, detail))
    return out


ISOMETRY_PAIRS = tuple(
    (j, m) for j, m in [
        (3, -2), (0, 0), (1, 2), (0, 1), (2, -2), (4, -1), (-1, 2), (-3, 4), (5, 0), (2, 3),
        (1, -1), (-2, 3), (0, 4), (6, -3), (3, 1), (-4, 4), (2, 2), (7, -7), (1, 5), (-1, 1),
    ]
)


def isometry_checks(cfg: QuadratureConfig, pairs=ISOMETRY_PAIRS):
    out = []
    for j, m in pairs:
        r = isometry_residual(j, WeightSpec(m), 1.0, cfg)
        out.append(CheckResult(f"isometry j={j} m={m}", r < cfg.isometry_tol,
                               {"j": j, "m": m, "residual": r}))
    return out


def convergence_checks(cfg: QuadratureConfig, cases=((0, 0), (2, -1), (3, 1))):
    out = []
    fine = cfg.doubled()
    for j, m in cases:
        a = weighted_monomial_norm(j, WeightSpec(m), 1.0, cfg)
        b = weighted_monomial_norm(j, WeightSpec(m), 1.0, fine)
        change = abs(a - b) / abs(b)
        out.append(CheckResult(f"convergence j={j} m={m}", change < cfg.rel_tol / 2,
                               {"j": j, "m": m, "change": change}))
    return out


def exponent_checks(cfg: QuadratureConfig, branches: Sequence[tuple[PuiseuxBranch, Side]]):
    out = []
    for b, side in branches:
        if b.symbolic:
            out.append(CheckResult(f"exponent {b.branch_id}", True, {"skipped": "symbolic"}))
            continue
        fit = pullback_form_exponent(b, side, cfg)
        out.append(CheckResult(
            f"exponent {b.branch_id} ({Side(side).value})",
            fit.ok(cfg.slope_tol),
            {"slope": fit.slope, "predicted": fit.predicted, "intercept": fit.intercept,
             "residual": fit.residual},
        ))
    return out
