"""Exact singularity invariants and Bergman-space dimensions for plane curves."""

from .algebra import Poly, TruncSeries, resultant, series_compose
from .curves import CurveModel, analyze_implicit, curve_from_map, curve_from_points
from .dichotomy import (
    Ambient,
    ComplementKind,
    DichotomyReport,
    OpenSetSpec,
    PointClass,
    decide,
    h0_bounds,
    h0_rational,
    l2_delta,
    semigroup_gap_count,
    triviality_test,
)
from .divisors import (
    Divisor,
    affine_multiplicity_divisor,
    degree_consistency,
    multiplicity_divisor,
    open_set_restriction,
)
from .invariants import (
    SingularPointRecord,
    delta_point,
    genus_of_normalization,
    intersection_multiplicity,
    value_semigroup,
)
from .puiseux import PuiseuxBranch, find_special_points, newton_puiseux, validate_branch

__version__ = "0.1.0"
