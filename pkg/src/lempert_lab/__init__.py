"""Numerical laboratory for the Lempert function near the boundary of smooth domains.

Subpackages
-----------
domain
    Planar domains from curves, defining functions or tables; the unit ball.
conformal
    Riemann maps onto the unit disc (exact, explicit and Kerzman-Stein).
metrics
    Lempert function, Kobayashi distance and metric, boundary ratios.
discs
    Polynomial discs through prescribed points and the resulting upper bounds.
experiments
    The command-line experiment harness.
"""

from . import conformal, discs, domain, metrics
from .conformal import NumericalRiemannMap, build_riemann_map, map_forward, map_inverse
from .discs import DiscBuilder, lemma3_curve, lempert_upper_bound, solve_interpolation, theorem1_constant
from .domain import BallDomain, Domain, build_domain, ellipse, example4, smoothed_rectangle, unit_disc
from .errors import (
    AdmissibilityError,
    BoundaryProximityError,
    ConvergenceError,
    InvalidDomainError,
    LempertLabError,
    OutsideDomainError,
    StageError,
)
from .kernels import BACKEND
from .metrics import (
    MetricSample,
    boundary_ratios,
    estimate1_ratio,
    kobayashi_distance,
    kobayashi_royden,
    lempert_ball,
    lempert_disc,
    lempert_planar,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AdmissibilityError",
    "BallDomain",
    "BoundaryProximityError",
    "ConvergenceError",
    "DiscBuilder",
    "Domain",
    "InvalidDomainError",
    "LempertLabError",
    "MetricSample",
    "NumericalRiemannMap",
    "OutsideDomainError",
    "StageError",
    "boundary_ratios",
    "build_domain",
    "build_riemann_map",
    "conformal",
    "discs",
    "domain",
    "ellipse",
    "estimate1_ratio",
    "example4",
    "kobayashi_distance",
    "kobayashi_royden",
    "lemma3_curve",
    "lempert_ball",
    "lempert_disc",
    "lempert_planar",
    "lempert_upper_bound",
    "map_forward",
    "map_inverse",
    "metrics",
    "smoothed_rectangle",
    "solve_interpolation",
    "theorem1_constant",
    "unit_disc",
]
