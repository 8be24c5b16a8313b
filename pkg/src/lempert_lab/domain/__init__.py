from .ball import BallDomain
from .build import build_domain, disc, ellipse, example4, perturbed_ellipse, smoothed_rectangle, unit_disc
from .cones import ConeDomainPair, cone_domains
from .core import Domain, NearestPoint, RigidMotion, inward_normal, normalize_at, signed_distance
from .curves import BoundaryCurve
from .regularity import RegularityBudget, RegularityReport, regularity_check

__all__ = [
    "BallDomain",
    "BoundaryCurve",
    "ConeDomainPair",
    "Domain",
    "NearestPoint",
    "RegularityBudget",
    "RegularityReport",
    "RigidMotion",
    "build_domain",
    "cone_domains",
    "disc",
    "ellipse",
    "example4",
    "inward_normal",
    "normalize_at",
    "perturbed_ellipse",
    "regularity_check",
    "signed_distance",
    "smoothed_rectangle",
    "unit_disc",
]
