"""Polynomial discs, interpolation, pullback domains and upper bounds."""

from .bound import (
    ConstantEstimate,
    DiscBuilder,
    deep_point,
    disc_sample,
    lempert_upper_bound,
    theorem1_constant,
    theorem1_samples,
)
from .curve import (
    AdmissibilityReport,
    PerturbedDisc,
    PolynomialCurve,
    admissibility_check,
    lemma3_curve,
    perturbed_disc,
)
from .interpolation import DiscInterpolation, InterpolationSystem, solve_interpolation
from .pullback import PullbackDomain, max_strip_height, pullback_domain
from .space import Space

__all__ = [
    "AdmissibilityReport",
    "ConstantEstimate",
    "DiscBuilder",
    "DiscInterpolation",
    "InterpolationSystem",
    "PerturbedDisc",
    "PolynomialCurve",
    "PullbackDomain",
    "Space",
    "admissibility_check",
    "deep_point",
    "disc_sample",
    "lemma3_curve",
    "lempert_upper_bound",
    "max_strip_height",
    "perturbed_disc",
    "pullback_domain",
    "solve_interpolation",
    "theorem1_constant",
    "theorem1_samples",
]
