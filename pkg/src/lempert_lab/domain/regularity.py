"""Sampled regularity budget of a defining function near the boundary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Domain


@dataclass(frozen=True)
class RegularityBudget:
    """Lower bound ``epsilon`` for the gradient (and Hölder exponent/constant
    ``epsilon``, ``1/epsilon``) on the band ``|signed distance| <= band_width``."""

    epsilon: float
    band_width: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.band_width > 0:
            raise ValueError("band_width must be positive")


@dataclass(frozen=True)
class RegularityReport:
    gradient_min: float
    holder_constant: float
    normal_map_injective: bool
    passed: bool
    samples: int

    @property
    def pass_(self) -> bool:
        return self.passed


def band_points(D: Domain, band_width, along=512, across=9):
    """Points ``gamma(t) + s n(t)`` for |s| <= band_width."""
    t = (np.arange(along) + 0.5) / along
    g = D.boundary
    with np.errstate(all="ignore"):
        n = 1j * g.derivative(t)
        n = n / np.abs(n)
    ok = np.isfinite(n)
    t, n = t[ok], n[ok]
    s = np.linspace(-band_width, band_width, across)
    pts = g(t)[:, None] + s[None, :] * n[:, None]
    return pts.ravel(), np.repeat(t, across), np.tile(s, t.size)


def regularity_check(D: Domain, budget: RegularityBudget, along=512, across=9) -> RegularityReport:
    """Check gradient and Hölder bounds of the defining function on the band.

    The Hölder quotient is taken over pairs closer than ``band_width``. If
    the normal map is not injective on the band the report fails and says
    so instead of guessing.
    """
    eps = budget.epsilon
    pts, _, s = band_points(D, budget.band_width, along, across)
    near = D.nearest(pts)
    injective = bool(np.all(near.distance >= np.abs(s) * (1 - 1e-6) - 1e-12 * D.diameter))
    grad = np.asarray(D.defining_gradient(pts), dtype=complex)
    gnorm = np.abs(grad)
    gmin = float(np.min(gnorm))
    hq = 0.0
    for start in range(0, pts.size, 512):
        sl = slice(start, start + 512)
        dz = np.abs(pts[sl, None] - pts[None, :])
        dg = np.abs(grad[sl, None] - grad[None, :])
        close = (dz > 0) & (dz <= budget.band_width)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(close, dg / dz**eps, 0.0)
        hq = max(hq, float(np.max(q)))
    passed = injective and gmin >= eps and hq <= 1.0 / eps
    return RegularityReport(gmin, hq, injective, passed, int(pts.size))
