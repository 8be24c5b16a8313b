"""The planar pullback domain ``H = G ∩ R`` and its smoothing.

``G = psi^{-1}(D)`` lives in the zeta-plane, with ``rho = r ∘ psi`` as
defining function, and ``R = {|x| < 1 + delta, |y| < delta'}``. Near
``A = 1`` and ``B = -1`` the level curve ``rho = -mu`` is a graph
``x = x_R(y)`` and ``x = x_L(y)``; ``H`` is bounded by these two arcs and by
the segments ``y = ±delta'``. A tiny negative level ``mu`` keeps the
spline-approximated arcs strictly inside ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from ..domain import curves
from ..domain.core import Domain
from ..errors import InvalidDomainError
from .curve import PerturbedDisc
from .space import Space

LEVEL = 1e-9


@dataclass(frozen=True)
class PullbackDomain:
    base: Domain
    delta: float
    delta_prime: float
    smoothing_radius: float
    corner_offsets: tuple
    arc_right: CubicSpline
    arc_left: CubicSpline

    def contains_rectangle(self, samples=41) -> bool:
        """Whether ``R_{-delta, delta'} = {|x| < 1 - delta/2, |y| < delta'}`` lies in ``H``."""
        x = np.linspace(-1 + self.delta / 2, 1 - self.delta / 2, samples)
        y = np.linspace(-self.delta_prime, self.delta_prime, samples)[1:-1]
        Z = (x[:, None] + 1j * y[None, :]).ravel()
        return bool(np.all(self.base.signed_distance(Z) > 0))

    def on_level_arcs(self, zeta, tol=1e-9):
        """Whether boundary points lie on the unsmoothed parts of the two level arcs."""
        zeta = np.asarray(zeta, dtype=complex)
        lim = self.delta_prime - max(self.corner_offsets)
        y = zeta.imag
        inside = np.abs(y) < lim
        xr = self.arc_right(np.clip(y, -self.delta_prime, self.delta_prime))
        xl = self.arc_left(np.clip(y, -self.delta_prime, self.delta_prime))
        return inside & ((np.abs(zeta.real - xr) < tol) | (np.abs(zeta.real - xl) < tol))


def _rho(space: Space, disc: PerturbedDisc):
    def rho(zeta):
        return space.defining(disc(zeta))

    return rho


def max_strip_height(D, disc: PerturbedDisc, delta: float, levels: int = 65) -> float:
    """Largest sampled ``h`` with ``{|x| <= 1 - delta/2, |y| <= h}`` inside ``G``."""
    space = D if isinstance(D, Space) else Space(D)
    rho = _rho(space, disc)
    x = np.linspace(-1 + delta / 2, 1 - delta / 2, 81)
    ys = np.linspace(0.0, 1.0, levels)
    vals = rho(x[None, :] + 1j * ys[:, None]) < 0
    vals &= rho(x[None, :] - 1j * ys[:, None]) < 0
    ok = np.all(vals, axis=1)
    bad = np.nonzero(~ok)[0]
    return float(ys[bad[0] - 1]) if bad.size else float(ys[-1])


def _crossings(rho, y, x0, x1, samples=257):
    """Sign changes of ``rho`` along horizontal segments ``x0 < x < x1``."""
    x = np.linspace(x0, x1, samples)
    vals = rho(x[None, :] + 1j * np.asarray(y)[:, None])
    s = vals < 0
    return np.sum(s[:, 1:] != s[:, :-1], axis=1), x, vals


def _level_arc(rho, ys, x0, x1, side):
    """Spline of the unique root of ``rho = -LEVEL`` on each segment."""
    count, x, vals = _crossings(lambda z: rho(z) + LEVEL, ys, x0, x1)
    if np.any(count != 1):
        bad = float(ys[np.argmax(count != 1)])
        raise InvalidDomainError(f"level curve crosses the segment at y={bad:.4g} {int(count[np.argmax(count != 1)])} times")
    roots = np.empty(ys.size)
    for i, y in enumerate(ys):
        k = int(np.nonzero((vals[i, 1:] < 0) != (vals[i, :-1] < 0))[0][0])
        roots[i] = brentq(lambda t: float(rho(np.array([t + 1j * y]))[0]) + LEVEL, x[k], x[k + 1], xtol=1e-15)
    # interior side: rho < 0 towards the origin
    if side > 0 and not np.all(vals[:, 0] < 0) or side < 0 and not np.all(vals[:, -1] < 0):
        raise InvalidDomainError("level curve has the domain on the wrong side")
    return CubicSpline(ys, roots)


def pullback_domain(
    D,
    disc: PerturbedDisc,
    delta: float,
    delta_prime: float,
    sample_count: int = 1024,
    arc_nodes: int = 129,
) -> PullbackDomain:
    """Assemble and smooth ``H = G ∩ R_{2 delta, delta'}``.

    Raises :class:`InvalidDomainError` when the single-crossing test fails
    on some horizontal segment of ``S_delta(A)`` or ``S_delta(B)`` or when
    ``R_{-delta, delta'}`` is not inside ``G``; callers shrink the sizes.
    """
    space = D if isinstance(D, Space) else Space(D)
    if not (0 < delta_prime <= delta < 1):
        raise InvalidDomainError("need 0 < delta' <= delta < 1")
    rho = _rho(space, disc)
    # single crossing on every sampled segment of both squares
    ys_sq = np.linspace(-delta, delta, 65)[1:-1]
    for x0, x1 in ((1 - delta, 1 + delta), (-1 - delta, -1 + delta)):
        count, _, _ = _crossings(rho, ys_sq, x0, x1)
        if np.any(count != 1):
            raise InvalidDomainError("single-crossing test failed")
    # R_{-delta, delta'} inside G
    x = np.linspace(-1 + delta / 2, 1 - delta / 2, 81)
    y = np.linspace(-delta_prime, delta_prime, 21)
    if not np.all(rho((x[:, None] + 1j * y[None, :]).ravel()) < 0):
        raise InvalidDomainError("rectangle not contained in the pullback")
    ys = np.cos(np.linspace(np.pi, 0, arc_nodes)) * delta_prime
    right = _level_arc(rho, ys, 1 - delta, 1 + delta, +1)
    left = _level_arc(rho, ys, -1 - delta, -1 + delta, -1)
    dr, dl = right.derivative(), left.derivative()
    dp = delta_prime

    bottom = curves.segment_piece(complex(left(-dp), -dp), complex(right(-dp), -dp))
    arc_r = curves.Piece(lambda s: right(s) + 1j * np.asarray(s), lambda s: dr(s) + 1j, -dp, dp)
    top = curves.segment_piece(complex(right(dp), dp), complex(left(dp), dp))
    arc_l = curves.Piece(lambda s: left(-np.asarray(s)) - 1j * np.asarray(s), lambda s: -dl(-np.asarray(s)) - 1j, -dp, dp)

    radius = dp / 4
    for _ in range(30):
        try:
            (b1, f1, r1), o1 = curves.fillet(bottom, arc_r, radius)
            (r2, f2, t1), o2 = curves.fillet(r1, top, radius)
            (t2, f3, l1), o3 = curves.fillet(t1, arc_l, radius)
            (l2, f4, b2), o4 = curves.fillet(l1, b1, radius)
        except InvalidDomainError:
            radius /= 2
            continue
        offsets = o1 + o2 + o3 + o4
        if max(offsets) <= dp / 2:
            break
        radius /= 2
    else:
        raise InvalidDomainError("corner smoothing failed")
    pieces = [f1, r2, f2, t2, f3, l2, f4, b2]
    curve = curves.piecewise_curve(pieces, sample_count)
    H = Domain(curve, kind="pullback", params={"delta": delta, "delta_prime": dp})
    return PullbackDomain(H, float(delta), float(dp), radius, tuple(offsets), right, left)
