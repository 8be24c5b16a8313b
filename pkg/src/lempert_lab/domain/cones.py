"""Comparison cones ``{|z| < 2 delta, x > |y|^(1 + delta)}`` near a boundary point."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidDomainError
from . import curves
from .core import Domain


@dataclass(frozen=True)
class ConeDomainPair:
    """Inner cone ``G^i`` (smoothed) and the reflected cone ``-G^i``.

    ``G^e`` is the complement of the closure of ``outer_complement``; use
    :meth:`in_outer` for membership.
    """

    delta: float
    inner: Domain
    outer_complement: Domain
    fillet_radius: float
    tangency_offsets: tuple

    def in_inner_raw(self, z):
        """Membership in the unsmoothed inner cone."""
        z = np.asarray(z, dtype=complex)
        d = self.delta
        return (np.abs(z) < 2 * d) & (z.real > np.abs(z.imag) ** (1 + d))

    def in_inner(self, z):
        return self.inner.contains(z)

    def in_outer(self, z):
        """Membership in ``G^e``, the complement of ``closure(-G^i)``."""
        return self.outer_complement.signed_distance(z) < 0


def _corner_y(delta):
    # |z| = 2 delta on the curve x = y^(1 + delta), y > 0
    from scipy.optimize import brentq

    r = 2 * delta
    return brentq(lambda y: y ** (2 + 2 * delta) + y * y - r * r, 0.0, r)


def cone_domains(delta: float, sample_count: int = 2048) -> ConeDomainPair:
    """Smoothed comparison cones for the boundary-distance estimate.

    The tip at 0 is kept (the power curve is C^1 there, which is all the
    comparison needs); the two corners where the power curve meets the
    circle ``|z| = 2 delta`` are rounded by circular fillets tangent within
    ``delta / 10`` of each corner.
    """
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise InvalidDomainError("delta must lie in (0, 1)")
    e = 1.0 + delta
    yc = _corner_y(delta)
    zc = yc**e + 1j * yc

    def p(s):
        s = np.asarray(s, dtype=float)
        return np.abs(s) ** e + 1j * s

    def dp(s):
        s = np.asarray(s, dtype=float)
        return e * np.sign(s) * np.abs(s) ** delta + 1j

    # counterclockwise: lower power arc (y: 0 -> -yc), circle arc, upper power arc (y: yc -> 0)
    lower = curves.Piece(lambda s: p(-s), lambda s: -dp(-s), 0.0, yc)
    phi = float(np.angle(zc))
    arc = curves.arc_piece(0j, 2 * delta, -phi, phi)
    upper = curves.Piece(lambda s: p(-s), lambda s: -dp(-s), -yc, 0.0)

    limit = delta / 10
    radius = limit
    for _ in range(40):
        try:
            (l1, a1, c1), off1 = curves.fillet(lower, arc, radius)
            (c2, a2, u2), off2 = curves.fillet(c1, upper, radius)
        except InvalidDomainError:
            radius *= 0.5
            continue
        if max(off1 + off2) <= limit:
            break
        radius *= 0.5
    else:
        raise InvalidDomainError("cone smoothing failed")
    pieces = [l1, a1, c2, a2, u2]
    inner_curve = curves.piecewise_curve(pieces, sample_count)
    inner = Domain(inner_curve, kind="cone_inner", params={"delta": delta})
    reflected = inner_curve.transformed(0j, -1.0 + 0j)
    outer = Domain(reflected, kind="cone_reflected", params={"delta": delta})
    return ConeDomainPair(delta, inner, outer, radius, tuple(off1 + off2))
