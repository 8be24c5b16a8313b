"""Closed boundary curves.

A :class:`BoundaryCurve` is a counterclockwise Jordan curve parametrized by
``t`` in ``[0, 1)`` together with its tangent. Constructors for the analytic
families used by the experiments live here, as does a piecewise builder with
circular-arc fillets used for the cone and pullback domains.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
import shapely
from scipy.interpolate import CubicSpline
from scipy.optimize import root

from ..errors import InvalidDomainError

TWO_PI = 2.0 * np.pi


def _readonly(a):
    a = np.asarray(a)
    a.setflags(write=False)
    return a


class BoundaryCurve:
    """Closed immersed Jordan curve ``gamma: [0, 1) -> C``.

    Parameters
    ----------
    gamma, dgamma : callable
        Vectorized position and derivative with respect to ``t``. Both must
        be 1-periodic.
    holder_exponent : float
        Hölder exponent of ``dgamma`` claimed for the curve, in (0, 1].
    sample_count : int
        Number of equispaced samples used for distance scans and
        quadrature.
    sample_offset : float
        Shift of the sample grid, ``t_k = (k + offset) / N``. Used to keep
        the samples off a point where ``dgamma`` is singular.
    validate : bool
        Run the closedness, immersion and simplicity checks.
    """

    def __init__(
        self,
        gamma: Callable,
        dgamma: Callable,
        holder_exponent: float = 1.0,
        sample_count: int = 1024,
        sample_offset: float = 0.0,
        validate: bool = True,
    ):
        if not 0.0 < holder_exponent <= 1.0:
            raise InvalidDomainError("holder exponent must lie in (0, 1]")
        if sample_count < 8:
            raise InvalidDomainError("sample_count must be at least 8")
        self._gamma = gamma
        self._dgamma = dgamma
        self.holder_exponent = float(holder_exponent)
        self.sample_count = int(sample_count)
        self.sample_offset = float(sample_offset)
        t = (np.arange(self.sample_count) + self.sample_offset) / self.sample_count
        self.t = _readonly(t)
        self.points = _readonly(np.asarray(gamma(t), dtype=complex))
        self.tangents = _readonly(np.asarray(dgamma(t), dtype=complex))
        if validate:
            self._validate()

    def __call__(self, t):
        return self._gamma(np.mod(t, 1.0))

    def derivative(self, t):
        return self._dgamma(np.mod(t, 1.0))

    def second_derivative(self, t, h=1e-6):
        """Central difference of the tangent."""
        return (self.derivative(t + h) - self.derivative(t - h)) / (2 * h)

    def _validate(self):
        p, d = self.points, self.tangents
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(d))):
            raise InvalidDomainError("unbounded or undefined boundary samples")
        scale = np.max(np.abs(p - p.mean())) or 1.0
        if abs(self._gamma(np.array([0.0]))[0] - self._gamma(np.array([1.0 - 1e-12]))[0]) > 1e-6 * scale:
            raise InvalidDomainError("curve is not closed")
        if np.min(np.abs(d)) <= 1e-12 * scale:
            raise InvalidDomainError("vanishing tangent")
        ring = shapely.LinearRing(np.column_stack([p.real, p.imag]))
        if not ring.is_simple:
            raise InvalidDomainError("non-simple curve")
        if self.signed_area <= 0:
            raise InvalidDomainError("curve must be oriented counterclockwise")

    @cached_property
    def signed_area(self) -> float:
        p = self.points
        q = np.roll(p, -1)
        return 0.5 * float(np.sum(p.real * q.imag - q.real * p.imag))

    @cached_property
    def max_segment(self) -> float:
        return float(np.max(np.abs(np.roll(self.points, -1) - self.points)))

    @cached_property
    def diameter(self) -> float:
        p = self.points
        hull = shapely.MultiPoint(np.column_stack([p.real, p.imag])).convex_hull
        h = np.asarray(hull.exterior.coords)
        hz = h[:, 0] + 1j * h[:, 1]
        return float(np.max(np.abs(hz[:, None] - hz[None, :])))

    @cached_property
    def holder_constant(self) -> float:
        """Largest sampled quotient |g'(s) - g'(t)| / |s - t|^eps."""
        d = self.tangents
        t = self.t
        best = 0.0
        for start in range(0, t.size, 256):
            sl = slice(start, start + 256)
            dt = np.abs(t[sl, None] - t[None, :])
            dt = np.minimum(dt, 1.0 - dt)
            num = np.abs(d[sl, None] - d[None, :])
            with np.errstate(divide="ignore", invalid="ignore"):
                q = np.where(dt > 0, num / dt**self.holder_exponent, 0.0)
            best = max(best, float(np.max(q)))
        return best

    def transformed(self, shift: complex, rotation: complex) -> "BoundaryCurve":
        """Curve ``(gamma(t) - shift) * rotation`` with ``|rotation| = 1``."""
        g, dg = self._gamma, self._dgamma
        return BoundaryCurve(
            lambda t: (g(t) - shift) * rotation,
            lambda t: dg(t) * rotation,
            self.holder_exponent,
            self.sample_count,
            self.sample_offset,
            validate=False,
        )

    def resampled(self, sample_count: int) -> "BoundaryCurve":
        return BoundaryCurve(
            self._gamma,
            self._dgamma,
            self.holder_exponent,
            sample_count,
            self.sample_offset * sample_count / self.sample_count,
            validate=False,
        )


# ---------------------------------------------------------------------------
# analytic families


def circle_curve(center=0j, radius=1.0, sample_count=1024):
    center = complex(center)
    return BoundaryCurve(
        lambda t: center + radius * np.exp(TWO_PI * 1j * t),
        lambda t: TWO_PI * 1j * radius * np.exp(TWO_PI * 1j * t),
        1.0,
        sample_count,
    )


def ellipse_curve(a, b, center=0j, angle=0.0, sample_count=1024):
    rot = np.exp(1j * angle)
    center = complex(center)
    return BoundaryCurve(
        lambda t: center + rot * (a * np.cos(TWO_PI * t) + 1j * b * np.sin(TWO_PI * t)),
        lambda t: rot * TWO_PI * (-a * np.sin(TWO_PI * t) + 1j * b * np.cos(TWO_PI * t)),
        1.0,
        sample_count,
    )


def superellipse_curve(a, b, exponent=8, sample_count=1024):
    """Star-shaped curve ``(x/a)^p + (y/b)^p = 1`` for even ``p``.

    With an even integer exponent the polar radius is real-analytic, so this
    is a smoothed rectangle with spectrally resolvable boundary.
    """
    p = int(exponent)
    if p < 2 or p % 2:
        raise InvalidDomainError("smoothed rectangle exponent must be an even integer >= 2")

    def parts(t):
        th = TWO_PI * t
        c, s = np.cos(th), np.sin(th)
        f = (c / a) ** p + (s / b) ** p
        df = p * (c / a) ** (p - 1) * (-s / a) + p * (s / b) ** (p - 1) * (c / b)
        r = f ** (-1.0 / p)
        dr = -(1.0 / p) * f ** (-1.0 / p - 1.0) * df
        return th, r, dr

    def gamma(t):
        th, r, _ = parts(t)
        return r * np.exp(1j * th)

    def dgamma(t):
        th, r, dr = parts(t)
        return TWO_PI * (dr + 1j * r) * np.exp(1j * th)

    return BoundaryCurve(gamma, dgamma, 1.0, sample_count)


def perturbed_ellipse_curve(a, b, amplitude=0.0, frequency=3, sample_count=1024):
    """Ellipse with a radial bump ``1 + amplitude * cos(frequency * theta)``."""

    def gamma(t):
        th = TWO_PI * t
        return (a * np.cos(th) + 1j * b * np.sin(th)) * (1 + amplitude * np.cos(frequency * th))

    def dgamma(t):
        th = TWO_PI * t
        e = a * np.cos(th) + 1j * b * np.sin(th)
        de = -a * np.sin(th) + 1j * b * np.cos(th)
        m = 1 + amplitude * np.cos(frequency * th)
        dm = -amplitude * frequency * np.sin(frequency * th)
        return TWO_PI * (de * m + e * dm)

    return BoundaryCurve(gamma, dgamma, 1.0, sample_count)


def image_curve(f, df, sample_count=1024, phase=0.0, holder_exponent=1.0, sample_offset=0.0):
    """Image of the unit circle under a map ``f`` analytic on the disc.

    ``phase`` rotates the parametrization, ``gamma(t) = f(exp(2 pi i (t + phase)))``.
    """

    def gamma(t):
        return f(np.exp(TWO_PI * 1j * (t + phase)))

    def dgamma(t):
        e = np.exp(TWO_PI * 1j * (t + phase))
        return TWO_PI * 1j * e * df(e)

    return BoundaryCurve(gamma, dgamma, holder_exponent, sample_count, sample_offset)


def table_curve(t, z, interpolation="spline", sample_count=1024):
    """Curve interpolating a parametrization table.

    Parameters
    ----------
    t : array of floats in [0, 1)
        Strictly increasing parameters.
    z : complex array
        Boundary points. The table is reversed if it runs clockwise.
    interpolation : {"spline", "linear", "fourier"}
        Periodic cubic spline, piecewise linear, or trigonometric
        interpolation (the latter needs equispaced ``t``).
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=complex)
    if t.ndim != 1 or t.size != z.size or t.size < 4:
        raise InvalidDomainError("parametrization table needs at least 4 rows")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(z))):
        raise InvalidDomainError("unbounded parametrization table")
    if np.any(np.diff(t) <= 0) or t[0] < 0 or t[-1] >= 1:
        raise InvalidDomainError("table parameters must increase within [0, 1)")
    p = z
    q = np.roll(p, -1)
    if np.sum(p.real * q.imag - q.real * p.imag) < 0:
        t = np.sort(np.mod(-t, 1.0))
        z = z[::-1]
        if t[0] != 0 and np.isclose(t[-1], 1.0):
            t[-1] = 0.0
            t = np.roll(t, 1)
            z = np.roll(z, 1)

    if interpolation == "spline":
        tt = np.append(t, t[0] + 1.0)
        zz = np.append(z, z[0])
        spl = CubicSpline(tt, np.column_stack([zz.real, zz.imag]), bc_type="periodic")
        dspl = spl.derivative()

        def gamma(s):
            s = np.mod(s - t[0], 1.0) + t[0]
            v = spl(s)
            return v[..., 0] + 1j * v[..., 1]

        def dgamma(s):
            s = np.mod(s - t[0], 1.0) + t[0]
            v = dspl(s)
            return v[..., 0] + 1j * v[..., 1]

        exponent = 1.0
    elif interpolation == "linear":
        tt = np.append(t, t[0] + 1.0)
        zz = np.append(z, z[0])
        slopes = np.diff(zz) / np.diff(tt)

        def _seg(s):
            s = np.mod(np.asarray(s, dtype=float) - t[0], 1.0) + t[0]
            k = np.clip(np.searchsorted(tt, s, side="right") - 1, 0, t.size - 1)
            return s, k

        def gamma(s):
            s, k = _seg(s)
            return zz[k] + slopes[k] * (s - tt[k])

        def dgamma(s):
            _, k = _seg(s)
            return slopes[k]

        exponent = 1.0
    elif interpolation == "fourier":
        n = t.size
        if not np.allclose(t, t[0] + np.arange(n) / n, atol=1e-12):
            raise InvalidDomainError("fourier interpolation needs equispaced parameters")
        c = np.fft.fft(z) / n
        k = np.fft.fftfreq(n, 1.0 / n)
        if n % 2 == 0:
            c[n // 2] *= 0.5
            c = np.append(c, c[n // 2])
            k = np.append(k, n // 2)
            k[n // 2] = -n // 2

        def gamma(s):
            s = np.asarray(s, dtype=float)
            e = np.exp(TWO_PI * 1j * np.multiply.outer(s - t[0], k))
            return e @ c

        def dgamma(s):
            s = np.asarray(s, dtype=float)
            e = np.exp(TWO_PI * 1j * np.multiply.outer(s - t[0], k))
            return e @ (TWO_PI * 1j * k * c)

        exponent = 1.0
    else:
        raise InvalidDomainError(f"unknown interpolation {interpolation!r}")
    return BoundaryCurve(gamma, dgamma, exponent, sample_count)


# ---------------------------------------------------------------------------
# piecewise curves


@dataclass
class Piece:
    """One smooth piece ``pos(s)``, ``s`` in ``[s0, s1]``."""

    pos: Callable
    der: Callable
    s0: float
    s1: float

    def tangent(self, s):
        d = self.der(s)
        return d / np.abs(d)

    def restricted(self, s0, s1):
        return Piece(self.pos, self.der, s0, s1)


def segment_piece(p, q):
    p, q = complex(p), complex(q)
    return Piece(
        lambda s: p + (q - p) * np.asarray(s, dtype=float),
        lambda s: np.full(np.shape(s), q - p, dtype=complex),
        0.0,
        1.0,
    )


def arc_piece(center, radius, phi0, phi1):
    center = complex(center)
    return Piece(
        lambda s: center + radius * np.exp(1j * np.asarray(s, dtype=float)),
        lambda s: 1j * radius * np.exp(1j * np.asarray(s, dtype=float)),
        float(phi0),
        float(phi1),
    )


def fillet(incoming: Piece, outgoing: Piece, radius: float):
    """Round the corner where ``incoming`` ends and ``outgoing`` starts.

    Finds the circle of the given radius tangent to both pieces on the left
    (interior) side and returns the trimmed pieces plus the arc, together
    with the distances from the corner to the two tangency points.
    """
    corner = complex(incoming.pos(np.array([incoming.s1]))[0])
    t_in = complex(incoming.tangent(np.array([incoming.s1]))[0])
    t_out = complex(outgoing.tangent(np.array([outgoing.s0]))[0])
    turn = np.angle(t_out / t_in)
    if turn <= 0:
        raise InvalidDomainError("fillet requires a convex corner")
    interior = np.pi - turn
    back = radius / np.tan(interior / 2)
    sp_in = abs(complex(incoming.der(np.array([incoming.s1]))[0]))
    sp_out = abs(complex(outgoing.der(np.array([outgoing.s0]))[0]))
    x0 = np.array([incoming.s1 - back / sp_in, outgoing.s0 + back / sp_out])

    def centers(x):
        a = np.array([x[0]])
        b = np.array([x[1]])
        ca = incoming.pos(a)[0] + radius * 1j * incoming.tangent(a)[0]
        cb = outgoing.pos(b)[0] + radius * 1j * outgoing.tangent(b)[0]
        return ca, cb

    def eqs(x):
        ca, cb = centers(x)
        d = ca - cb
        return [d.real, d.imag]

    sol = root(eqs, x0, method="hybr", options={"xtol": 1e-14})
    sa, sb = sol.x
    ca, cb = centers(sol.x)
    # hybr reports no progress when it starts next to the root; judge by the residual
    converged = abs(ca - cb) <= 1e-10 * radius
    if not (converged and incoming.s0 < sa < incoming.s1 and outgoing.s0 < sb < outgoing.s1):
        raise InvalidDomainError("fillet construction failed")
    c, _ = centers(sol.x)
    pa = complex(incoming.pos(np.array([sa]))[0])
    pb = complex(outgoing.pos(np.array([sb]))[0])
    phi0 = np.angle(pa - c)
    phi1 = np.angle(pb - c)
    while phi1 <= phi0:
        phi1 += TWO_PI
    pieces = (
        incoming.restricted(incoming.s0, sa),
        arc_piece(c, radius, phi0, phi1),
        outgoing.restricted(sb, outgoing.s1),
    )
    return pieces, (abs(pa - corner), abs(pb - corner))


class _ArcLengthPiece:
    """Approximately arc-length reparametrization of a piece.

    ``s(sigma)`` is a cubic spline through a dense arc-length table;
    position and derivative use the same spline, so they are consistent.
    """

    def __init__(self, piece: Piece, table_size=801):
        from scipy.integrate import cumulative_simpson

        s = np.linspace(piece.s0, piece.s1, table_size)
        speed = np.abs(piece.der(s))
        sigma = cumulative_simpson(speed, x=s, initial=0.0)
        self.length = float(sigma[-1])
        self.piece = piece
        self._s = CubicSpline(sigma / self.length, s)
        self._ds = self._s.derivative()

    def pos(self, u):
        return self.piece.pos(self._s(u))

    def der(self, u):
        return self.piece.der(self._s(u)) * self._ds(u)


def piecewise_curve(pieces: Sequence[Piece], sample_count=1024, holder_exponent=1.0):
    """Closed curve through consecutive C^1 pieces, arc-length parametrized."""
    parts = [_ArcLengthPiece(p) for p in pieces]
    lengths = np.array([p.length for p in parts])
    edges = np.concatenate([[0.0], np.cumsum(lengths) / lengths.sum()])

    def locate(t):
        t = np.mod(np.asarray(t, dtype=float), 1.0)
        k = np.clip(np.searchsorted(edges, t, side="right") - 1, 0, len(parts) - 1)
        u = (t - edges[k]) / (edges[k + 1] - edges[k])
        return t, k, u

    def gamma(t):
        t, k, u = locate(t)
        out = np.empty(t.shape, dtype=complex)
        for j, p in enumerate(parts):
            m = k == j
            if np.any(m):
                out[m] = p.pos(u[m])
        return out

    def dgamma(t):
        t, k, u = locate(t)
        out = np.empty(t.shape, dtype=complex)
        for j, p in enumerate(parts):
            m = k == j
            if np.any(m):
                out[m] = p.der(u[m]) / (edges[j + 1] - edges[j])
        return out

    return BoundaryCurve(gamma, dgamma, holder_exponent, sample_count)
