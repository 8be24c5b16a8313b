"""Planar domains, boundary distance, normals and rigid normalization."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np
import shapely

from .. import kernels
from ..errors import InvalidDomainError
from .curves import BoundaryCurve

_GOLDEN = 0.5 * (3.0 - np.sqrt(5.0))


@dataclass(frozen=True)
class RigidMotion:
    """``z -> (z - shift) * rotation`` with ``|rotation| = 1``."""

    shift: complex = 0j
    rotation: complex = 1 + 0j

    def __call__(self, z):
        return (np.asarray(z) - self.shift) * self.rotation

    def inverse(self, z):
        return np.asarray(z) / self.rotation + self.shift

    @property
    def angle(self) -> float:
        return float(np.angle(self.rotation))


@dataclass(frozen=True)
class NearestPoint:
    t: np.ndarray
    point: np.ndarray
    distance: np.ndarray


class Domain:
    """Bounded Jordan domain with a counterclockwise boundary curve.

    Parameters
    ----------
    boundary : BoundaryCurve
    defining_function : callable, optional
        ``r(z)`` negative exactly inside. Defaults to minus the signed
        distance.
    defining_gradient : callable, optional
        Gradient of ``r`` encoded as ``r_x + i r_y``.
    kind : str
        Tag of the constructor that produced the domain ("disc", "ellipse",
        ...); used to choose exact conformal maps where they exist.
    params : dict
        Constructor parameters, kept for reporting.
    """

    def __init__(
        self,
        boundary: BoundaryCurve,
        defining_function: Optional[Callable] = None,
        defining_gradient: Optional[Callable] = None,
        kind: str = "curve",
        params: Optional[dict] = None,
    ):
        self.boundary = boundary
        self._r = defining_function
        self._grad_r = defining_gradient
        self.kind = kind
        self.params = dict(params or {})
        p = boundary.points
        self.bounding_box = self._refined_box()
        if not np.all(np.isfinite(self.bounding_box)):
            raise InvalidDomainError("unbounded domain")
        self._polygon = shapely.Polygon(np.column_stack([p.real, p.imag]))
        shapely.prepare(self._polygon)

    def __repr__(self):
        return f"Domain(kind={self.kind!r}, params={self.params!r})"

    # -- geometry ---------------------------------------------------------

    def _refined_box(self):
        g = self.boundary
        n = g.sample_count
        out = []
        for part, sign in ((np.real, -1), (np.real, 1), (np.imag, -1), (np.imag, 1)):
            vals = sign * part(g.points)
            k = int(np.argmax(vals))
            lo, hi = g.t[k] - 1.0 / n, g.t[k] + 1.0 / n
            ts = np.linspace(lo, hi, 201)
            for _ in range(3):
                v = sign * part(g(ts))
                j = int(np.argmax(v))
                lo, hi = ts[max(j - 1, 0)], ts[min(j + 1, ts.size - 1)]
                ts = np.linspace(lo, hi, 201)
            out.append(sign * float(np.max(sign * part(g(ts)))))
        xmin, xmax, ymin, ymax = out
        return np.array([xmin, xmax, ymin, ymax])

    @property
    def diameter(self) -> float:
        return self.boundary.diameter

    @cached_property
    def area(self) -> float:
        g = self.boundary
        dz = g.tangents / g.sample_count
        return float(0.5 * np.sum((np.conj(g.points) * dz).imag))

    def contains(self, z) -> np.ndarray:
        return self.signed_distance(z) > 0

    # -- distance ---------------------------------------------------------

    def nearest(self, z) -> NearestPoint:
        """Nearest boundary point by coarse scan plus local refinement.

        Among minimizers within rounding of each other the smallest
        parameter is returned.
        """
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        shape = z.shape
        z = z.ravel()
        g = self.boundary
        n = g.sample_count
        h = 1.0 / n
        i1, d1, i2, d2 = kernels.nearest_two(g.points, z, 2)
        t1, f1 = self._refine(z, g.t[i1], h)
        t, f = t1, f1
        # a second branch of the curve may hold the true minimizer
        other = d2 <= d1 + g.max_segment
        if np.any(other):
            t2, f2 = self._refine(z[other], g.t[i2[other]], h)
            tol = 1e-12 * (1.0 + f1[other])
            take = (f2 < f1[other] - tol) | ((np.abs(f2 - f1[other]) <= tol) & (np.mod(t2, 1.0) < np.mod(t1[other], 1.0)))
            idx = np.nonzero(other)[0][take]
            t = t.copy()
            f = f.copy()
            t[idx] = t2[take]
            f[idx] = f2[take]
            # many-way ties (e.g. the center of a disc): smallest parameter
            tied = np.nonzero(other)[0][np.abs(f2 - f1[other]) <= tol]
            for i in tied:
                dk = np.abs(g.points - z[i])
                k = int(np.argmax(dk <= dk.min() + 1e-12 * (1.0 + dk.min())))
                if dk[k] <= f[i] + 1e-12 * (1.0 + f[i]):
                    t[i], f[i] = g.t[k], min(f[i], dk[k])
        t = np.mod(t, 1.0)
        pts = g(t)
        return NearestPoint(t.reshape(shape), pts.reshape(shape), f.reshape(shape))

    def _refine(self, z, t0, h):
        """Golden section on [t0 - h, t0 + h] then guarded Newton polish."""
        g = self.boundary
        a = t0 - h
        b = t0 + h

        def dist(t):
            return np.abs(g(t) - z)

        c = a + _GOLDEN * (b - a)
        d = b - _GOLDEN * (b - a)
        fc, fd = dist(c), dist(d)
        for _ in range(90):
            left = fc < fd
            b = np.where(left, d, b)
            a = np.where(left, a, c)
            nc = np.where(left, a + _GOLDEN * (b - a), d)
            nd = np.where(left, c, b - _GOLDEN * (b - a))
            fnc = np.where(left, dist(nc), fd)
            fnd = np.where(left, fc, dist(nd))
            c, d, fc, fd = nc, nd, fnc, fnd
            if np.all(b - a < 1e-16):
                break
        t = np.where(fc < fd, c, d)
        f = np.minimum(fc, fd)
        # the sample itself can beat the interior optimum at bracket ends
        f0 = dist(t0)
        t = np.where(f0 < f, t0, t)
        f = np.minimum(f0, f)
        # Newton on Re(conj(g - z) g') = 0
        with np.errstate(all="ignore"):
            for _ in range(3):
                p = g(t)
                dp = g.derivative(t)
                ddp = g.second_derivative(t)
                fval = np.real(np.conj(p - z) * dp)
                fder = np.abs(dp) ** 2 + np.real(np.conj(p - z) * ddp)
                tn = t - fval / fder
                ok = np.isfinite(tn) & (np.abs(tn - t0) <= h)
                fn = np.where(ok, dist(np.where(ok, tn, t)), np.inf)
                better = fn <= f * (1 + 4e-16)
                t = np.where(better, tn, t)
                f = np.where(better, fn, f)
        return t, f

    def signed_distance(self, z):
        """Distance to the boundary, positive inside and negative outside."""
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        near = self.nearest(z)
        t = np.atleast_1d(near.t)
        d = np.atleast_1d(near.distance).copy()
        zz = np.atleast_1d(z).ravel()
        p = np.atleast_1d(near.point).ravel()
        with np.errstate(all="ignore"):
            n = 1j * self.boundary.derivative(t.ravel())
            n = n / np.abs(n)
            s = np.real(np.conj(zz - p) * n)
        sign = np.sign(s)
        bad = ~np.isfinite(s) | (np.abs(s) < 0.5 * d.ravel())
        if np.any(bad):
            inside = shapely.contains_xy(self._polygon, zz[bad].real, zz[bad].imag)
            sign[bad] = np.where(inside, 1.0, -1.0)
        tiny = d.ravel() <= 1e-14 * self.diameter
        sign[tiny] = 0.0
        out = (sign * d.ravel()).reshape(np.shape(d))
        return float(out[0]) if scalar else out.reshape(z.shape)

    def inward_normal(self, t):
        """Unit inward normal ``i g'(t) / |g'(t)|`` at parameter ``t``."""
        d = np.asarray(self.boundary.derivative(np.asarray(t, dtype=float)), dtype=complex)
        sp = np.abs(d)
        if np.any(~np.isfinite(sp)) or np.any(sp <= 1e-14 * self.diameter):
            raise InvalidDomainError("degenerate tangent")
        return 1j * d / sp

    # -- defining function ------------------------------------------------

    @property
    def has_defining_function(self) -> bool:
        return self._r is not None

    def defining(self, z):
        if self._r is not None:
            return self._r(np.asarray(z, dtype=complex))
        return -self.signed_distance(z)

    def defining_gradient(self, z):
        """Gradient ``r_x + i r_y`` of the defining function."""
        if self._grad_r is not None:
            return self._grad_r(np.asarray(z, dtype=complex))
        near = self.nearest(z)
        zz = np.asarray(z, dtype=complex)
        v = zz - near.point
        with np.errstate(all="ignore"):
            u = v / np.abs(v)
        # unit vector from the nearest point, oriented outward
        normal_out = -self.inward_normal(near.t)
        u = np.where(np.isfinite(u) & (np.abs(v) > 0), u, normal_out)
        return np.where(np.real(np.conj(u) * normal_out) >= 0, u, -u)

    # -- transformations --------------------------------------------------

    def transformed(self, motion: RigidMotion) -> "Domain":
        r, gr = self._r, self._grad_r
        return Domain(
            self.boundary.transformed(motion.shift, motion.rotation),
            (lambda z: r(motion.inverse(z))) if r is not None else None,
            (lambda z: gr(motion.inverse(z)) * motion.rotation) if gr is not None else None,
            kind=self.kind,
            params={**self.params, "motion": (motion.shift, motion.rotation)},
        )


def signed_distance(D: Domain, z):
    return D.signed_distance(z)


def inward_normal(D: Domain, t):
    return D.inward_normal(t)


def normalize_at(D: Domain, a, tol: Optional[float] = None):
    """Move the boundary point ``a`` to 0 with inward normal along +x.

    Returns ``(D_a, rho_a)`` where ``rho_a(z) = (z - a) exp(i theta_a)``.
    """
    a = complex(a)
    tol = 1e-8 * D.diameter if tol is None else tol
    near = D.nearest(a)
    if float(near.distance[0]) > tol:
        raise InvalidDomainError(f"point {a} is not on the boundary (distance {float(near.distance[0]):.3g})")
    n = complex(D.inward_normal(near.t)[0])
    motion = RigidMotion(a, np.conj(n))
    return D.transformed(motion), motion
