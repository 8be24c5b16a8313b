"""Conformal maps between Jordan domains and the unit disc.

Numerical maps use the Kerzman-Stein integral equation for the Szegő kernel
``S(., a)``. On the boundary the Riemann map ``psi`` with ``psi(a) = 0`` and
``psi'(a) > 0`` satisfies

    psi(z) = S(z, a) T(z) / (i conj S(z, a)),   psi'(z) = 2 pi S(z, a)^2 / S(a, a),

where ``T`` is the unit tangent. Interior values come from the barycentric
Cauchy formula, which stays accurate up to the boundary. The inverse map is
the same Cauchy integral written in the disc variable, with nodes
``psi(gamma_k)`` and weights ``psi'(gamma_k) gamma'_k / N``.
"""

from __future__ import annotations

import csv
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .. import kernels
from ..domain.build import unit_disc
from ..domain.core import Domain
from ..errors import (
    BoundaryProximityError,
    ConvergenceError,
    InvalidDomainError,
    OutsideDomainError,
)

COLLAR = 1e-6  # refused boundary collar, relative to the diameter
_UNIT_DISC: Optional[Domain] = None


def the_unit_disc() -> Domain:
    global _UNIT_DISC
    if _UNIT_DISC is None:
        _UNIT_DISC = unit_disc(512)
    return _UNIT_DISC


def _arr(z):
    return np.asarray(z, dtype=complex)


def _distance(D: Domain, z):
    """Signed boundary distance, exact for round discs."""
    if D.kind == "disc" and "motion" not in D.params:
        return D.params["radius"] - np.abs(z - D.params["center"])
    return np.asarray(D.signed_distance(z))


def _mobius(a, z):
    return (z - a) / (1 - np.conj(a) * z)


class ConformalMap(ABC):
    """Holomorphic bijection ``source -> target``; one side is the unit disc.

    Subclasses implement :meth:`_forward` and :meth:`_inverse` on arrays;
    the public methods add the interior and collar checks.
    """

    source: Domain
    target: Domain
    center: complex

    #: refuse points closer than ``collar * diameter`` to the source boundary
    collar: float = 0.0

    @property
    def to_unit_disc(self) -> bool:
        return self.target is the_unit_disc()

    @abstractmethod
    def _forward(self, z):
        """Return ``(value, derivative)`` arrays."""

    @abstractmethod
    def _inverse(self, w):
        """Return preimages."""

    def _check_source(self, z):
        z = _arr(z)
        d = _distance(self.source, z)
        if np.any(d <= 0):
            raise OutsideDomainError("point outside the source domain")
        if self.collar > 0 and np.any(d < self.collar * self.source.diameter):
            raise BoundaryProximityError("too close to boundary")
        return z

    def forward(self, z):
        """Value and derivative at interior points of the source."""
        z = self._check_source(z)
        v, dv = self._forward(z.ravel())
        return v.reshape(z.shape), dv.reshape(z.shape)

    def inverse(self, w):
        w = _arr(w)
        if self.to_unit_disc:
            if np.any(np.abs(w) >= 1):
                raise OutsideDomainError("point outside the unit disc")
        elif np.any(_distance(self.target, w) <= 0):
            raise OutsideDomainError("point outside the target domain")
        return self._inverse(w.ravel()).reshape(w.shape)

    def to_disc(self, z):
        """``(psi(z), psi'(z))`` for the map from the non-disc side to the disc."""
        if self.to_unit_disc:
            return self.forward(z)
        p = self.inverse(z)
        _, df = self._forward(_arr(p).ravel())
        return p, (1.0 / df).reshape(np.shape(p))

    # -- boundary correspondence ------------------------------------------

    def boundary_correspondence(self):
        """``(t, points)``: source parameters and their images on the target boundary."""
        raise NotImplementedError

    def export_correspondence(self, path):
        t, w = self.boundary_correspondence()
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["t_source", "re", "im"])
            for ti, wi in zip(t, w):
                out.writerow([repr(float(ti)), repr(float(wi.real)), repr(float(wi.imag))])


class MobiusMap(ConformalMap):
    """``z -> rotation * (z - a) / (1 - conj(a) z)`` on the unit disc."""

    def __init__(self, a, rotation=1.0 + 0j):
        a = complex(a)
        if not abs(a) < 1:
            raise InvalidDomainError("Möbius parameter must lie in the unit disc")
        self.a = a
        self.rotation = complex(rotation)
        self.source = self.target = the_unit_disc()
        self.center = a

    def _forward(self, z):
        a = self.a
        return self.rotation * _mobius(a, z), self.rotation * (1 - abs(a) ** 2) / (1 - np.conj(a) * z) ** 2

    def _inverse(self, w):
        return _mobius(-self.a, w / self.rotation)

    def boundary_correspondence(self, n=512):
        t = np.arange(n) / n
        return t, self._forward(np.exp(2j * np.pi * t))[0]


def disc_automorphism(a) -> MobiusMap:
    return MobiusMap(a)


class AffineDiscMap(ConformalMap):
    """Exact Riemann map of a round disc: scaling followed by a Möbius map."""

    def __init__(self, D: Domain, center):
        self.source = D
        self.target = the_unit_disc()
        self.c0 = complex(D.params["center"])
        self.R = float(D.params["radius"])
        self.center = complex(center)
        self.a = (self.center - self.c0) / self.R
        self.collar = 0.0

    def _forward(self, z):
        s = (z - self.c0) / self.R
        a = self.a
        return _mobius(a, s), (1 - abs(a) ** 2) / (1 - np.conj(a) * s) ** 2 / self.R

    def _inverse(self, w):
        return self.c0 + self.R * _mobius(-self.a, w)

    def boundary_correspondence(self):
        g = self.source.boundary
        return np.asarray(g.t), self._forward(np.asarray(g.points))[0]


class ExplicitDiscMap(ConformalMap):
    """A known univalent ``f`` from the unit disc onto ``target``.

    The inverse is found by damped Newton iteration on ``f(z) = w`` seeded
    at the best point of a polar grid.
    """

    def __init__(self, f: Callable, df: Callable, target: Domain, phase: float = 0.0):
        self.f = f
        self.df = df
        self.source = the_unit_disc()
        self.target = target
        self.center = 0j
        self.phase = phase

    def _forward(self, z):
        return _arr(self.f(z)), _arr(self.df(z))

    @cached_property
    def _seed_grid(self):
        r = 1.0 - np.geomspace(1.0, 1e-4, 40)
        th = np.linspace(0, 2 * np.pi, 256, endpoint=False)
        z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
        return z, _arr(self.f(z))

    def _inverse(self, w, tol=1e-14, maxiter=200):
        grid, vals = self._seed_grid
        out = np.empty(w.shape, dtype=complex)
        for i, wi in enumerate(w):
            z = grid[np.argmin(np.abs(vals - wi))]
            res = abs(self.f(z) - wi)
            for _ in range(maxiter):
                step = (self.f(z) - wi) / self.df(z)
                lam = 1.0
                while lam > 1e-12:
                    zn = z - lam * step
                    if abs(zn) < 1:
                        rn = abs(self.f(zn) - wi)
                        if rn < res or rn == 0:
                            break
                    lam *= 0.5
                else:
                    break
                z, res = zn, rn
                if res <= tol * max(1.0, abs(wi)):
                    break
            if res > 1e-10 * max(1.0, abs(wi)):
                raise ConvergenceError(f"Newton inversion failed at w={wi}", res)
            out[i] = z
        return out

    def boundary_correspondence(self):
        g = self.target.boundary
        return np.asarray(g.t), np.exp(2j * np.pi * (np.asarray(g.t) + self.phase))


class NumericalRiemannMap(ConformalMap):
    """Riemann map ``psi: source -> unit disc`` from the Kerzman-Stein equation.

    Parameters
    ----------
    D : Domain
    center : complex
        Interior point sent to 0, with ``psi'(center) > 0``.
    nodes : int, optional
        Fixed number of quadrature nodes. By default the count is doubled
        from 256 until the Fourier tail of the Szegő density drops below
        ``tail_tol`` or ``max_nodes`` is reached.
    tail_tol, fail_tol : float
        Target and acceptable relative Fourier tail. A final tail above
        ``fail_tol`` raises :class:`ConvergenceError`.
    """

    collar = COLLAR

    def __init__(self, D: Domain, center, nodes=None, max_nodes=2048, tail_tol=1e-10, fail_tol=1e-6):
        self.source = D
        self.target = the_unit_disc()
        self.center = complex(center)
        dist = float(D.signed_distance(self.center))
        if dist < COLLAR * D.diameter:
            raise BoundaryProximityError("center too close to boundary")
        n = int(nodes) if nodes else 256
        while True:
            tail = self._solve(n)
            if nodes or tail < tail_tol or 2 * n > max_nodes:
                break
            n *= 2
        self.residual = tail
        if tail > fail_tol:
            raise ConvergenceError(f"boundary solve did not converge (tail {tail:.2e} at N={n})", tail)

    def _solve(self, n):
        g = self.source.boundary.resampled(n)
        z = np.asarray(g.points)
        dz = np.asarray(g.tangents)
        speed = np.abs(dz)
        tau = dz / speed
        a = self.center
        mat = kernels.kerzman_stein_system(z, tau, speed / n)
        rhs = np.conj(tau / (2j * np.pi * (z - a)))
        s = np.linalg.solve(mat, rhs)
        w = dz / n
        # S(a, a) as the Cauchy integral of S, real positive up to rounding
        saa = complex(np.sum(w * s / (z - a)) / (2j * np.pi))
        self.t = np.asarray(g.t)
        self.nodes = z
        self.weights = w
        self.szego = s
        self.szego_aa = saa.real
        self.boundary_values = s * tau / (1j * np.conj(s))
        self.boundary_values /= np.abs(self.boundary_values)
        self.boundary_derivative = 2 * np.pi * s**2 / saa.real
        # inverse Cauchy integral in the disc variable
        self.inv_weights = self.boundary_derivative * dz / n
        c = np.fft.fft(s)
        mag = np.abs(c)
        k = np.abs(np.fft.fftfreq(n, 1.0 / n))
        return float(mag[k >= 3 * n // 8].max() / mag.max())

    @property
    def node_count(self) -> int:
        return self.nodes.size

    def _forward(self, z):
        v, dv, _ = kernels.cauchy_eval(self.nodes, self.weights, self.boundary_values, z)
        return v, dv

    def _inverse_seed(self, w):
        v, dv, den = kernels.cauchy_eval(self.boundary_values, self.inv_weights, self.nodes, w)
        return v, dv

    def _inverse(self, w, tol=1e-14, maxiter=20):
        z, _ = self._inverse_seed(w)
        # Newton polish against the forward map
        for _ in range(maxiter):
            f, df = self._forward(z)
            step = (f - w) / df
            z = z - step
            if np.all(np.abs(step) <= tol * (1 + np.abs(z))):
                break
        f, _ = self._forward(z)
        res = float(np.max(np.abs(f - w))) if w.size else 0.0
        if not res < 1e-9:
            raise ConvergenceError("Newton inversion did not converge", res)
        return z

    def inverse_map(self, zeta):
        """``f = psi^{-1}`` and ``f'`` from the disc-side Cauchy integral.

        The result is a rational function of ``zeta`` holomorphic wherever
        the density stays near ``2 pi i`` (the whole open disc in practice).
        Returns ``(f, f', density)``.
        """
        return kernels.cauchy_eval(self.boundary_values, self.inv_weights, self.nodes, _arr(zeta).ravel())

    def boundary_correspondence(self):
        return self.t, self.boundary_values


def build_riemann_map(D: Domain, center=0j, **kw) -> ConformalMap:
    """Riemann map of ``D`` onto the unit disc with ``psi(center) = 0``, ``psi'(center) > 0``.

    Round discs get the exact affine-Möbius map; other domains are solved
    numerically (see :class:`NumericalRiemannMap`).
    """
    if D.kind in ("disc", "unit_disc") and "radius" in D.params and "motion" not in D.params:
        m = AffineDiscMap(D, center)
        if not abs(m.a) < 1 - COLLAR:
            raise BoundaryProximityError("center too close to boundary")
        return m
    return NumericalRiemannMap(D, center, **kw)


def map_forward(m: ConformalMap, z):
    return m.forward(z)


def map_inverse(m: ConformalMap, w):
    return m.inverse(w)


def cauchy_riemann_residual(m: ConformalMap, z, h=1e-5):
    """Max relative mismatch of the x and y difference quotients of ``m``."""
    z = _arr(z).ravel()
    fx = (m._forward(z + h)[0] - m._forward(z - h)[0]) / (2 * h)
    fy = (m._forward(z + 1j * h)[0] - m._forward(z - 1j * h)[0]) / (2j * h)
    return float(np.max(np.abs(fx - fy) / np.abs(fx)))


def example4_domain(sample_count=1024):
    """The C^1 example domain with its explicit map from the disc."""
    from ..domain.build import example4
    from . import example4 as ex

    D = example4(sample_count)
    return D, ExplicitDiscMap(ex.f, ex.df, D, phase=0.5)
