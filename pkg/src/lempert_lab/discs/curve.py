"""Polynomial curves joining two boundary points through the domain.

A :class:`PolynomialCurve` ``phi: C -> C^n`` satisfies

    phi(1) = a, phi(-1) = b, phi'(1) = -n_a, phi'(-1) = n_b,

and maps ``(-1, 1)`` into the domain. It is obtained from a C^2 base curve
by Chebyshev approximation of the derivative, corrected so the endpoint
data hold exactly. Coefficients are kept in the Chebyshev basis; monomial
coefficients of degree-64 polynomials are useless in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C

from ..errors import AdmissibilityError, InvalidDomainError
from .space import Space

# ((z + 1) / 2)^2 and ((z - 1) / 2)^2 in the Chebyshev basis
PLUS_SQUARE = np.array([3 / 8, 1 / 2, 1 / 8])
MINUS_SQUARE = np.array([3 / 8, -1 / 2, 1 / 8])


def _chebval(x, c):
    """Evaluate vector-valued Chebyshev series ``c`` (deg+1, n) at ``x``; result (..., n)."""
    x = np.asarray(x, dtype=complex)
    return np.moveaxis(C.chebval(x, c), 0, -1) if c.ndim == 2 else C.chebval(x, c)


@dataclass(frozen=True)
class PolynomialCurve:
    """Polynomial map ``C -> C^n`` in Chebyshev form.

    Attributes
    ----------
    cheb : complex array (degree + 1, n)
    a, b : boundary endpoints (shape (n,))
    n_a, n_b : inward unit normals at ``a`` and ``b``
    deviation : sup over [-1, 1] of ``|phi' - base'|`` for the base curve used
    """

    cheb: np.ndarray
    a: np.ndarray
    b: np.ndarray
    n_a: np.ndarray
    n_b: np.ndarray
    deviation: float = 0.0
    waypoints: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.cheb.shape[1]

    @property
    def degree(self) -> int:
        return self.cheb.shape[0] - 1

    def __call__(self, zeta):
        return _chebval(zeta, self.cheb)

    @property
    def dcheb(self):
        return C.chebder(self.cheb, axis=0)

    def derivative(self, zeta):
        return _chebval(zeta, self.dcheb)

    def second_derivative(self, zeta):
        return _chebval(zeta, C.chebder(self.cheb, 2, axis=0))

    def endpoint_errors(self) -> dict:
        ends = self(np.array([1.0, -1.0]))
        d = self.derivative(np.array([1.0, -1.0]))
        return {
            "phi(1)": float(np.linalg.norm(ends[0] - self.a)),
            "phi(-1)": float(np.linalg.norm(ends[1] - self.b)),
            "phi'(1)": float(np.linalg.norm(d[0] + self.n_a)),
            "phi'(-1)": float(np.linalg.norm(d[1] - self.n_b)),
        }

    def monomial_coefficients(self):
        """Coefficients in the power basis, lowest first (ill-conditioned for high degree)."""
        return C.cheb2poly(self.cheb) if self.cheb.ndim == 1 else np.stack(
            [C.cheb2poly(self.cheb[:, k]) for k in range(self.n)], axis=1
        )

    def to_json(self) -> dict:
        return {
            "basis": "chebyshev",
            "coefficients": [[[float(c.real), float(c.imag)] for c in row] for row in self.cheb],
            "a": [[float(c.real), float(c.imag)] for c in self.a],
            "b": [[float(c.real), float(c.imag)] for c in self.b],
            "degree": self.degree,
            "deviation": self.deviation,
        }


# -- base curves ------------------------------------------------------------


def _quintic_hermite(p0, d0, p1, d1, h):
    """Quintic Hermite segment on s in [0, 1] with zero second derivatives at both ends."""

    def pos(s):
        s = np.asarray(s, dtype=float)[..., None]
        h00 = 1 - 10 * s**3 + 15 * s**4 - 6 * s**5
        h10 = s - 6 * s**3 + 8 * s**4 - 3 * s**5
        h01 = 10 * s**3 - 15 * s**4 + 6 * s**5
        h11 = -4 * s**3 + 7 * s**4 - 3 * s**5
        return h00 * p0 + h10 * h * d0 + h01 * p1 + h11 * h * d1

    def der(s):
        s = np.asarray(s, dtype=float)[..., None]
        g00 = -30 * s**2 + 60 * s**3 - 30 * s**4
        g10 = 1 - 18 * s**2 + 32 * s**3 - 15 * s**4
        g01 = 30 * s**2 - 60 * s**3 + 30 * s**4
        g11 = -12 * s**2 + 28 * s**3 - 15 * s**4
        return (g00 * p0 + g10 * h * d0 + g01 * p1 + g11 * h * d1) / h

    return pos, der


class BaseCurve:
    """C^2 curve on [-1, 1] through knots with prescribed first derivatives.

    With no waypoints this is the cubic Hermite curve, which is a
    polynomial; with waypoints it is piecewise quintic Hermite with zero
    second derivatives at the knots, hence C^2.
    """

    def __init__(self, a, b, n_a, n_b, waypoints: Sequence = ()):
        self.waypoints = tuple(np.asarray(w, dtype=complex) for w in waypoints)
        pts = [b, *self.waypoints, a]
        k = len(pts) - 1
        self.knots = np.linspace(-1.0, 1.0, k + 1)
        h = 2.0 / k
        ders = [n_b]
        for i in range(1, k):
            chord = pts[i + 1] - pts[i - 1]
            if np.linalg.norm(chord) < 1e-12:
                # a = b loop: turn perpendicular to the approach direction
                chord = 1j * (pts[i] - pts[i - 1])
            ders.append(chord / (2 * h))
        ders.append(-n_a)
        if k == 1:
            self._segs = None
            self._cubic = (b, n_b, a, -n_a)
        else:
            self._segs = [_quintic_hermite(pts[i], ders[i], pts[i + 1], ders[i + 1], h) for i in range(k)]

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self._segs is None:
            p0, m0, p1, m1 = self._cubic
            s = ((t + 1) / 2)[..., None]
            # d/dt of the cubic Hermite with s = (t + 1) / 2, tangents scaled by dt/ds = 2
            g00 = 6 * s**2 - 6 * s
            g10 = 3 * s**2 - 4 * s + 1
            g01 = -6 * s**2 + 6 * s
            g11 = 3 * s**2 - 2 * s
            return (g00 * p0 + g10 * 2 * m0 + g01 * p1 + g11 * 2 * m1) / 2
        k = len(self._segs)
        idx = np.clip(np.searchsorted(self.knots, t, side="right") - 1, 0, k - 1)
        s = (t - self.knots[idx]) / (self.knots[1] - self.knots[0])
        out = np.empty(t.shape + (self._segs[0][0](0.0).shape[-1],), dtype=complex)
        for j, (_, der) in enumerate(self._segs):
            m = idx == j
            if np.any(m):
                out[m] = der(s[m])
        return out


def _fit_derivative(base: BaseCurve, a, b, n_a, n_b, degree):
    """Chebyshev interpolant of ``base'`` corrected to the endpoint and integral data."""
    m = max(int(degree), 2)
    x = np.cos(np.pi * (np.arange(m + 1) + 0.5) / (m + 1))
    vals = base.derivative(x)
    p = C.chebfit(x, vals, m)  # (m + 1, n)
    p1 = C.chebval(1.0, p)
    pm1 = C.chebval(-1.0, p)
    integral = C.chebval(1.0, C.chebint(p, lbnd=-1, axis=0)) if p.ndim == 2 else None
    d1, dm1 = -n_a, n_b
    alpha = ((d1 - p1) + (dm1 - pm1)) / 2
    beta = ((d1 - p1) - (dm1 - pm1)) / 2
    # integral of alpha + beta t + gamma (1 - t^2) over [-1, 1] is 2 alpha + 4 gamma / 3
    gamma = 0.75 * ((a - b) - integral - 2 * alpha)
    q = p.copy()
    q = np.pad(q, ((0, max(0, 3 - q.shape[0])), (0, 0)))
    # 1 - t^2 = (T0 - T2) / 2
    q[0] += alpha + gamma / 2
    q[1] += beta
    q[2] -= gamma / 2
    phi = C.chebint(q, lbnd=-1, axis=0)
    phi[0] += b
    grid = np.linspace(-1, 1, 801)
    dev = float(np.max(np.linalg.norm(C.chebval(grid, q).T - base.derivative(grid), axis=-1)))
    return phi, dev


@dataclass(frozen=True)
class AdmissibilityReport:
    passed: bool
    delta1: float
    delta2: float
    delta3: float
    failing_t: Optional[float]
    reason: str
    epsilon: float = 0.0


def _endpoint_margin(space: Space, curve: PolynomialCurve, end: int, ts):
    """``r(phi(end * (1 - t))) + t/2 * |grad r(endpoint)|`` on the grid ``ts``."""
    p = curve.a if end > 0 else curve.b
    scale = float(np.linalg.norm(space.gradient(p[None, :])[0]))
    vals = space.defining(curve(end * (1 - ts)))
    return vals + 0.5 * ts * scale


def admissibility_check(D, curve: PolynomialCurve, epsilon: float = 0.0, samples: int = 2001) -> AdmissibilityReport:
    """Endpoint criterion ``r(phi(1 - t)) < -t/2 |grad r(a)|`` plus interior containment.

    ``delta1`` (near ``a``) and ``delta2`` (near ``b``) are the largest grid
    values up to which the criterion holds without a break. Containment is
    then checked on ``[-1 + delta3, 1 - delta3]`` with ``delta3 =
    min(delta1, delta2)``. The gradient norm plays the role of the unit
    normalisation of ``r`` used in the argument.
    """
    space = D if isinstance(D, Space) else Space(D)
    ts = np.unique(np.concatenate([np.geomspace(1e-8, 1.0, 200), np.linspace(0, 1, 401)[1:]]))
    deltas = []
    for end in (1, -1):
        margin = _endpoint_margin(space, curve, end, ts)
        bad = np.nonzero(~(margin < 0))[0]
        if bad.size and bad[0] == 0:
            return AdmissibilityReport(False, 0.0, 0.0, 0.0, float(end * (1 - ts[0])), "endpoint criterion violated", epsilon)
        deltas.append(float(ts[bad[0] - 1]) if bad.size else 1.0)
    d1, d2 = deltas
    d3 = min(d1, d2)
    grid = np.linspace(-1 + d3, 1 - d3, samples)
    if grid.size:
        sd = space.signed_distance(curve(grid))
        out = np.nonzero(~(sd > 0))[0]
        if out.size:
            return AdmissibilityReport(False, d1, d2, d3, float(grid[out[0]]), "interior containment violated", epsilon)
    return AdmissibilityReport(True, d1, d2, d3, None, "", epsilon)


def lemma3_curve(
    D,
    a,
    b,
    waypoints: Optional[Sequence] = None,
    max_degree: int = 64,
) -> PolynomialCurve:
    """Admissible polynomial curve from ``b`` (at -1) to ``a`` (at +1).

    The base curve is the cubic Hermite curve; when it is not admissible,
    interior waypoints are tried (deepest grid points first). For ``a == b``
    a waypoint at distance at least ``diameter / 4`` from ``a`` is always
    used. The degree of the Chebyshev fit starts at the base degree and is
    doubled up to ``max_degree``.
    """
    space = D if isinstance(D, Space) else Space(D)
    a = space.point(a).reshape(space.n)
    b = space.point(b).reshape(space.n)
    n_a = space.boundary_normal(a)
    n_b = space.boundary_normal(b)
    same = np.linalg.norm(a - b) < 1e-12 * space.diameter
    if waypoints is not None:
        plans = [tuple(space.point(w).reshape(space.n) for w in waypoints)]
    else:
        deep = space.deep_points(12)
        if same:
            far = [w for w in deep if np.linalg.norm(w - a) >= space.diameter / 4]
            plans = [(w,) for w in far]
        else:
            plans = [()] + [(w,) for w in deep]
    last = None
    for plan in plans:
        base = BaseCurve(a, b, n_a, n_b, plan)
        degree = 3 if not plan else 8
        while degree <= max_degree:
            cheb, dev = _fit_derivative(base, a, b, n_a, n_b, degree - 1)
            curve = PolynomialCurve(cheb, a, b, n_a, n_b, dev, tuple(plan))
            rep = admissibility_check(space, curve, dev)
            if rep.passed:
                return curve
            last = rep
            if not plan:
                break  # the cubic is reproduced exactly; raising the degree changes nothing
            degree *= 2
    raise AdmissibilityError(f"no admissible curve up to degree {max_degree}: {last.reason if last else 'no plan'}")


# -- perturbation family ------------------------------------------------------


@dataclass(frozen=True)
class PerturbedDisc:
    """``phi_{u,v}(zeta) = phi(zeta) + ((zeta + 1)/2)^2 u + ((zeta - 1)/2)^2 v``."""

    curve: PolynomialCurve
    u: np.ndarray
    v: np.ndarray

    @property
    def cheb(self):
        c = np.array(self.curve.cheb, dtype=complex)
        if c.shape[0] < 3:
            c = np.pad(c, ((0, 3 - c.shape[0]), (0, 0)))
        c[:3] += PLUS_SQUARE[:, None] * self.u[None, :] + MINUS_SQUARE[:, None] * self.v[None, :]
        return c

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        p = ((zeta + 1) / 2)[..., None] ** 2
        m = ((zeta - 1) / 2)[..., None] ** 2
        return self.curve(zeta) + p * self.u + m * self.v

    def derivative(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return self.curve.derivative(zeta) + ((zeta + 1) / 2)[..., None] * self.u + ((zeta - 1) / 2)[..., None] * self.v


def perturbed_disc(curve: PolynomialCurve, u=None, v=None, tol=1e-8) -> PerturbedDisc:
    """Quadratic perturbation of ``curve`` by complex tangent vectors at the endpoints."""
    n = curve.n
    u = np.zeros(n, dtype=complex) if u is None else np.asarray(u, dtype=complex).reshape(n)
    v = np.zeros(n, dtype=complex) if v is None else np.asarray(v, dtype=complex).reshape(n)
    for vec, nrm, name in ((u, curve.n_a, "u"), (v, curve.n_b, "v")):
        if abs(np.vdot(nrm, vec)) > tol * (1 + np.linalg.norm(vec)):
            raise InvalidDomainError(f"{name} is not in the complex tangent space")
    return PerturbedDisc(curve, u, v)
