"""Uniform access to planar domains and balls as subsets of C^n.

Points are complex arrays whose last axis has length ``n``; a planar
:class:`~lempert_lab.domain.Domain` is treated as the case ``n = 1``.
"""

from __future__ import annotations

import numpy as np

from ..domain.ball import BallDomain
from ..domain.core import Domain
from ..errors import InvalidDomainError


class Space:
    """Defining function, distance and normals of a domain in C^n."""

    def __init__(self, domain):
        self.domain = domain
        if isinstance(domain, BallDomain):
            self.n = domain.n
            self.planar = False
        elif isinstance(domain, Domain):
            self.n = 1
            self.planar = True
        else:
            raise TypeError(f"unsupported domain type {type(domain).__name__}")

    @property
    def diameter(self) -> float:
        return float(self.domain.diameter)

    def point(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.planar:
            return z if z.shape[-1:] == (1,) else z[..., None]
        if z.shape[-1] != self.n:
            raise ValueError(f"expected points in C^{self.n}")
        return z

    def defining(self, Z):
        Z = np.asarray(Z, dtype=complex)
        return self.domain.defining(Z[..., 0]) if self.planar else self.domain.defining(Z)

    def gradient(self, Z):
        """Gradient of the defining function, ``r_x + i r_y`` per coordinate."""
        Z = np.asarray(Z, dtype=complex)
        if self.planar:
            return np.asarray(self.domain.defining_gradient(Z[..., 0]), dtype=complex)[..., None]
        return self.domain.defining_gradient(Z)

    def signed_distance(self, Z):
        Z = np.asarray(Z, dtype=complex)
        if self.planar:
            return np.asarray(self.domain.signed_distance(Z[..., 0]))
        return self.domain.signed_distance(Z)

    def boundary_normal(self, a, tol=None):
        """Inward unit normal at the boundary point ``a``; rejects interior points."""
        a = self.point(a)
        tol = 1e-8 * self.diameter if tol is None else tol
        if self.planar:
            near = self.domain.nearest(a[0])
            if float(near.distance[0]) > tol:
                raise InvalidDomainError(f"{a[0]} is not a boundary point")
            return np.asarray(self.domain.inward_normal(near.t), dtype=complex).reshape(1)
        if abs(np.linalg.norm(a) - 1.0) > tol:
            raise InvalidDomainError(f"{a} is not a boundary point")
        return self.domain.inward_normal(a)

    def nearest_boundary_point(self, z):
        z = self.point(z)
        if self.planar:
            return np.asarray(self.domain.nearest(z[0]).point).reshape(1)
        return self.domain.nearest_boundary_point(z)

    def tangent_basis(self, a):
        """Orthonormal basis (rows) of the complex tangent space at ``a``."""
        if self.planar:
            return np.zeros((0, 1), dtype=complex)
        n_a = self.boundary_normal(a)
        from scipy.linalg import null_space

        return null_space(np.conj(n_a)[None, :]).T.copy()

    def deep_points(self, count=8):
        """Interior points ordered by decreasing boundary distance (waypoint candidates)."""
        if not self.planar:
            out = [np.zeros(self.n, dtype=complex)]
            for k in range(self.n):
                e = np.zeros(self.n, dtype=complex)
                e[k] = 0.5
                out += [e, -e, 1j * e, -1j * e]
            return out[:count]
        x0, x1, y0, y1 = self.domain.bounding_box
        x = np.linspace(x0, x1, 41)[1:-1]
        y = np.linspace(y0, y1, 41)[1:-1]
        Z = (x[:, None] + 1j * y[None, :]).ravel()
        d = np.asarray(self.domain.signed_distance(Z))
        order = np.argsort(-d)
        return [np.array([Z[i]]) for i in order[:count] if d[i] > 0]
