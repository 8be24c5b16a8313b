"""The Euclidean unit ball of C^n as a model domain with exact formulas."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BallDomain:
    """Unit ball ``{||z|| < 1}`` in ``C^n`` with ``r(z) = ||z||^2 - 1``.

    Points are complex arrays of shape ``(n,)`` or ``(..., n)``.
    """

    n: int = 2

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")

    kind = "ball"

    @property
    def diameter(self) -> float:
        return 2.0

    def _pts(self, z):
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.n:
            raise ValueError(f"expected points in C^{self.n}, got shape {z.shape}")
        return z

    def defining(self, z):
        z = self._pts(z)
        return np.sum(np.abs(z) ** 2, axis=-1) - 1.0

    def defining_gradient(self, z):
        """Complex gradient ``(dr/dz_bar_k) * 2 = 2 z``; its norm is ``||grad r||``."""
        return 2.0 * self._pts(z)

    def signed_distance(self, z):
        return 1.0 - np.linalg.norm(self._pts(z), axis=-1)

    def contains(self, z):
        return self.signed_distance(z) > 0

    def inward_normal(self, a):
        a = self._pts(a)
        return -a / np.linalg.norm(a, axis=-1, keepdims=True)

    def nearest_boundary_point(self, z):
        z = self._pts(z)
        nz = np.linalg.norm(z, axis=-1, keepdims=True)
        e1 = np.zeros(self.n, dtype=complex)
        e1[0] = 1.0
        return np.where(nz > 0, z / np.where(nz > 0, nz, 1.0), e1)

    def complex_tangent_basis(self, a):
        """Orthonormal basis (rows) of ``{u : <u, a> = 0}``."""
        from scipy.linalg import null_space

        a = self._pts(a)
        return null_space(np.conj(a)[None, :]).T.copy()
