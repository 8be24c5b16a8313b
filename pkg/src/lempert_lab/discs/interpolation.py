"""Newton solution of ``phi_{u,v}(zeta_1) = z``, ``phi_{u,v}(zeta_2) = w``.

Unknowns are ``x = (zeta_1, alpha, zeta_2, beta)`` in ``C^{2n}`` where
``u = alpha @ E_a`` and ``v = beta @ E_b`` for orthonormal bases ``E_a``,
``E_b`` of the complex tangent spaces at ``a`` and ``b``. The system is
holomorphic in ``x``, so Newton runs on the complex Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ..errors import ConvergenceError
from .curve import PerturbedDisc, PolynomialCurve
from .space import Space


@dataclass(frozen=True)
class DiscInterpolation:
    """Solved interpolation data for one point pair.

    ``p1``, ``p2`` and ``upper_bound`` are filled in by the pullback stage.
    """

    zeta1: complex
    zeta2: complex
    u: np.ndarray
    v: np.ndarray
    z: np.ndarray
    w: np.ndarray
    residual: float
    iterations: int
    p1: Optional[complex] = None
    p2: Optional[complex] = None
    upper_bound: Optional[float] = None
    extras: dict = field(default_factory=dict)

    def with_points(self, p1, p2, upper, **extras):
        return replace(self, p1=complex(p1), p2=complex(p2), upper_bound=float(upper), extras={**self.extras, **extras})

    @property
    def q1(self):
        return self.p1 / abs(self.p1) if self.p1 else None

    @property
    def q2(self):
        return self.p2 / abs(self.p2) if self.p2 else None

    def to_json(self) -> dict:
        def c(x):
            return [float(np.real(x)), float(np.imag(x))]

        out = {
            "zeta1": c(self.zeta1),
            "zeta2": c(self.zeta2),
            "u": [c(x) for x in self.u],
            "v": [c(x) for x in self.v],
            "z": [c(x) for x in self.z],
            "w": [c(x) for x in self.w],
            "residual": self.residual,
            "iterations": self.iterations,
        }
        if self.p1 is not None:
            out.update(p1=c(self.p1), p2=c(self.p2), q1=c(self.q1), q2=c(self.q2), upper_bound=self.upper_bound)
        out.update({k: v for k, v in self.extras.items()})
        return out


class InterpolationSystem:
    """``Phi(x) = (phi_{u,v}(zeta_1), phi_{u,v}(zeta_2))`` and its Jacobian."""

    def __init__(self, curve: PolynomialCurve, basis_a: np.ndarray, basis_b: np.ndarray):
        self.curve = curve
        self.Ea = np.asarray(basis_a, dtype=complex).reshape(-1, curve.n)
        self.Eb = np.asarray(basis_b, dtype=complex).reshape(-1, curve.n)
        self.n = curve.n
        self.k = self.Ea.shape[0]
        if self.k != self.Eb.shape[0] or self.k != self.n - 1:
            raise ValueError("tangent bases must have n - 1 rows")

    @property
    def size(self) -> int:
        return 2 * self.n

    def split(self, x):
        x = np.asarray(x, dtype=complex)
        k = self.k
        return x[0], x[1 : 1 + k], x[1 + k], x[2 + k :]

    def seed(self):
        x = np.zeros(self.size, dtype=complex)
        x[0] = 1.0
        x[1 + self.k] = -1.0
        return x

    def disc(self, x) -> PerturbedDisc:
        _, al, _, be = self.split(x)
        return PerturbedDisc(self.curve, al @ self.Ea if self.k else np.zeros(self.n, complex), be @ self.Eb if self.k else np.zeros(self.n, complex))

    def __call__(self, x):
        z1, _, z2, _ = self.split(x)
        d = self.disc(x)
        return np.concatenate([d(z1), d(z2)])

    def jacobian(self, x):
        z1, _, z2, _ = self.split(x)
        d = self.disc(x)
        n, k = self.n, self.k
        J = np.zeros((2 * n, 2 * n), dtype=complex)
        J[:n, 0] = d.derivative(z1)
        J[n:, 1 + k] = d.derivative(z2)
        for j, zeta in ((0, z1), (1, z2)):
            rows = slice(j * n, (j + 1) * n)
            P = ((zeta + 1) / 2) ** 2
            M = ((zeta - 1) / 2) ** 2
            J[rows, 1 : 1 + k] = (P * self.Ea).T
            J[rows, 2 + k :] = (M * self.Eb).T
        return J


def solve_interpolation(D, curve: PolynomialCurve, z, w, tol=1e-10, maxiter=50) -> DiscInterpolation:
    """Newton iteration seeded at ``(1, 0, -1, 0)``.

    Raises :class:`ConvergenceError` on divergence (the pair lies outside
    the method's neighbourhood) or a singular Jacobian.
    """
    space = D if isinstance(D, Space) else Space(D)
    z = space.point(z).reshape(space.n)
    w = space.point(w).reshape(space.n)
    system = InterpolationSystem(curve, space.tangent_basis(curve.a), space.tangent_basis(curve.b))
    target = np.concatenate([z, w])
    x = system.seed()
    scale = 1.0 + float(np.linalg.norm(target))
    res = float(np.linalg.norm(system(x) - target))
    for it in range(maxiter + 1):
        if res < tol * scale:
            break
        if it == maxiter:
            raise ConvergenceError(f"Newton did not converge in {maxiter} iterations", res)
        J = system.jacobian(x)
        try:
            step = np.linalg.solve(J, system(x) - target)
        except np.linalg.LinAlgError:
            raise ConvergenceError("singular Jacobian", res) from None
        if not np.all(np.isfinite(step)) or np.linalg.cond(J) > 1e12:
            raise ConvergenceError("singular Jacobian", res)
        lam = 1.0
        while True:
            xn = x - lam * step
            rn = float(np.linalg.norm(system(xn) - target))
            if rn < res or lam < 1e-4:
                break
            lam *= 0.5
        x, res = xn, rn
        if not np.isfinite(res) or res > 1e6 * scale:
            raise ConvergenceError("Newton diverged", res)
    z1, _, z2, _ = system.split(x)
    d = system.disc(x)
    return DiscInterpolation(complex(z1), complex(z2), d.u, d.v, z, w, res, it)
