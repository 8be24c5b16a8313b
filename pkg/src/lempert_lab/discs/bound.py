"""Constructive upper bounds for the Lempert function and constant estimates.

The disc ``theta = psi ∘ eta`` maps the unit disc into ``D`` and passes
through ``z`` and ``w`` at ``p_1`` and ``p_2``, so the Möbius distance of
``p_1`` and ``p_2`` bounds ``l_D(z, w)`` from above. Here ``psi`` is the
perturbed polynomial disc and ``eta`` is the disc-side Cauchy interpolant of
the Riemann map of the pullback domain.

``eta`` is a rational function whose boundary values only approximate the
boundary of the pullback domain, so the disc actually used is
``zeta -> theta(r zeta)`` for a radius ``r`` halfway between ``max |p_j|``
and 1, moved towards ``max |p_j|`` when the checks fail. On the circle of
radius ``r`` the denominator of ``eta`` has winding number zero (no poles
inside) and ``theta`` stays in ``D``; the maximum principle then gives
containment of the whole disc. The reported ``p_j``
are the preimages for this rescaled disc.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..conformal.maps import NumericalRiemannMap
from ..errors import ConvergenceError, InvalidDomainError, LempertLabError, StageError
from ..metrics import lempert_disc_complement
from .curve import PolynomialCurve, lemma3_curve, perturbed_disc
from .interpolation import DiscInterpolation, solve_interpolation
from .pullback import PullbackDomain, max_strip_height, pullback_domain
from .space import Space


def disc_sample(count=1000, radius=1 - 1e-3):
    """Deterministic sample of the closed disc of the given radius.

    A sunflower pattern fills the interior and a fifth of the points sit on
    the outer circle, where containment is hardest.
    """
    rim = count // 5
    inner = count - rim
    k = np.arange(inner) + 0.5
    golden = np.pi * (3 - np.sqrt(5))
    pts = radius * np.sqrt(k / inner) * np.exp(1j * golden * k)
    ring = radius * np.exp(2j * np.pi * (np.arange(rim) + 0.5) / rim)
    return np.concatenate([pts, ring])


@dataclass
class _Pullback:
    pullback: PullbackDomain
    riemann: NumericalRiemannMap


class DiscBuilder:
    """Runs the construction for many point pairs on one domain.

    Curves are cached per endpoint pair. For planar domains the complex
    tangent spaces are trivial, so ``u = v = 0`` and the pullback domain and
    its Riemann map depend only on the curve; they are cached as well.
    """

    def __init__(
        self,
        D,
        delta: float = 0.5,
        delta_prime: float = 0.5,
        halvings: int = 8,
        nodes: int = 1024,
        map_fail_tol: float = 1e-3,
        check_points: int = 1000,
        rim_fractions=(0.5, 0.25, 0.1, 0.01),
    ):
        self.space = D if isinstance(D, Space) else Space(D)
        self.delta = delta
        self.delta_prime = delta_prime
        self.halvings = halvings
        self.nodes = nodes
        self.map_fail_tol = map_fail_tol
        self.check = disc_sample(check_points)
        self.rim_fractions = tuple(rim_fractions)
        self._curves = {}
        self._pullbacks = {}

    # -- stages -------------------------------------------------------------

    def curve(self, a, b) -> PolynomialCurve:
        key = (tuple(np.round(self.space.point(a).ravel(), 14)), tuple(np.round(self.space.point(b).ravel(), 14)))
        if key not in self._curves:
            self._curves[key] = lemma3_curve(self.space, a, b)
        return self._curves[key]

    def pullback(self, curve: PolynomialCurve, interp: DiscInterpolation) -> _Pullback:
        key = (id(curve), tuple(np.round(interp.u, 15)), tuple(np.round(interp.v, 15)))
        if key in self._pullbacks:
            return self._pullbacks[key]
        disc = perturbed_disc(curve, interp.u, interp.v)
        d = self.delta
        last = None
        for _ in range(self.halvings + 1):
            # strip height scaled to the pullback: 80% of the largest admissible one
            dp = min(self.delta_prime, d, 0.8 * max_strip_height(self.space, disc, d))
            try:
                if dp <= 0:
                    raise InvalidDomainError("no rectangle fits in the pullback")
                pb = pullback_domain(self.space, disc, d, dp)
                break
            except LempertLabError as exc:
                last = exc
                d /= 2
        else:
            raise StageError("pullback", f"no admissible rectangle after {self.halvings} halvings: {last}")
        try:
            rm = NumericalRiemannMap(pb.base, 0j, nodes=self.nodes, fail_tol=self.map_fail_tol)
        except LempertLabError as exc:
            raise StageError("riemann_map", str(exc)) from exc
        out = _Pullback(pb, rm)
        if self.space.planar:
            self._pullbacks[key] = out
        return out

    @staticmethod
    def preimage(rm: NumericalRiemannMap, zeta, tol=1e-14, maxiter=60):
        """Solve ``eta(p) = zeta`` by Newton, seeded with the forward map."""
        p = complex(rm._forward(np.array([zeta]))[0][0])
        if abs(p) >= 1:
            p = 0.999 * p / abs(p)
        for _ in range(maxiter):
            f, df, _ = rm.inverse_map(np.array([p]))
            step = complex((f[0] - zeta) / df[0])
            lam = 1.0
            while abs(p - lam * step) >= 1 and lam > 1e-8:
                lam /= 2
            p -= lam * step
            if abs(step) < tol:
                break
        f, _, _ = rm.inverse_map(np.array([p]))
        res = abs(complex(f[0]) - zeta)
        if not (abs(p) < 1 and res < 1e-11):
            raise ConvergenceError("preimage under eta did not converge", res)
        return p

    # -- pipeline -------------------------------------------------------------

    def bound(self, z, w, a=None, b=None):
        """``(upper, certificate)`` for the pair ``(z, w)``.

        ``a`` and ``b`` default to the nearest boundary points of ``z`` and
        ``w``. Any failure is raised as :class:`StageError` naming the stage.
        """
        sp = self.space
        z = sp.point(z).reshape(sp.n)
        w = sp.point(w).reshape(sp.n)
        a = sp.nearest_boundary_point(z) if a is None else sp.point(a).reshape(sp.n)
        b = sp.nearest_boundary_point(w) if b is None else sp.point(b).reshape(sp.n)
        try:
            curve = self.curve(a, b)
        except LempertLabError as exc:
            raise StageError("lemma3_curve", str(exc)) from exc
        try:
            interp = solve_interpolation(sp, curve, z, w)
        except LempertLabError as exc:
            raise StageError("solve_interpolation", str(exc)) from exc
        pb = self.pullback(curve, interp)
        H, rm = pb.pullback.base, pb.riemann
        zetas = np.array([interp.zeta1, interp.zeta2])
        if not np.all(H.signed_distance(zetas) > 0):
            raise StageError("pullback", "interpolation nodes outside the pullback domain")
        try:
            p1 = self.preimage(rm, interp.zeta1)
            p2 = self.preimage(rm, interp.zeta2)
        except LempertLabError as exc:
            raise StageError("preimage", str(exc)) from exc
        # eta is certified on the closed disc of radius r; theta(r zeta) is the disc.
        # r starts halfway to the circle and moves towards max |p_j| if the rim check fails.
        disc = perturbed_disc(curve, interp.u, interp.v)
        pmax = max(abs(p1), abs(p2))
        for frac in self.rim_fractions:
            r = pmax + frac * (1 - pmax)
            rim = r * np.exp(2j * np.pi * np.arange(4 * rm.node_count) / (4 * rm.node_count))
            eta_rim, _, den_rim = rm.inverse_map(rim)
            winding = int(np.rint(np.sum(np.angle(np.roll(den_rim, -1) / den_rim)) / (2 * np.pi)))
            rim_inside = sp.signed_distance(disc(eta_rim)) > 0
            if winding == 0 and np.all(rim_inside):
                break
        raw = (p1, p2)
        p1, p2 = p1 / r, p2 / r
        upper, one_minus = lempert_disc_complement(p1, p2)
        upper, one_minus = float(upper), float(one_minus)

        eta, deta, _ = rm.inverse_map(r * self.check)
        theta = disc(eta)
        inside = sp.signed_distance(theta) > 0
        eta_p, _, _ = rm.inverse_map(np.array(raw))
        theta_p = disc(eta_p)
        interp_err = float(max(np.linalg.norm(theta_p[0] - z), np.linalg.norm(theta_p[1] - w)))
        d_z = float(sp.signed_distance(z[None, :])[0])
        d_w = float(sp.signed_distance(w[None, :])[0])
        C = max(d_z / (1 - abs(p1)), d_w / (1 - abs(p2)))
        # boundary behaviour of the uncut eta at q_j = p_j / |p_j|
        q = np.array([p1 / abs(p1), p2 / abs(p2)])
        eta_q, _, _ = rm.inverse_map(q)
        theta_q = disc(eta_q)
        rho_q = sp.defining(theta_q)
        level_gap = float(np.max(np.abs(H.signed_distance(eta_q))))
        # |theta(q_j) - z_j| <= C' (1 - |p_j|) bounds d(z_j) through the boundary point theta(q_j)
        chain = max(
            np.linalg.norm(theta_q[0] - z) / (1 - abs(p1)),
            np.linalg.norm(theta_q[1] - w) / (1 - abs(p2)),
        )
        extras = {
            "a": [[float(x.real), float(x.imag)] for x in a],
            "b": [[float(x.real), float(x.imag)] for x in b],
            "curve": curve.to_json(),
            "delta": pb.pullback.delta,
            "delta_prime": pb.pullback.delta_prime,
            "smoothing_radius": pb.pullback.smoothing_radius,
            "riemann_nodes": rm.node_count,
            "riemann_tail": rm.residual,
            "one_minus_upper": one_minus,
            "d_z": d_z,
            "d_w": d_w,
            "C": float(C),
            "kappa": one_minus / (d_z * d_w),
            # 1 - l >= (1 - |p_1|)(1 - |p_2|) / 2 >= d_z d_w / (2 C^2)
            "theorem1_chain": bool(one_minus >= d_z * d_w / (2 * C**2) * (1 - 1e-12)),
            "certified_radius": float(r),
            "eta_derivative_sup": float(r * np.max(np.abs(deta))),
            "interior_mapping": bool(np.all(inside)),
            "interior_violations": int(np.sum(~inside)),
            "rim_inside": bool(np.all(rim_inside)),
            "denominator_winding": winding,
            "interpolation_error": interp_err,
            "q_level_gap": level_gap,
            "rho_at_q": [float(x) for x in np.atleast_1d(rho_q)],
            "distance_chain": float(chain),
        }
        return upper, interp.with_points(p1, p2, upper, **extras)


def lempert_upper_bound(D, z, w, a=None, b=None, builder: Optional[DiscBuilder] = None):
    """Upper bound for ``l_D(z, w)`` with its certificate.

    See :class:`DiscBuilder` for the construction; pass a builder to reuse
    cached curves and pullback maps across pairs.
    """
    builder = builder or DiscBuilder(D)
    return builder.bound(z, w, a, b)


@dataclass(frozen=True)
class ConstantEstimate:
    """Minimum of ``(1 - l) / (d_z d_w)`` over a schedule, with its argmin."""

    c_estimate: float
    z: object
    w: object
    samples: int


def _planar_points(D, params, distances):
    t = np.arange(params) / params
    return (D.boundary(t)[:, None] + np.asarray(distances)[None, :] * D.inward_normal(t)[:, None]).ravel()


def _ball_points(dim, params, distances, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(params, dim)) + 1j * rng.normal(size=(params, dim))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    x = np.concatenate([x, -x])
    return ((1 - np.asarray(distances))[None, :, None] * x[:, None, :]).reshape(-1, dim)


def theorem1_samples(D, m=None, params=24, distances=(1e-1, 1e-2, 1e-3, 1e-4), seed=0):
    """Pairs of the constant sweep with ``1 - l`` and both boundary distances.

    The points are ``gamma(t) + d n(t)`` over ``params`` boundary parameters
    ``k / params`` (nested under refinement) and the given distances; the
    ball uses random boundary points and their antipodes. Pairs are all
    combinations ``i < j`` of points, ordered ray by ray, so point ``i`` lies
    on ray ``i // len(distances)``. Returns ``(z, w, one_minus_l, d_z, d_w, i, j)``.
    """
    from ..domain.ball import BallDomain
    from ..metrics import lempert_ball_complement

    if isinstance(D, BallDomain):
        pts = _ball_points(D.n, params, distances, seed)
        d = 1 - np.linalg.norm(pts, axis=1)
        i, j = np.triu_indices(pts.shape[0], 1)
        _, oml = lempert_ball_complement(pts[i], pts[j])
    else:
        if m is None:
            from ..conformal.maps import build_riemann_map

            m = build_riemann_map(D, deep_point(D))
        pts = _planar_points(D, params, distances)
        p, _ = m.to_disc(pts)
        d = np.asarray(D.signed_distance(pts))
        i, j = np.triu_indices(pts.size, 1)
        _, oml = lempert_disc_complement(p[i], p[j])
    return pts[i], pts[j], oml, d[i], d[j], i, j


def theorem1_constant(D, m=None, params=24, distances=(1e-1, 1e-2, 1e-3, 1e-4), seed=0) -> ConstantEstimate:
    """Estimate ``c`` in ``l_D(z, w) <= 1 - c d(z) d(w)`` from an exact or conformal oracle.

    The minimum of ``(1 - l) / (d_z d_w)`` over :func:`theorem1_samples`.
    """
    z, w, oml, dz, dw, _, _ = theorem1_samples(D, m, params, distances, seed)
    ratio = oml / (dz * dw)
    k = int(np.argmin(ratio))
    return ConstantEstimate(float(ratio[k]), z[k], w[k], int(ratio.size))


def deep_point(D):
    return complex(Space(D).deep_points(1)[0][0])
