"""Lempert function, Kobayashi distance and metric, and boundary ratios.

On a simply connected planar domain every quantity is pulled back from the
unit disc through a Riemann map. Near the boundary ``1 - l`` is computed
directly as ``(1 - l^2) / (1 + l)`` with ``1 - l^2`` taken from the
Möbius identity, so it keeps full relative accuracy when ``l`` is close to 1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .conformal.maps import ConformalMap
from .domain.core import Domain
from .errors import OutsideDomainError


def _c(z):
    return np.asarray(z, dtype=complex)


def lempert_disc_complement(z, w):
    """``(l, 1 - l)`` for the unit disc, both accurate near the boundary."""
    z, w = _c(z), _c(w)
    if np.any(np.abs(z) >= 1) or np.any(np.abs(w) >= 1):
        raise OutsideDomainError("argument on or outside the unit circle")
    den = np.abs(1 - np.conj(z) * w) ** 2
    one_minus_sq = (1 - np.abs(z) ** 2) * (1 - np.abs(w) ** 2) / den
    l = np.abs(z - w) / np.sqrt(den)
    return l, one_minus_sq / (1 + l)


def lempert_disc(z, w):
    """Möbius distance ``|z - w| / |1 - conj(z) w|``."""
    return lempert_disc_complement(z, w)[0]


def artanh_from(l, one_minus_l):
    """``artanh(l)`` using a separately computed ``1 - l``."""
    return 0.5 * np.log((1 + l) / one_minus_l)


def lempert_planar_complement(D: Domain, m: ConformalMap, z, w):
    pz, _ = m.to_disc(z)
    pw, _ = m.to_disc(w)
    return lempert_disc_complement(pz, pw)


def lempert_planar(D: Domain, m: ConformalMap, z, w):
    """``l_D(z, w) = l_disc(psi(z), psi(w))``."""
    return lempert_planar_complement(D, m, z, w)[0]


def kobayashi_distance(D: Domain, m: ConformalMap, z, w):
    return artanh_from(*lempert_planar_complement(D, m, z, w))


def caratheodory_distance(D: Domain, m: ConformalMap, z, w):
    """Equal to the Kobayashi distance on simply connected planar domains."""
    return kobayashi_distance(D, m, z, w)


def kobayashi_royden(D: Domain, m: ConformalMap, z):
    """``kappa_D(z; 1) = |psi'(z)| / (1 - |psi(z)|^2)``."""
    p, dp = m.to_disc(z)
    return np.abs(dp) / (1 - np.abs(p) ** 2)


def estimate1_ratio(D: Domain, m: ConformalMap, z):
    """``kappa_D(z; 1) d_D(z)``; lies in [1/4, 1] by the Koebe theorem."""
    return kobayashi_royden(D, m, z) * np.asarray(D.signed_distance(z))


def lempert_ball(z, w):
    """Lempert function of the unit ball of C^n; points along the last axis."""
    return lempert_ball_complement(z, w)[0]


def lempert_ball_complement(z, w):
    z, w = _c(z), _c(w)
    nz = np.sum(np.abs(z) ** 2, axis=-1)
    nw = np.sum(np.abs(w) ** 2, axis=-1)
    if np.any(nz >= 1) or np.any(nw >= 1):
        raise OutsideDomainError("argument on or outside the unit sphere")
    inner = np.sum(z * np.conj(w), axis=-1)
    one_minus_sq = (1 - nz) * (1 - nw) / np.abs(1 - inner) ** 2
    l = np.sqrt(np.clip(1 - one_minus_sq, 0.0, None))
    return l, one_minus_sq / (1 + l)


@dataclass(frozen=True)
class MetricSample:
    """One evaluation of the boundary-distance ratios at a point pair."""

    z: complex
    w: complex
    lempert: float
    one_minus_l: float
    d_z: float
    d_w: float

    def __post_init__(self):
        if not 0 <= self.lempert < 1:
            raise ValueError("lempert value must lie in [0, 1)")
        if not (self.d_z > 0 and self.d_w > 0):
            raise ValueError("boundary distances must be positive")

    @property
    def kobayashi(self) -> float:
        return float(artanh_from(self.lempert, self.one_minus_l))

    @property
    def separation(self) -> float:
        return float(np.linalg.norm(np.atleast_1d(np.asarray(self.z) - np.asarray(self.w))))

    @property
    def theorem1(self) -> float:
        return self.one_minus_l / (self.d_z * self.d_w)

    @property
    def estimate2(self) -> float:
        return self.one_minus_l / self.d_z

    @property
    def star_gap(self) -> float:
        s = self.separation
        return 2 * self.kobayashi - np.log1p(s / self.d_z) - np.log1p(s / self.d_w)

    @property
    def lower_gap(self) -> float:
        return 2 * self.kobayashi + np.log(self.d_z) + np.log(self.d_w)

    @property
    def ratios(self) -> dict:
        return {
            "theorem1": self.theorem1,
            "estimate2": self.estimate2,
            "star_gap": float(self.star_gap),
            "lower_gap": float(self.lower_gap),
        }

    def row(self) -> dict:
        z = np.atleast_1d(np.asarray(self.z, dtype=complex))
        w = np.atleast_1d(np.asarray(self.w, dtype=complex))
        out = {}
        if z.size == 1:
            out.update(re_z=z[0].real, im_z=z[0].imag, re_w=w[0].real, im_w=w[0].imag)
        else:
            for k in range(z.size):
                out[f"re_z{k + 1}"] = z[k].real
                out[f"im_z{k + 1}"] = z[k].imag
            for k in range(w.size):
                out[f"re_w{k + 1}"] = w[k].real
                out[f"im_w{k + 1}"] = w[k].imag
        out.update(l=self.lempert, d_z=self.d_z, d_w=self.d_w, **self.ratios)
        return {k: float(v) for k, v in out.items()}


def boundary_ratios(D: Domain, m: ConformalMap, z, w) -> MetricSample:
    """Fill a :class:`MetricSample` from the distance and the pulled-back Lempert value."""
    z, w = complex(z), complex(w)
    l, oml = lempert_planar_complement(D, m, z, w)
    return MetricSample(z, w, float(l), float(oml), float(D.signed_distance(z)), float(D.signed_distance(w)))


def ball_ratios(z, w) -> MetricSample:
    z, w = _c(z), _c(w)
    l, oml = lempert_ball_complement(z, w)
    return MetricSample(
        tuple(z), tuple(w), float(l), float(oml), float(1 - np.linalg.norm(z)), float(1 - np.linalg.norm(w))
    )


def write_samples(path, samples):
    """Write MetricSample rows as CSV."""
    rows = [s.row() for s in samples]
    if not rows:
        fields = ["re_z", "im_z", "re_w", "im_w", "l", "d_z", "d_w", "theorem1", "estimate2", "star_gap", "lower_gap"]
    else:
        fields = list(rows[0])
    with open(path, "w", newline="") as fh:
        out = csv.DictWriter(fh, fieldnames=fields)
        out.writeheader()
        for r in rows:
            out.writerow({k: repr(v) for k, v in r.items()})


__all__ = [
    "MetricSample",
    "artanh_from",
    "ball_ratios",
    "boundary_ratios",
    "caratheodory_distance",
    "estimate1_ratio",
    "kobayashi_distance",
    "kobayashi_royden",
    "lempert_ball",
    "lempert_ball_complement",
    "lempert_disc",
    "lempert_disc_complement",
    "lempert_planar",
    "lempert_planar_complement",
    "write_samples",
]
