"""Domain construction from descriptions.

A description is a mapping with a ``kind`` key. JSON documents use the same
keys; complex numbers are written as ``[re, im]`` pairs or plain reals.

=================== ==========================================================
kind                fields (defaults)
=================== ==========================================================
``disc``            ``center`` (0), ``radius`` (1)
``unit_disc``       none
``ellipse``         ``a``, ``b``, ``center`` (0), ``angle`` (0)
``smoothed_rectangle`` ``a``, ``b``, ``exponent`` (8): ``(x/a)^p + (y/b)^p < 1``
``perturbed_ellipse`` ``a``, ``b``, ``amplitude`` (0), ``frequency`` (3)
``param_table``     ``path`` (CSV with columns t, re, im) or ``rows``;
                    ``interpolation`` ("spline" | "linear" | "fourier")
``image_map``       ``map``: "example4" or "polynomial" with ``coefficients``
                    (``f(z) = sum c_k z^k``)
``parametrization`` Python API only: ``gamma``, ``dgamma`` callables
=================== ==========================================================

Every kind accepts ``sample_count`` (1024).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping, Union

import numpy as np

from ..errors import InvalidDomainError
from . import curves
from .core import Domain


def as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InvalidDomainError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _positive(spec, key, default=None):
    v = spec.get(key, default)
    if v is None:
        raise InvalidDomainError(f"missing field {key!r}")
    v = float(v)
    if not np.isfinite(v) or v <= 0:
        raise InvalidDomainError(f"field {key!r} must be a positive finite number (unbounded spec)")
    return v


def read_table(path):
    """Read a ``t, re, im`` CSV table; a header row is optional."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                rows.append([float(x) for x in row[:3]])
            except ValueError:
                continue  # header
    return np.array(rows, dtype=float).reshape(-1, 3)


def write_table(path, t, z):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "re", "im"])
        for ti, zi in zip(np.asarray(t), np.asarray(z)):
            w.writerow([repr(float(ti)), repr(float(zi.real)), repr(float(zi.imag))])


def disc(center=0j, radius=1.0, sample_count=1024) -> Domain:
    c = complex(center)
    return Domain(
        curves.circle_curve(c, radius, sample_count),
        lambda z: np.abs(z - c) ** 2 - radius**2,
        lambda z: 2.0 * (z - c),
        kind="disc",
        params={"center": c, "radius": float(radius)},
    )


def unit_disc(sample_count=1024) -> Domain:
    return disc(0j, 1.0, sample_count)


def ellipse(a, b, center=0j, angle=0.0, sample_count=1024) -> Domain:
    c = complex(center)
    rot = np.exp(1j * angle)

    def r(z):
        w = (z - c) / rot
        return (w.real / a) ** 2 + (w.imag / b) ** 2 - 1.0

    def grad(z):
        w = (z - c) / rot
        return (2 * w.real / a**2 + 2j * w.imag / b**2) * rot

    return Domain(
        curves.ellipse_curve(a, b, c, angle, sample_count),
        r,
        grad,
        kind="ellipse",
        params={"a": float(a), "b": float(b), "center": c, "angle": float(angle)},
    )


def smoothed_rectangle(a=1.5, b=1.0, exponent=8, sample_count=1024) -> Domain:
    p = int(exponent)

    def r(z):
        return (z.real / a) ** p + (z.imag / b) ** p - 1.0

    def grad(z):
        return p * (z.real / a) ** (p - 1) / a + 1j * p * (z.imag / b) ** (p - 1) / b

    return Domain(
        curves.superellipse_curve(a, b, p, sample_count),
        r,
        grad,
        kind="smoothed_rectangle",
        params={"a": float(a), "b": float(b), "exponent": p},
    )


def perturbed_ellipse(a, b, amplitude=0.0, frequency=3, sample_count=1024) -> Domain:
    return Domain(
        curves.perturbed_ellipse_curve(a, b, amplitude, frequency, sample_count),
        kind="perturbed_ellipse",
        params={"a": float(a), "b": float(b), "amplitude": float(amplitude), "frequency": int(frequency)},
    )


def image_of_disc(f, df, sample_count=1024, kind="image_map", params=None, **curve_kw) -> Domain:
    """Domain ``f(D)`` for a map univalent on a neighborhood of the closed disc."""
    return Domain(curves.image_curve(f, df, sample_count, **curve_kw), kind=kind, params=params or {})


def example4(sample_count=1024) -> Domain:
    """Image of the disc under ``2z + (1 - z) log(1 - z)``.

    Parametrized so that t = 0 is the image of -1 and the singular boundary
    point 2 (image of 1) sits at t = 1/2, midway between two samples.
    """
    from ..conformal import example4 as ex

    return image_of_disc(
        ex.f,
        ex.df,
        sample_count,
        kind="example4",
        params={},
        phase=0.5,
        sample_offset=0.5,
        holder_exponent=0.5,
    )


def from_table(t, z, interpolation="spline", sample_count=1024) -> Domain:
    return Domain(
        curves.table_curve(t, z, interpolation, sample_count),
        kind="param_table",
        params={"interpolation": interpolation, "rows": int(np.size(t))},
    )


def from_parametrization(gamma, dgamma, sample_count=1024, holder_exponent=1.0, **kw) -> Domain:
    return Domain(curves.BoundaryCurve(gamma, dgamma, holder_exponent, sample_count), **kw)


def build_domain(spec: Union[Mapping, str, Path]) -> Domain:
    """Build and validate a :class:`Domain` from a description.

    ``spec`` may be a mapping, a path to a JSON document, or a JSON string.
    Raises :class:`InvalidDomainError` for non-simple curves, vanishing
    tangents and unbounded descriptions.
    """
    if isinstance(spec, Path) or (isinstance(spec, str) and not spec.lstrip().startswith("{")):
        path = Path(spec)
        spec = json.loads(path.read_text())
        spec.setdefault("_base", str(path.parent))
    elif isinstance(spec, str):
        spec = json.loads(spec)
    spec = dict(spec)
    kind = spec.get("kind")
    n = int(spec.get("sample_count", 1024))
    if kind == "unit_disc":
        return unit_disc(n)
    if kind == "disc":
        return disc(as_complex(spec.get("center", 0)), _positive(spec, "radius", 1.0), n)
    if kind == "ellipse":
        return ellipse(
            _positive(spec, "a"),
            _positive(spec, "b"),
            as_complex(spec.get("center", 0)),
            float(spec.get("angle", 0.0)),
            n,
        )
    if kind == "smoothed_rectangle":
        return smoothed_rectangle(_positive(spec, "a", 1.5), _positive(spec, "b", 1.0), int(spec.get("exponent", 8)), n)
    if kind == "perturbed_ellipse":
        return perturbed_ellipse(
            _positive(spec, "a"),
            _positive(spec, "b"),
            float(spec.get("amplitude", 0.0)),
            int(spec.get("frequency", 3)),
            n,
        )
    if kind == "param_table":
        if "rows" in spec:
            tab = np.asarray(spec["rows"], dtype=float).reshape(-1, 3)
        elif "path" in spec:
            p = Path(spec["path"])
            if not p.is_absolute() and "_base" in spec:
                p = Path(spec["_base"]) / p
            tab = read_table(p)
        else:
            raise InvalidDomainError("param_table needs 'rows' or 'path'")
        return from_table(tab[:, 0], tab[:, 1] + 1j * tab[:, 2], spec.get("interpolation", "spline"), n)
    if kind == "image_map":
        name = spec.get("map")
        if name == "example4":
            return example4(n)
        if name == "polynomial":
            c = np.array([as_complex(v) for v in spec["coefficients"]])
            poly = np.polynomial.Polynomial(c)
            dpoly = poly.deriv()
            return image_of_disc(poly, dpoly, n, params={"coefficients": c.tolist()})
        if callable(spec.get("f")) and callable(spec.get("df")):
            return image_of_disc(spec["f"], spec["df"], n)
        raise InvalidDomainError(f"unknown image map {name!r}")
    if kind == "parametrization":
        return from_parametrization(spec["gamma"], spec["dgamma"], n, float(spec.get("holder_exponent", 1.0)))
    raise InvalidDomainError(f"unknown domain kind {kind!r}")
