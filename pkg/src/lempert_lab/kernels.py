"""Backend selection for the numerical hot loops.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
numpy versions in ``_pykernels`` are used. Setting the environment variable
``LEMPERT_LAB_PURE_PYTHON=1`` forces the numpy backend.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("LEMPERT_LAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels


def backends():
    """Return the available backend modules keyed by name."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


def cauchy_eval(nodes, weights, values, points):
    return _impl.cauchy_eval(nodes, weights, values, points)


def nearest_samples(samples, points):
    return _impl.nearest_samples(samples, points)


def nearest_two(samples, points, window):
    return _impl.nearest_two(samples, points, window)


def kerzman_stein_system(nodes, tangents, arc_weights):
    return _impl.kerzman_stein_system(nodes, tangents, arc_weights)


cauchy_eval.__doc__ = _pykernels.cauchy_eval.__doc__
nearest_samples.__doc__ = _pykernels.nearest_samples.__doc__
nearest_two.__doc__ = _pykernels.nearest_two.__doc__
kerzman_stein_system.__doc__ = _pykernels.kerzman_stein_system.__doc__
