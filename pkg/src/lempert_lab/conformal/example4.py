"""The explicit map ``f(z) = 2z + (1 - z) log(1 - z)`` of the C^1 example.

``1 - z`` has positive real part on the closed disc minus the point 1, so
the principal branch of the logarithm is used throughout.
"""

import numpy as np


def f(z):
    z = np.asarray(z, dtype=complex)
    s = 1.0 - z
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 2.0 * z + s * np.log(s)
    # (1 - z) log(1 - z) -> 0 at the singular boundary point
    return np.where(s == 0, 2.0 + 0j, out)


def df(z):
    """``f'(z) = 1 - log(1 - z)``; infinite at z = 1."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 1.0 - np.log(1.0 - z)


def ddf(z):
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 1.0 / (1.0 - z)
