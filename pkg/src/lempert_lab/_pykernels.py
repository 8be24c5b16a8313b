"""Pure numpy implementations of the hot kernels.

These are the reference versions; ``_ckernels`` must agree with them to
rounding error.
"""

import numpy as np

# elements per temporary (points x nodes) block
_BLOCK = 1 << 21


def _chunks(m, n):
    step = max(1, _BLOCK // max(n, 1))
    for start in range(0, m, step):
        yield slice(start, min(m, start + step))


def cauchy_eval(nodes, weights, values, points):
    """Barycentric Cauchy interpolant and its derivative.

    Parameters
    ----------
    nodes, weights, values : complex arrays of shape (N,)
        Boundary nodes ``g_k``, quadrature weights ``g'(t_k) dt`` and
        boundary data ``v_k``.
    points : complex array of shape (M,)

    Returns
    -------
    value, derivative, density : complex arrays of shape (M,)
        ``density`` is the raw sum ``sum_k w_k / (g_k - z)``; it is close to
        ``2 pi i`` inside the curve and to 0 outside.
    """
    nodes = np.asarray(nodes, dtype=complex)
    weights = np.asarray(weights, dtype=complex)
    values = np.asarray(values, dtype=complex)
    points = np.asarray(points, dtype=complex).ravel()
    m = points.size
    val = np.empty(m, dtype=complex)
    der = np.empty(m, dtype=complex)
    den = np.empty(m, dtype=complex)
    for sl in _chunks(m, nodes.size):
        z = points[sl, None]
        diff = nodes[None, :] - z
        hit = diff == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            c = weights[None, :] / diff
            d = c.sum(axis=1)
            f = (c * values[None, :]).sum(axis=1) / d
            fp = (c * (values[None, :] - f[:, None]) / diff).sum(axis=1) / d
        rows = np.nonzero(hit.any(axis=1))[0]
        for r in rows:
            k = np.argmax(hit[r])
            f[r] = values[k]
            fp[r] = np.nan
            d[r] = np.inf
        val[sl] = f
        der[sl] = fp
        den[sl] = d
    return val, der, den


def nearest_samples(samples, points):
    """Index of and distance to the nearest sample for each point."""
    samples = np.asarray(samples, dtype=complex)
    points = np.asarray(points, dtype=complex).ravel()
    idx = np.empty(points.size, dtype=np.intp)
    dist = np.empty(points.size)
    for sl in _chunks(points.size, samples.size):
        d = np.abs(samples[None, :] - points[sl, None])
        k = np.argmin(d, axis=1)
        idx[sl] = k
        dist[sl] = d[np.arange(k.size), k]
    return idx, dist


def nearest_two(samples, points, window):
    """Best sample and best sample at cyclic index distance > ``window``.

    Returns ``idx1, dist1, idx2, dist2``.
    """
    samples = np.asarray(samples, dtype=complex)
    points = np.asarray(points, dtype=complex).ravel()
    n = samples.size
    m = points.size
    i1 = np.empty(m, dtype=np.intp)
    d1 = np.empty(m)
    i2 = np.empty(m, dtype=np.intp)
    d2 = np.empty(m)
    ks = np.arange(n)
    for sl in _chunks(m, n):
        d = np.abs(samples[None, :] - points[sl, None])
        k = np.argmin(d, axis=1)
        rows = np.arange(k.size)
        i1[sl] = k
        d1[sl] = d[rows, k]
        gap = np.abs(ks[None, :] - k[:, None])
        gap = np.minimum(gap, n - gap)
        d = np.where(gap > window, d, np.inf)
        k2 = np.argmin(d, axis=1)
        i2[sl] = k2
        d2[sl] = d[rows, k2]
    return i1, d1, i2, d2


def kerzman_stein_system(nodes, tangents, arc_weights):
    """Nyström matrix ``I + A W`` for the Kerzman-Stein equation.

    ``A(w, z) = conj(H(z, w)) - H(w, z)`` with the Cauchy kernel
    ``H(w, z) = T(z) / (2 pi i (z - w))``; the kernel is continuous with
    zero diagonal on a smooth curve.
    """
    g = np.asarray(nodes, dtype=complex)
    tau = np.asarray(tangents, dtype=complex)
    wts = np.asarray(arc_weights, dtype=float)
    n = g.size
    diff = g[None, :] - g[:, None]  # z - w, rows w
    np.fill_diagonal(diff, 1.0)
    h_wz = tau[None, :] / (2j * np.pi * diff)
    h_zw = tau[:, None] / (2j * np.pi * -diff)
    a = np.conj(h_zw) - h_wz
    np.fill_diagonal(a, 0.0)
    a *= wts[None, :]
    a[np.diag_indices(n)] += 1.0
    return a
