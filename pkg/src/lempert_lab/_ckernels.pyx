# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, M_PI, NAN, INFINITY

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex conj(double complex)
    double cabs(double complex)


def cauchy_eval(nodes, weights, values, points):
    cdef const double complex[::1] g = np.ascontiguousarray(nodes, dtype=np.complex128)
    cdef const double complex[::1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef const double complex[::1] v = np.ascontiguousarray(values, dtype=np.complex128)
    cdef const double complex[::1] z = np.ascontiguousarray(np.ravel(points), dtype=np.complex128)
    cdef Py_ssize_t n = g.shape[0], m = z.shape[0], i, k, hit
    out_val = np.empty(m, dtype=np.complex128)
    out_der = np.empty(m, dtype=np.complex128)
    out_den = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] val = out_val
    cdef double complex[::1] der = out_der
    cdef double complex[::1] den = out_den
    cdef double complex c, d, num, f, fp, diff, zi
    with nogil:
        for i in range(m):
            zi = z[i]
            d = 0
            num = 0
            hit = -1
            for k in range(n):
                diff = g[k] - zi
                if diff == 0:
                    hit = k
                    break
                c = w[k] / diff
                d = d + c
                num = num + c * v[k]
            if hit >= 0:
                val[i] = v[hit]
                der[i] = NAN
                den[i] = INFINITY
                continue
            f = num / d
            fp = 0
            for k in range(n):
                diff = g[k] - zi
                fp = fp + w[k] * (v[k] - f) / (diff * diff)
            val[i] = f
            der[i] = fp / d
            den[i] = d
    return out_val, out_der, out_den


def nearest_samples(samples, points):
    cdef const double complex[::1] s = np.ascontiguousarray(samples, dtype=np.complex128)
    cdef const double complex[::1] z = np.ascontiguousarray(np.ravel(points), dtype=np.complex128)
    cdef Py_ssize_t n = s.shape[0], m = z.shape[0], i, k, best
    out_idx = np.empty(m, dtype=np.intp)
    out_dist = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t[::1] idx = out_idx
    cdef double[::1] dist = out_dist
    cdef double dx, dy, r, rbest
    with nogil:
        for i in range(m):
            best = 0
            rbest = 1e308
            for k in range(n):
                dx = s[k].real - z[i].real
                dy = s[k].imag - z[i].imag
                r = dx * dx + dy * dy
                if r < rbest:
                    rbest = r
                    best = k
            idx[i] = best
            dist[i] = sqrt(rbest)
    return out_idx, out_dist


def nearest_two(samples, points, Py_ssize_t window):
    cdef const double complex[::1] s = np.ascontiguousarray(samples, dtype=np.complex128)
    cdef const double complex[::1] z = np.ascontiguousarray(np.ravel(points), dtype=np.complex128)
    cdef Py_ssize_t n = s.shape[0], m = z.shape[0], i, k, b1, b2, gap
    o_i1 = np.empty(m, dtype=np.intp)
    o_d1 = np.empty(m, dtype=np.float64)
    o_i2 = np.empty(m, dtype=np.intp)
    o_d2 = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t[::1] i1 = o_i1
    cdef Py_ssize_t[::1] i2 = o_i2
    cdef double[::1] d1 = o_d1
    cdef double[::1] d2 = o_d2
    cdef double dx, dy, r, r1, r2
    with nogil:
        for i in range(m):
            b1 = 0
            r1 = 1e308
            for k in range(n):
                dx = s[k].real - z[i].real
                dy = s[k].imag - z[i].imag
                r = dx * dx + dy * dy
                if r < r1:
                    r1 = r
                    b1 = k
            b2 = 0
            r2 = INFINITY
            for k in range(n):
                gap = k - b1
                if gap < 0:
                    gap = -gap
                if n - gap < gap:
                    gap = n - gap
                if gap <= window:
                    continue
                dx = s[k].real - z[i].real
                dy = s[k].imag - z[i].imag
                r = dx * dx + dy * dy
                if r < r2:
                    r2 = r
                    b2 = k
            i1[i] = b1
            d1[i] = sqrt(r1)
            i2[i] = b2
            d2[i] = sqrt(r2)
    return o_i1, o_d1, o_i2, o_d2


def kerzman_stein_system(nodes, tangents, arc_weights):
    cdef const double complex[::1] g = np.ascontiguousarray(nodes, dtype=np.complex128)
    cdef const double complex[::1] tau = np.ascontiguousarray(tangents, dtype=np.complex128)
    cdef const double[::1] wts = np.ascontiguousarray(arc_weights, dtype=np.float64)
    cdef Py_ssize_t n = g.shape[0], i, j
    out = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] a = out
    cdef double complex two_pi_i = 2j * M_PI
    cdef double complex d, h_wz, h_zw
    with nogil:
        for i in range(n):
            for j in range(n):
                if i == j:
                    a[i, j] = 1.0
                    continue
                d = g[j] - g[i]
                h_wz = tau[j] / (two_pi_i * d)
                h_zw = tau[i] / (two_pi_i * (-d))
                a[i, j] = (conj(h_zw) - h_wz) * wts[j]
    return out
