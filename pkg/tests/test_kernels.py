import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lempert_lab import _pykernels, kernels

BACKENDS = kernels.backends()


def _ellipse_nodes(n):
    t = np.arange(n) / n
    z = 2 * np.cos(2 * np.pi * t) + 1j * np.sin(2 * np.pi * t)
    dz = 2 * np.pi * (-2 * np.sin(2 * np.pi * t) + 1j * np.cos(2 * np.pi * t))
    return z, dz


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS


def test_pure_python_forced():
    env = {**os.environ, "LEMPERT_LAB_PURE_PYTHON": "1"}
    out = subprocess.run(
        [sys.executable, "-c", "import lempert_lab.kernels as k; print(k.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"


def test_cauchy_reproduces_polynomial():
    z, dz = _ellipse_nodes(256)
    f = z**3 - 2 * z
    p = np.array([0.1 + 0.2j, -1.5 + 0.1j, 1.9 + 0j])
    v, d, _ = kernels.cauchy_eval(z, dz / 256, f, p)
    assert np.allclose(v, p**3 - 2 * p, atol=1e-10)
    assert np.allclose(d, 3 * p**2 - 2, atol=1e-8)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
@settings(max_examples=25, deadline=None)
@given(st.integers(16, 256), st.integers(1, 50), st.integers(0, 2**31 - 1))
def test_backends_agree(n, m, seed):
    rng = np.random.default_rng(seed)
    z, dz = _ellipse_nodes(n)
    vals = rng.normal(size=n) + 1j * rng.normal(size=n)
    r = 0.95 * np.sqrt(rng.random(m))
    a = 2 * np.pi * rng.random(m)
    pts = r * (2 * np.cos(a) + 1j * np.sin(a))
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    for x, y in zip(py.cauchy_eval(z, dz / n, vals, pts), cy.cauchy_eval(z, dz / n, vals, pts)):
        assert np.allclose(x, y, rtol=1e-11, atol=1e-11)
    (i1, d1), (i2, d2) = py.nearest_samples(z, pts), cy.nearest_samples(z, pts)
    assert np.array_equal(i1, i2) and np.allclose(d1, d2, rtol=1e-14)
    sp = np.abs(dz)
    assert np.allclose(py.kerzman_stein_system(z, dz / sp, sp / n), cy.kerzman_stein_system(z, dz / sp, sp / n), atol=1e-13)
    k1 = py.nearest_two(z, pts, 3)
    k2 = cy.nearest_two(z, pts, 3)
    for x, y in zip(k1, k2):
        assert np.allclose(x, y)


def test_kerzman_stein_matrix_structure():
    z, dz = _ellipse_nodes(64)
    sp = np.abs(dz)
    A = _pykernels.kerzman_stein_system(z, dz / sp, sp / 64) - np.eye(64)
    assert np.allclose(np.diag(A), 0)
    W = np.diag(np.sqrt(sp / 64))
    S = W @ A @ np.linalg.inv(W)
    assert np.allclose(S, -S.conj().T, atol=1e-12)
