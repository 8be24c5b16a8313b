import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lempert_lab.conformal import (
    AffineDiscMap,
    NumericalRiemannMap,
    build_riemann_map,
    cauchy_riemann_residual,
    disc_automorphism,
    map_forward,
    map_inverse,
)
from lempert_lab.conformal import example4 as ex
from lempert_lab.domain import disc, ellipse, perturbed_ellipse, unit_disc
from lempert_lab.errors import BoundaryProximityError, OutsideDomainError


def interior_grid(D, n=20, margin=0.05):
    x0, x1, y0, y1 = D.bounding_box
    X, Y = np.meshgrid(np.linspace(x0, x1, n), np.linspace(y0, y1, n))
    Z = (X + 1j * Y).ravel()
    return Z[D.signed_distance(Z) > margin]


def test_identity_and_scaling():
    m = build_riemann_map(unit_disc(), 0j)
    assert isinstance(m, AffineDiscMap)
    v, d = map_forward(m, 0.3 + 0.1j)
    assert v == pytest.approx(0.3 + 0.1j) and d == pytest.approx(1.0)
    assert map_inverse(m, 0.4j) == pytest.approx(0.4j)
    s = build_riemann_map(disc(0j, 2.0), 0j)
    v, d = map_forward(s, 1.0)
    assert v == pytest.approx(0.5) and d == pytest.approx(0.5)
    assert map_inverse(s, 0.5) == pytest.approx(1.0)


def test_disc_automorphism():
    m = disc_automorphism(0.5)
    assert m.forward(0.5)[0] == pytest.approx(0, abs=1e-15)
    assert m.forward(0.0)[0] == pytest.approx(-0.5)
    z = np.array([0.1 + 0.2j, -0.7j, 0.9])
    assert np.allclose(m.inverse(m.forward(z)[0]), z, atol=1e-14)
    assert np.allclose(disc_automorphism(0).forward(z)[0], z)


def test_ellipse_map(ellipse_domain, ellipse_map):
    m = ellipse_map
    assert isinstance(m, NumericalRiemannMap)
    v, d = map_forward(m, 0j)
    assert abs(v) < 1e-12 and abs(d.imag) < 1e-12 and d.real > 0
    Z = interior_grid(ellipse_domain)
    W, _ = m.forward(Z)
    assert np.max(np.abs(m.inverse(W) - Z)) < 1e-8
    assert np.allclose(m.forward(np.conj(Z))[0], np.conj(W), atol=1e-10)
    assert cauchy_riemann_residual(m, Z) < 1e-6


def test_boundary_correspondence_monotone(ellipse_map):
    t, w = ellipse_map.boundary_correspondence()
    ang = np.unwrap(np.angle(w))
    assert np.all(np.diff(ang) > 0)
    assert np.allclose(np.abs(w), 1)


def test_export_correspondence(tmp_path, ellipse_map):
    path = tmp_path / "corr.csv"
    ellipse_map.export_correspondence(path)
    rows = path.read_text().splitlines()
    assert len(rows) == ellipse_map.node_count + 1


def test_collar_and_outside(ellipse_map):
    with pytest.raises(OutsideDomainError):
        ellipse_map.forward(3.0)
    with pytest.raises(BoundaryProximityError):
        ellipse_map.forward(2 - 1e-9)
    with pytest.raises(BoundaryProximityError):
        NumericalRiemannMap(ellipse(2, 1), 2 - 1e-8)


def test_example4_formula(example4_pair):
    assert ex.f(0) == 0
    assert ex.f(-1) == pytest.approx(-2 + 2 * np.log(2))
    assert ex.f(1 - 1e-12) == pytest.approx(2, abs=1e-9)
    D, m = example4_pair
    assert D.signed_distance(1.9) > 0
    p, _ = m.to_disc(np.array([1.5, 1.9, 1.99]))
    assert np.all(np.diff(np.abs(p)) > 0)
    z = np.array([0.3 + 0.2j, -0.4j, 1.8])
    assert np.allclose(m.forward(m.inverse(z))[0], z, atol=1e-12)


def test_inverse_map_is_holomorphic_interpolant(ellipse_map):
    zeta = 0.7 * np.exp(2j * np.pi * np.arange(16) / 16)
    f, df, _ = ellipse_map.inverse_map(zeta)
    assert np.allclose(ellipse_map.forward(f)[0], zeta, atol=1e-10)
    h = 1e-6
    fd = (ellipse_map.inverse_map(zeta + h)[0] - ellipse_map.inverse_map(zeta - h)[0]) / (2 * h)
    assert np.allclose(fd, df, rtol=1e-6)


@settings(max_examples=15, deadline=None)
@given(st.floats(1.0, 2.5), st.floats(0.5, 1.0), st.floats(0.0, 0.08), st.integers(2, 6))
def test_round_trip_property(a, b, amp, freq):
    D = perturbed_ellipse(a, b, amp, freq, 512)
    m = build_riemann_map(D, 0j)
    Z = interior_grid(D, 9, 0.05 * b)
    W, dW = m.forward(Z)
    assert np.all(np.abs(W) < 1)
    assert np.all(np.abs(dW) > 0)
    assert np.max(np.abs(m.inverse(W) - Z)) < 1e-8
