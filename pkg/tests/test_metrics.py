import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lempert_lab.conformal import build_riemann_map
from lempert_lab.domain import disc, unit_disc
from lempert_lab.errors import OutsideDomainError
from lempert_lab.metrics import (
    MetricSample,
    ball_ratios,
    boundary_ratios,
    estimate1_ratio,
    kobayashi_distance,
    kobayashi_royden,
    lempert_ball,
    lempert_disc,
    lempert_disc_complement,
    lempert_planar,
    write_samples,
)

disc_points = st.builds(
    lambda r, a: r * np.exp(1j * a), st.floats(0, 0.999), st.floats(-np.pi, np.pi)
)


@pytest.fixture(scope="module")
def U():
    D = unit_disc()
    return D, build_riemann_map(D, 0j)


def test_lempert_disc_values():
    assert lempert_disc(0, 0.5) == pytest.approx(0.5)
    assert lempert_disc(0.3, 0.3) == 0
    assert lempert_disc(0.3, 0.5) == pytest.approx(0.2 / 0.85)
    with pytest.raises(OutsideDomainError):
        lempert_disc(0, 1.0)


def test_complement_accuracy():
    z, w = 1 - 1e-9, -(1 - 1e-9)
    l, oml = lempert_disc_complement(z, w)
    assert oml == pytest.approx(0.5e-18, rel=1e-6)


def test_planar(U):
    D, m = U
    assert lempert_planar(D, m, 0, 0.5) == pytest.approx(0.5)
    D2 = disc(0j, 2.0)
    assert lempert_planar(D2, build_riemann_map(D2, 0j), 0, 1) == pytest.approx(0.5)


def test_kobayashi_royden(U):
    D, m = U
    assert kobayashi_royden(D, m, 0j) == pytest.approx(1.0)
    assert kobayashi_royden(D, m, 0.5) == pytest.approx(4 / 3)
    D3 = disc(0j, 3.0)
    assert kobayashi_royden(D3, build_riemann_map(D3, 0j), 0j) == pytest.approx(1 / 3)


def test_kobayashi_distance(U):
    D, m = U
    assert kobayashi_distance(D, m, 0, 0.5) == pytest.approx(np.arctanh(0.5))
    assert kobayashi_distance(D, m, 0.2, 0.2) == 0
    k = lambda a, b: kobayashi_distance(D, m, a, b)
    assert k(0, 0.8) == pytest.approx(k(0, 0.4) + k(0.4, 0.8), rel=1e-12)
    assert k(0, 0.8) <= k(0, 0.4j) + k(0.4j, 0.8)


def test_ball():
    w = np.array([0.3, 0.4j])
    assert lempert_ball(np.zeros(2), w) == pytest.approx(0.5)
    assert lempert_ball(w, w) == pytest.approx(0, abs=1e-8)


def test_ball_reduces_to_disc(rng):
    r = 0.999 * np.sqrt(rng.random((1000, 2)))
    a = 2 * np.pi * rng.random((1000, 2))
    p = r * np.exp(1j * a)
    assert np.allclose(lempert_ball(p[:, :1], p[:, 1:]), lempert_disc(p[:, 0], p[:, 1]), atol=1e-12)


def test_boundary_ratios(U):
    D, m = U
    s = boundary_ratios(D, m, 0, 0.9)
    assert s.theorem1 == pytest.approx(1.0, rel=1e-9)
    s = boundary_ratios(D, m, 0.9, -0.9)
    assert s.lempert == pytest.approx(1.8 / 1.81)
    assert s.theorem1 == pytest.approx(1 / 1.81, rel=1e-9)
    row = s.row()
    assert row["theorem1"] == s.theorem1


def test_example4_ratio_decreases(example4_pair):
    D, m = example4_pair
    ratios = [boundary_ratios(D, m, 2 - 10.0**-k, 0).estimate2 for k in (1, 2, 3)]
    assert ratios[0] > ratios[1] > ratios[2]


def test_estimate1(U, ellipse_domain, ellipse_map):
    D, m = U
    assert estimate1_ratio(D, m, 0j) == pytest.approx(1.0)
    assert estimate1_ratio(D, m, 0.5) == pytest.approx(2 / 3)
    x0, x1, y0, y1 = ellipse_domain.bounding_box
    X, Y = np.meshgrid(np.linspace(x0, x1, 25), np.linspace(y0, y1, 25))
    Z = (X + 1j * Y).ravel()
    Z = Z[ellipse_domain.signed_distance(Z) > 1e-3]
    r = estimate1_ratio(ellipse_domain, ellipse_map, Z)
    assert np.all((r >= 0.25) & (r <= 1 + 1e-9))


def test_metric_sample_validation():
    with pytest.raises(ValueError):
        MetricSample(0j, 0j, 1.0, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        MetricSample(0j, 0j, 0.5, 0.5, 0.0, 1.0)


def test_write_samples(tmp_path, U):
    D, m = U
    path = tmp_path / "s.csv"
    write_samples(path, [boundary_ratios(D, m, 0.1, 0.5), boundary_ratios(D, m, 0.2j, -0.5)])
    lines = path.read_text().splitlines()
    assert lines[0].startswith("re_z,im_z") and len(lines) == 3
    s = ball_ratios(np.array([0.1, 0j]), np.array([0j, 0.5]))
    assert "re_z2" in s.row()


@settings(max_examples=100, deadline=None)
@given(disc_points, disc_points, disc_points)
def test_disc_metric_properties(z, w, u):
    l = lempert_disc(z, w)
    assert 0 <= l < 1
    assert l == pytest.approx(lempert_disc(w, z), abs=1e-12)
    a = 0.3 - 0.2j
    mob = lambda x: (x - a) / (1 - np.conj(a) * x)
    assert lempert_disc(mob(z), mob(w)) == pytest.approx(l, abs=1e-9)
    k = lambda x, y: np.arctanh(lempert_disc(x, y))
    assert k(z, w) <= k(z, u) + k(u, w) + 1e-9


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-6, 0.5), st.floats(1e-6, 0.5), st.floats(-np.pi, np.pi), st.floats(-np.pi, np.pi))
def test_theorem1_ratio_on_disc_at_least_half(dz, dw, a, b):
    z, w = (1 - dz) * np.exp(1j * a), (1 - dw) * np.exp(1j * b)
    _, oml = lempert_disc_complement(z, w)
    # 1 - l >= (1 - l^2) / 2 and |1 - conj(z) w| <= 2
    assert oml / (dz * dw) >= (2 - dz) * (2 - dw) / 8 * (1 - 1e-9)
