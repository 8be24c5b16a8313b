import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lempert_lab.discs import (
    DiscBuilder,
    InterpolationSystem,
    PolynomialCurve,
    Space,
    admissibility_check,
    lemma3_curve,
    lempert_upper_bound,
    perturbed_disc,
    pullback_domain,
    solve_interpolation,
    theorem1_constant,
)
from lempert_lab.domain import BallDomain, ellipse, unit_disc
from lempert_lab.errors import ConvergenceError, InvalidDomainError, StageError
from lempert_lab.metrics import lempert_ball, lempert_planar


def _v(*x):
    return np.array(x, dtype=complex)


def identity_curve():
    cheb = np.array([[0], [1]], dtype=complex)
    return PolynomialCurve(cheb, _v(1), _v(-1), _v(-1), _v(1))


@pytest.fixture(scope="module")
def ball_curve():
    return lemma3_curve(BallDomain(2), _v(1, 0), _v(-1, 0))


def test_identity_curve_is_admissible():
    D = unit_disc()
    c = identity_curve()
    assert all(e < 1e-12 for e in c.endpoint_errors().values())
    rep = admissibility_check(D, c)
    assert rep.passed and rep.delta3 > 0


def test_lemma3_disc_and_ellipse(disc_domain, ellipse_domain):
    c = lemma3_curve(disc_domain, 1.0, -1.0)
    assert all(e < 1e-10 for e in c.endpoint_errors().values())
    assert np.allclose(c(np.linspace(-1, 1, 11))[:, 0], np.linspace(-1, 1, 11), atol=1e-10)
    e = lemma3_curve(ellipse_domain, 2.0, -2.0)
    assert all(x < 1e-10 for x in e.endpoint_errors().values())
    t = np.linspace(-0.999, 0.999, 401)
    assert np.all(ellipse_domain.signed_distance(e(t)[:, 0]) > 0)
    assert np.max(np.abs(e(t)[:, 0].imag)) < 1e-10
    rep = admissibility_check(ellipse_domain, e)
    assert rep.passed and rep.delta3 > 0


def test_lemma3_ball(ball_curve):
    assert all(x < 1e-10 for x in ball_curve.endpoint_errors().values())
    assert np.allclose(ball_curve.derivative(np.array([1.0]))[0], _v(1, 0), atol=1e-10)
    assert admissibility_check(BallDomain(2), ball_curve).passed


def test_lemma3_same_endpoint(ellipse_domain):
    c = lemma3_curve(ellipse_domain, 2.0, 2.0)
    assert all(x < 1e-10 for x in c.endpoint_errors().values())
    assert admissibility_check(ellipse_domain, c).passed


def test_curve_leaving_domain_fails(disc_domain):
    # phi(t) = t + 2i (1 - t^2) keeps the endpoints but bulges out of the disc
    cheb = np.array([[1j], [1], [-1j]], dtype=complex)
    c = PolynomialCurve(cheb, _v(1), _v(-1), _v(-1), _v(1))
    rep = admissibility_check(disc_domain, c)
    assert not rep.passed and "containment" in rep.reason


def test_lemma3_rejects_interior_point(disc_domain):
    with pytest.raises(InvalidDomainError):
        lemma3_curve(disc_domain, 0.5, -1.0)


def test_perturbed_disc(ball_curve):
    d0 = perturbed_disc(ball_curve)
    z = np.linspace(-1, 1, 7)
    assert np.allclose(d0(z), ball_curve(z))
    s = 0.1
    d = perturbed_disc(ball_curve, _v(0, s), _v(0, 0.3j))
    assert np.allclose(d(np.array([1.0]))[0], _v(1, s))
    assert np.allclose(d(np.array([-1.0]))[0], _v(-1, 0.3j))
    with pytest.raises(InvalidDomainError):
        perturbed_disc(ball_curve, _v(0.1, 0))
    # Chebyshev coefficients reproduce the evaluation
    from numpy.polynomial import chebyshev as C

    zz = np.array([0.3 + 0.2j, -0.7j])
    assert np.allclose(np.stack([C.chebval(zz, d.cheb[:, k]) for k in range(2)], axis=1), d(zz))


def test_solve_interpolation_disc():
    D = unit_disc()
    r = solve_interpolation(D, identity_curve(), 0.99, -0.99)
    assert r.zeta1 == pytest.approx(0.99) and r.zeta2 == pytest.approx(-0.99)
    r = solve_interpolation(D, identity_curve(), 1.0, -1.0)
    assert r.zeta1 == pytest.approx(1.0) and r.iterations == 0


def test_solve_interpolation_ball(ball_curve):
    z, w = _v(0.99, 0.005), _v(-0.99, 0)
    r = solve_interpolation(BallDomain(2), ball_curve, z, w)
    assert r.residual < 1e-10
    d = perturbed_disc(ball_curve, r.u, r.v)
    assert np.allclose(d(np.array([r.zeta1, r.zeta2])), np.stack([z, w]), atol=1e-10)


def test_solve_interpolation_iteration_cap(ball_curve):
    with pytest.raises(ConvergenceError):
        solve_interpolation(BallDomain(2), ball_curve, _v(0.2, 0.7), _v(-0.1, -0.8j), maxiter=1)


def test_jacobian_matches_differences(ball_curve, rng):
    sp = Space(BallDomain(2))
    S = InterpolationSystem(ball_curve, sp.tangent_basis(ball_curve.a), sp.tangent_basis(ball_curve.b))
    for _ in range(10):
        x = S.seed() + 0.05 * (rng.normal(size=4) + 1j * rng.normal(size=4))
        J = S.jacobian(x)
        h = 1e-6
        num = np.stack([(S(x + h * e) - S(x - h * e)) / (2 * h) for e in np.eye(4)], axis=1)
        assert np.max(np.abs(num - J)) / np.max(np.abs(J)) < 1e-6


def test_pullback_disc_identity():
    c = identity_curve()
    pb = pullback_domain(unit_disc(), perturbed_disc(c), 0.2, 0.1)
    assert pb.contains_rectangle()
    assert pb.base.contains(0j)
    with pytest.raises(InvalidDomainError):
        pullback_domain(unit_disc(), perturbed_disc(c), 0.1, 0.2)


def test_pullback_ellipse_symmetric(ellipse_domain):
    c = lemma3_curve(ellipse_domain, 2.0, -2.0)
    pb = pullback_domain(ellipse_domain, perturbed_disc(c), 0.2, 0.1)
    y = np.linspace(-0.1, 0.1, 9)
    assert np.allclose(pb.arc_right(y), pb.arc_right(-y), atol=1e-8)
    pts = np.array([0.3 + 0.05j, -0.9 + 0.08j, 1.05 - 0.02j])
    assert np.allclose(pb.base.signed_distance(pts), pb.base.signed_distance(np.conj(pts)), atol=1e-8)


def test_upper_bound_disc():
    u, cert = lempert_upper_bound(unit_disc(), 0.9, -0.9, 1.0, -1.0)
    assert u >= 1.8 / 1.81
    e = cert.extras
    assert e["interpolation_error"] < 1e-6 and e["interior_mapping"] and e["rim_inside"]
    assert e["kappa"] > 0 and e["theorem1_chain"]
    assert cert.upper_bound == u and abs(cert.q1) == pytest.approx(1.0)
    assert set(cert.to_json()) >= {"p1", "p2", "q1", "q2", "upper_bound", "kappa"}


def test_upper_bound_ball():
    z, w = _v(0.9, 0), _v(-0.9, 0)
    u, cert = lempert_upper_bound(BallDomain(2), z, w, _v(1, 0), _v(-1, 0))
    assert u >= lempert_ball(z, w)
    assert cert.extras["theorem1_chain"] and cert.extras["interior_mapping"]


def test_upper_bound_ellipse(ellipse_domain, ellipse_map):
    b = DiscBuilder(ellipse_domain)
    for z, w in ((1.9, -1.95), (1.99 + 0.005j, -1.9)):
        u, cert = b.bound(z, w, 2.0, -2.0)
        assert u >= lempert_planar(ellipse_domain, ellipse_map, z, w) - 1e-6
        assert cert.extras["interpolation_error"] < 1e-6


def test_builder_stage_errors(disc_domain):
    b = DiscBuilder(disc_domain)
    with pytest.raises(StageError) as info:
        b.bound(0.9, -0.9, 0.5, -1.0)
    assert info.value.stage == "lemma3_curve"


def test_theorem1_constant(disc_domain, ellipse_domain, ellipse_map):
    c = theorem1_constant(disc_domain, params=24)
    assert c.c_estimate >= 0.49
    e1 = theorem1_constant(ellipse_domain, ellipse_map, params=32).c_estimate
    e2 = theorem1_constant(ellipse_domain, ellipse_map, params=64).c_estimate
    assert e1 > 0 and abs(e2 - e1) <= 0.05 * e1


def test_theorem1_collapses_on_example4(example4_pair):
    D, m = example4_pair
    from lempert_lab.metrics import boundary_ratios

    vals = [boundary_ratios(D, m, 0j, 2 - 10.0**-k).theorem1 for k in (1, 3, 5)]
    assert vals[0] > vals[1] > vals[2]


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(1e-3, 0.2), st.floats(1e-3, 0.2))
def test_interpolation_roundtrip_property(s, t, dz, dw):
    D = unit_disc()
    c = identity_curve()
    z = (1 - dz) * np.exp(0.3j * s)
    w = -(1 - dw) * np.exp(0.3j * t)
    r = solve_interpolation(D, c, z, w)
    assert abs(r.zeta1 - z) < 1e-9 and abs(r.zeta2 - w) < 1e-9
