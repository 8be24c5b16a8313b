import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lempert_lab.domain import (
    RegularityBudget,
    build_domain,
    cone_domains,
    disc,
    ellipse,
    inward_normal,
    normalize_at,
    regularity_check,
    signed_distance,
    unit_disc,
)
from lempert_lab.domain import curves
from lempert_lab.domain.build import from_table, write_table
from lempert_lab.errors import InvalidDomainError


def test_unit_disc_basic(disc_domain):
    assert signed_distance(disc_domain, 0j) == pytest.approx(1.0, abs=1e-12)
    assert disc_domain.area == pytest.approx(np.pi, rel=1e-6)


def test_ellipse_box_and_membership(ellipse_domain):
    assert np.allclose(ellipse_domain.bounding_box, [-2, 2, -1, 1], atol=1e-9)
    assert ellipse_domain.contains(0j)


def test_figure_eight_rejected():
    spec = {
        "kind": "parametrization",
        "gamma": lambda t: np.sin(2 * np.pi * t) + 0.5j * np.sin(4 * np.pi * t),
        "dgamma": lambda t: 2 * np.pi * np.cos(2 * np.pi * t) + 2j * np.pi * np.cos(4 * np.pi * t),
    }
    with pytest.raises(InvalidDomainError, match="non-simple"):
        build_domain(spec)


def test_unbounded_and_unknown_specs_rejected():
    with pytest.raises(InvalidDomainError):
        build_domain({"kind": "ellipse", "a": -1, "b": 1})
    with pytest.raises(InvalidDomainError):
        build_domain({"kind": "nonsense"})


def test_build_from_json_string_and_file(tmp_path):
    D = build_domain('{"kind": "ellipse", "a": 2, "b": 1}')
    assert D.signed_distance(0j) == pytest.approx(1.0, abs=1e-9)
    p = tmp_path / "d.json"
    p.write_text(json.dumps({"kind": "disc", "center": [1, 0], "radius": 2}))
    D = build_domain(str(p))
    assert D.signed_distance(1 + 0j) == pytest.approx(2.0, abs=1e-9)


def test_param_table_roundtrip(tmp_path):
    t = np.arange(256) / 256
    z = 2 * np.cos(2 * np.pi * t) + 1j * np.sin(2 * np.pi * t)
    path = tmp_path / "ellipse.csv"
    write_table(path, t, z)
    D = build_domain({"kind": "param_table", "path": str(path)})
    assert D.signed_distance(0j) == pytest.approx(1.0, abs=1e-6)
    D2 = from_table(t, z)
    assert D2.signed_distance(1.5 + 0j) == pytest.approx(0.5, abs=1e-3)


@pytest.mark.parametrize("z, expected", [(0.3, 0.7), (2.0, -1.0), (0.0, 1.0)])
def test_signed_distance_disc(disc_domain, z, expected):
    assert signed_distance(disc_domain, z) == pytest.approx(expected, abs=1e-12)


def test_signed_distance_ellipse_center(ellipse_domain):
    assert signed_distance(ellipse_domain, 0j) == pytest.approx(1.0, abs=1e-10)


def test_inward_normals(disc_domain, ellipse_domain):
    assert inward_normal(disc_domain, 0.0) == pytest.approx(-1.0, abs=1e-12)
    assert inward_normal(disc_domain, 0.25) == pytest.approx(-1j, abs=1e-12)
    assert inward_normal(ellipse_domain, 0.0) == pytest.approx(-1.0, abs=1e-12)


def test_normalize_at(disc_domain, ellipse_domain):
    Da, motion = normalize_at(disc_domain, 1.0)
    assert motion(1.0) == pytest.approx(0.0)
    assert Da.signed_distance(0.1) == pytest.approx(0.1, abs=1e-9)
    Db, _ = normalize_at(disc_domain, 1j)
    assert Db.signed_distance(0.3 + 0.2j) == pytest.approx(Da.signed_distance(0.3 + 0.2j), abs=1e-9)
    Dc, _ = normalize_at(ellipse_domain, 1j)
    assert Dc.signed_distance(0.1) > 0
    assert Dc.signed_distance(0.1) == pytest.approx(0.1, abs=1e-9)
    with pytest.raises(InvalidDomainError):
        normalize_at(disc_domain, 0.5)


def test_cone_domains():
    pair = cone_domains(0.5)
    assert pair.in_inner(0.5)
    assert not pair.in_inner(-0.5)
    assert not pair.in_outer(-0.5)
    assert pair.in_inner_raw(0.2 + 0.3j)
    assert pair.in_inner(0.2 + 0.3j)
    assert max(pair.tangency_offsets) <= 0.5 / 10 + 1e-12


def test_regularity():
    assert regularity_check(unit_disc(), RegularityBudget(0.5, 0.2)).passed
    rep = regularity_check(ellipse(2, 1), RegularityBudget(0.3, 0.1))
    assert rep.passed and rep.gradient_min > 0.3
    sq = build_domain({"kind": "param_table", "rows": _square_rows(), "interpolation": "linear"})
    assert not regularity_check(sq, RegularityBudget(0.5, 0.1)).passed
    with pytest.raises(ValueError):
        RegularityBudget(0.0, 0.1)


def _square_rows():
    t = np.arange(64) / 64
    side = (t * 4).astype(int)
    s = t * 4 - side
    corners = np.array([1 - 1j, 1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j])
    z = corners[side] + s * (corners[side + 1] - corners[side])
    return np.column_stack([t, z.real, z.imag]).tolist()


def test_curve_invariants(ellipse_domain):
    g = ellipse_domain.boundary
    assert abs(g(0.0) - g(1.0)) < 1e-12
    assert np.all(np.abs(g.tangents) > 0)
    assert g.signed_area > 0


def test_fillet_tangency():
    a = curves.segment_piece(-1 + 0j, 0j)
    b = curves.segment_piece(0j, 1j)
    (ain, arc, bout), offs = curves.fillet(a, b, 0.1)
    assert abs(ain.pos(ain.s1) - arc.pos(arc.s0)) < 1e-10
    assert abs(arc.pos(arc.s1) - bout.pos(bout.s0)) < 1e-10
    assert all(o == pytest.approx(0.1, rel=1e-6) for o in offs)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(0.3, 3.0),
    st.floats(0.3, 3.0),
    st.floats(-0.99, 0.99),
    st.floats(-np.pi, np.pi),
)
def test_distance_lipschitz_and_motion_invariance(a, b, r, th):
    D = ellipse(a, b, sample_count=512)
    z = r * min(a, b) * np.exp(1j * th)
    w = z + 0.01 * np.exp(1j * (th + 1))
    assert abs(D.signed_distance(z) - D.signed_distance(w)) <= abs(z - w) + 1e-9
    from lempert_lab.domain import RigidMotion

    m = RigidMotion(0.3 - 0.2j, np.exp(1j * th))
    assert D.transformed(m).signed_distance(m(z)) == pytest.approx(D.signed_distance(z), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 5.0), st.complex_numbers(max_magnitude=3))
def test_disc_signed_distance_property(radius, c):
    D = disc(c, radius, 512)
    z = c + 0.5 * radius * np.exp(0.3j)
    assert D.signed_distance(z) == pytest.approx(0.5 * radius, rel=1e-9)
