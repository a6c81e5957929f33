import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lgsurf.expr import parse
from lgsurf.quadric import (
    GRAM, ProjPoint, QuadricError, Vec5, chart_change, chart_maps, chart_point, convert, in_o_plus, invert,
    membership, oplus_component, pairing, plucker_embed, scalar_product, so_residual, sp4, sp4_params,
    sp_to_so, sphere, surface_type_at, to_second_chart,
)

coord = st.floats(-3, 3, allow_nan=False)
params = st.lists(st.floats(-2, 2, allow_nan=False), min_size=10, max_size=10)


@settings(max_examples=40, deadline=None)
@given(coord, coord, coord)
def test_chart_points_lie_on_the_quadric(r, s, t):
    p = chart_point(r, s, t)
    assert abs(scalar_product(p.rep, p.rep)) <= 1e-9 * (1 + (r * t - s * s) ** 2)
    assert chart_maps(p) == pytest.approx((r, s, t), abs=1e-12)
    assert abs(scalar_product(p.rep.to("B_H"), p.rep)) <= 1e-9 * (1 + (r * t - s * s) ** 2)


def test_basis_change_is_an_isometry():
    x, y = np.arange(1.0, 6.0), np.array([0.5, -1, 2, 3, -0.25])
    assert pairing(x, y, "B") == pytest.approx(pairing(convert(x, "B", "B_H"), convert(y, "B", "B_H"), "B_H"))
    assert np.allclose(convert(convert(x, "B", "B_H"), "B_H", "B"), x)
    with pytest.raises(QuadricError):
        Vec5((1, 2, 3))


@settings(max_examples=40, deadline=None)
@given(params)
def test_sp_to_so_lands_in_so23(p):
    X = sp4(*p)
    assert sp4_params(X) == pytest.approx(dict(zip(
        ("a11", "a12", "a21", "a22", "b1", "b2", "b3", "c1", "c2", "c3"), p)))
    for basis in GRAM:
        assert so_residual(sp_to_so(X, basis), basis) <= 1e-12


def test_sp4_rejects_other_matrices():
    with pytest.raises(QuadricError):
        sp4_params(np.eye(4))


def test_chart_change_away_from_the_cone():
    assert chart_change(2.0, 0.0, 3.0) == pytest.approx((-0.5, 0.0, -1 / 3))
    with pytest.raises(QuadricError):
        chart_change(1.0, 1.0, 1.0)
    z = to_second_chart(chart_point(1.0, 0.0, 1.0).rep.array())
    assert z[0] == 1.0


def test_plucker_embedding_of_lagrangian_planes():
    # graph of a symmetric matrix [[r, s], [s, t]]
    r, s, t = 0.7, -0.2, 1.3
    L = np.array([[1.0, 0.0, r, s], [0.0, 1.0, s, t]])
    p = plucker_embed(L)
    assert chart_maps(p) == pytest.approx((r, s, t))
    with pytest.raises(QuadricError):
        plucker_embed(np.array([[1.0, 0, 0, 0], [0, 0, 1.0, 0]]))


def test_spheres_membership_and_inversion():
    S = sphere(chart_point(0.0, 0.0, 0.0))
    assert S.kind == "degenerate"
    assert membership(chart_point(0.0, 1.0, 0.0), sphere(chart_point(1.0, 0.0, 0.0))) is False
    assert membership(chart_point(1.0, 0.0, 0.0), sphere(chart_point(1.0, 0.0, 0.0))) is True
    T = sphere(ProjPoint.of([1.0, 0.0, 0.0, 0.0, 2.0]))
    assert T.kind in ("definite", "indefinite")
    w = chart_point(0.3, 0.1, -0.4)
    back = invert(invert(w, T), T)
    assert back.same_as(w)
    img = invert(w, T)
    assert abs(scalar_product(img.rep, img.rep)) <= 1e-9 * np.max(np.abs(img.rep.array())) ** 2
    # chart equation vanishes exactly on the sphere
    z = chart_point(0.5, 0.5, 2.0)
    S2 = sphere(z)
    assert S2.chart_equation(0.5, 0.5, 2.0) == pytest.approx(0.0, abs=1e-12)


def test_o_plus_components():
    assert in_o_plus(np.eye(5))
    flip = np.diag([1.0, 1.0, 1.0, 1.0, 1.0])
    flip[[0, 4]] = flip[[4, 0]]
    assert oplus_component(flip, "B") in ((-1, -1), (1, -1), (-1, 1))
    with pytest.raises(QuadricError):
        oplus_component(2 * np.eye(5))


@pytest.mark.parametrize("text,point,kind", [
    ("r*t + 1", (1.0, 0.0, -1.0), "hyperbolic"),
    ("r*t - 1", (1.0, 0.0, 1.0), "elliptic"),
    ("r + 2*s + t", (0.0, 0.0, 0.0), "parabolic"),
])
def test_surface_type(text, point, kind):
    assert surface_type_at(parse(text), point) == kind


def test_surface_type_off_surface():
    with pytest.raises(QuadricError):
        surface_type_at(parse("r*t + 1"), (1.0, 0.0, 1.0))
