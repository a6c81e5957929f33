import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _charts import implicit_chart
from lgsurf.errors import ChartError, NotHyperbolic
from lgsurf.expr import evaluate, parse
from lgsurf.jets import Jet2
from lgsurf.nullparam import (
    from_parametric, graph_jets, null_coordinates, reparametrize, ruled_recipe, solve_null_jet,
    solve_on_line, swap,
)
from lgsurf.quadric import conformal_metric


def null_defect(chart):
    r, s, t = chart.components()
    tu = [c.diff("u") for c in (r, s, t)]
    tv = [c.diff("v") for c in (r, s, t)]
    return max(float(np.max(np.abs(conformal_metric(tu).coeffs))),
               float(np.max(np.abs(conformal_metric(tv).coeffs))))


@pytest.mark.parametrize("form,f,t0", [("s_of_t", "exp(t)", 0.2), ("s_of_t", "t^3", 1.1),
                                       ("r_of_t", "exp(t)", 0.4), ("r_of_t", "t^3/3", 0.9)])
def test_recipes_are_null_and_on_the_surface(form, f, t0):
    c = ruled_recipe(form, parse(f), t0)
    assert null_defect(c) <= 1e-10
    eq = parse(f"{'s' if form == 's_of_t' else 'r'} - ({f})")
    res = evaluate(eq, dict(zip("rst", c.components())))
    assert float(np.max(np.abs(res.coeffs))) <= 1e-9


def test_from_parametric_validates():
    from_parametric(parse("-exp(-(u+v))"), parse("u - v"), parse("exp(u+v)"))
    with pytest.raises(ChartError):
        from_parametric(parse("u"), parse("v"), parse("u*v"))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_solver_output_is_null_and_on_surface(seed):
    F, c = implicit_chart(np.random.default_rng(seed), order=6)
    assert null_defect(c) <= 1e-8 * max(1.0, max(np.max(np.abs(x.coeffs)) for x in c.components())) ** 2
    res = evaluate(F, dict(zip("rst", c.components())))
    assert float(np.max(np.abs(res.coeffs))) <= 1e-7


def test_solver_refuses_elliptic_points():
    with pytest.raises(NotHyperbolic):
        solve_null_jet(parse("r*t - 1"), (1.0, 0.0, 1.0))


def test_null_coordinates_from_a_graph():
    F = parse("r*t + 1")
    c = null_coordinates(graph_jets(F, (1.0, 0.0, -1.0), 6))
    assert null_defect(c) <= 1e-10
    assert c.gamma() != 0


def test_solve_on_line():
    x = solve_on_line(parse("r^3 - 2"), (1.0, 0.0, 0.0), "r")
    assert x == pytest.approx(2 ** (1 / 3))


def test_reparametrize_and_swap():
    c = ruled_recipe("s_of_t", parse("exp(t)"), 0.3)
    c2 = reparametrize(c, [0.3, 2.0, 0.1], [0.0, -0.5])
    # d/du of the new chart = d/du_old * du_old/du_new
    assert c2.tangent("u") == pytest.approx(c.tangent("u") / 2.0)
    assert c2.tangent("v") == pytest.approx(c.tangent("v") / -0.5)
    s = swap(c)
    assert s.tangent("u") == pytest.approx(c.tangent("v"))
    assert swap(s).r.coeffs.tolist() == c.r.coeffs.tolist()
    with pytest.raises(ChartError):
        reparametrize(c, [0.3, 0.0, 1.0])


def test_chart_properties():
    c = ruled_recipe("s_of_t", parse("exp(t)"), 0.0)
    assert c.base == (0.0, 0.0)
    assert c.base_point == pytest.approx((0.0, 1.0, 0.0))
    assert isinstance(c.r, Jet2) and c.order == 7
