import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lgsurf import jets
from lgsurf.jets import Jet2, JetError

small = st.floats(-0.8, 0.8, allow_nan=False)
coef = st.floats(-2.0, 2.0, allow_nan=False)


def poly(a, b, c, base=(0.3, -0.2), order=6):
    u = Jet2.var("u", base, order) - base[0]
    v = Jet2.var("v", base, order) - base[1]
    return u * a + v * b + u * v * c + 1.5


def taylor_eval(j: Jet2, du, dv):
    c = j.coeffs
    return sum(c[i, k] * du**i * dv**k for i in range(j.order + 1) for k in range(j.order + 1 - i))


@settings(max_examples=30, deadline=None)
@given(coef, coef, coef, coef, coef, coef)
def test_ring_axioms(a, b, c, d, e, f):
    x, y, z = poly(a, b, c), poly(d, e, f), poly(c, a, e)
    assert jets.allclose(x * (y + z), x * y + x * z, atol=1e-12)
    assert jets.allclose((x * y) * z, x * (y * z), atol=1e-12)
    assert jets.allclose(x * y, y * x)


@settings(max_examples=30, deadline=None)
@given(coef, coef, coef)
def test_division_inverts_product(a, b, c):
    x = poly(a, b, c)
    y = poly(b, c, a) + 3.0
    assert jets.allclose((x * y) / y, x, rtol=1e-10, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(small, small)
def test_exp_log_and_sqrt_match_scalar_taylor(du, dv):
    du, dv = du * 0.1, dv * 0.1
    base = (0.3, -0.2)
    u = Jet2.var("u", base, 9)
    v = Jet2.var("v", base, 9)
    w = u * 0.7 + v * 0.4 + 2.0
    x = base[0] + du
    y = base[1] + dv
    want = 0.7 * x + 0.4 * y + 2.0
    assert taylor_eval(jets.exp(w), du, dv) == pytest.approx(math.exp(want), rel=1e-9)
    assert taylor_eval(jets.log(w), du, dv) == pytest.approx(math.log(want), rel=1e-9)
    assert taylor_eval(jets.sqrt(w), du, dv) == pytest.approx(math.sqrt(want), rel=1e-9)
    assert taylor_eval(jets.power(w, -1.5), du, dv) == pytest.approx(want**-1.5, rel=1e-9)
    assert taylor_eval(jets.sin(w), du, dv) == pytest.approx(math.sin(want), rel=1e-9, abs=1e-12)


def test_deriv_is_factorial_scaled():
    u = Jet2.var("u", (0.0, 0.0), 6)
    v = Jet2.var("v", (0.0, 0.0), 6)
    j = u * u * u * v * v
    assert j.deriv(3, 2) == pytest.approx(12.0)
    assert j.diff("u").diff("v").deriv(2, 1) == pytest.approx(12.0)
    with pytest.raises(JetError):
        j.deriv(4, 3)


def test_diff_lowers_order_and_truncate():
    j = Jet2.var("u", (1.0, 2.0), 5)
    assert j.diff("u").order == 4
    assert j.truncate(3).order == 3
    with pytest.raises(JetError):
        j.truncate(7)


def test_compose_with_identity_and_swap():
    base = (0.2, 0.1)
    x = jets.exp(Jet2.var("u", base, 6) * 0.5 - Jet2.var("v", base, 6))
    u = Jet2.var("u", base, 6)
    v = Jet2.var("v", base, 6)
    assert jets.allclose(jets.compose(x, u, v), x, atol=1e-13)
    assert jets.allclose(jets.swap_uv(jets.swap_uv(x)), x)
    assert jets.swap_uv(x).deriv(0, 1) == pytest.approx(x.deriv(1, 0))


def test_chain_rule_through_compose():
    o = (0.0, 0.0)
    a = jets.sin(Jet2.var("u", o, 6) + Jet2.var("v", o, 6) * 2.0)
    A = Jet2.var("u", o, 6) * 3.0
    B = Jet2.var("v", o, 6) * 0.5
    c = jets.compose(a, A, B)
    assert c.deriv(1, 0) == pytest.approx(3.0 * math.cos(0.0))
    assert c.deriv(0, 1) == pytest.approx(1.0)


def test_domain_errors():
    z = Jet2.const(0.0, order=3)
    with pytest.raises(ArithmeticError):
        jets.log(z)
    with pytest.raises(ArithmeticError):
        jets.sqrt(z - 1.0)
    with pytest.raises(ArithmeticError):
        jets.reciprocal(z)


def test_integer_power_matches_repeated_product():
    x = poly(0.3, -0.7, 0.2)
    assert jets.allclose(jets.ipow(x, 4), x * x * x * x, rtol=1e-12)
    assert jets.allclose(jets.ipow(x, -2) * x * x, Jet2.const(1.0, x.base, x.order), atol=1e-12)
    assert np.isclose(jets.absolute(x - 3.0).value, 1.5)
