"""Null-coordinate charts (r, s, t)(u, v) as jets.

Null coordinates satisfy r_u t_u = s_u^2 and r_v t_v = s_v^2, i.e. both
coordinate directions lie on the cone of mu = dr dt - ds^2.

Besides closed-form recipes, ``solve_null_jet`` handles any implicit
hyperbolic surface F(r, s, t) = 0:

1. solve F = 0 for the coordinate with the largest partial as a graph jet
   (chord Newton, one order per sweep);
2. rotate the graph parameters so both axes are null at the base point and
   factor the induced metric into its two null line fields;
3. integrate each field's first integral order by order (a triangular
   transport solve);
4. invert the resulting map (u, v) as a formal series and compose.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import ChartError, NotHyperbolic
from .expr import Expr, evaluate, free_vars, gradient
from .jets import DEFAULT_ORDER, Jet2
from .quadric import TOL_ZERO, conformal_metric, surface_type_at

NULL_TOL = 1e-9


@dataclass(frozen=True)
class NullChart:
    r: Jet2
    s: Jet2
    t: Jet2
    gauge: str = "given"

    @property
    def order(self) -> int:
        return self.r.order

    @property
    def base(self):
        return self.r.base

    @property
    def base_point(self):
        return (self.r.value, self.s.value, self.t.value)

    def components(self):
        return (self.r, self.s, self.t)

    def tangent(self, which: str) -> np.ndarray:
        i, j = (1, 0) if which == "u" else (0, 1)
        return np.array([c.deriv(i, j) for c in self.components()])

    def gamma(self) -> float:
        nu, nv = self.tangent("u"), self.tangent("v")
        return float(nu[0] * nv[2] + nv[0] * nu[2] - 2 * nu[1] * nv[1])


def _abs_product(a: Jet2, b: Jet2) -> np.ndarray:
    return (Jet2(np.abs(a.coeffs), a.base) * Jet2(np.abs(b.coeffs), b.base)).coeffs


def validate(chart: NullChart, tol: float = NULL_TOL) -> NullChart:
    r, s, t = chart.components()
    if not (r.base == s.base == t.base and r.order == s.order == t.order):
        raise ChartError("chart jets must share base and order")
    nu, nv = chart.tangent("u"), chart.tangent("v")
    # a vanishing tangent is the extreme case of proportional null directions
    if abs(chart.gamma()) <= tol * np.linalg.norm(nu) * np.linalg.norm(nv):
        raise ChartError("Gamma vanishes at the base point")
    if np.linalg.norm(nu) < 1e-14 or np.linalg.norm(nv) < 1e-14:
        raise ChartError("chart is irregular at the base point")
    a, b = np.linalg.norm(nu), np.linalg.norm(nv)
    n = r.order  # derivative jets have order n - 1
    weight = np.outer(a ** np.arange(n), b ** np.arange(n))
    for w in ("u", "v"):
        ru, su, tu = r.diff(w), s.diff(w), t.diff(w)
        q = (ru * tu - su * su).coeffs
        scale = _abs_product(ru, tu) + _abs_product(su, su)
        # Coefficients that vanish identically carry only upstream rounding,
        # whose size follows the chart magnitude in unit-speed parameters.
        floor = 1e-10 * float(np.max(scale / weight)) * weight
        bad = np.abs(q) > tol * scale + floor + 1e-300
        if np.any(bad):
            worst = float(np.max(np.abs(q) / (scale + floor + 1e-300)))
            raise ChartError(f"null relation along {w} violated (relative defect {worst:.3e})")
    return chart


def from_parametric(r: Expr, s: Expr, t: Expr, base=(0.0, 0.0), order: int = DEFAULT_ORDER,
                    check: bool = True) -> NullChart:
    u = Jet2.var("u", base, order)
    v = Jet2.var("v", base, order)
    env = {"u": u, "v": v}
    comps = [evaluate(e, env) for e in (r, s, t)]
    comps = [c if isinstance(c, Jet2) else Jet2.const(c, base, order) for c in comps]
    chart = NullChart(*comps, gauge="given")
    return validate(chart) if check else chart


def _single_var(f: Expr) -> str:
    names = free_vars(f)
    if len(names) > 1:
        raise ValueError(f"expected a function of one variable, got {sorted(names)}")
    return next(iter(names)) if names else "t"


def univariate_jet(f: Expr, x0: float, order: int, base=None) -> Jet2:
    """Taylor jet of f about x0 as a jet in u (no v dependence)."""
    name = _single_var(f)
    base = (x0, 0.0) if base is None else base
    h = Jet2.var("u", base, order) - base[0] + x0
    val = evaluate(f, {name: h})
    return val if isinstance(val, Jet2) else Jet2.const(val, base, order)


def ruled_recipe(form: str, f: Expr, t0: float, order: int = DEFAULT_ORDER, check: bool = True) -> NullChart:
    """Closed-form null charts of s = f(t) and r = f(t)."""
    if form == "s_of_t":
        base = (float(t0), 0.0)
        fj = univariate_jet(f, t0, order + 1)
        fp = fj.diff("u")
        r = (fp * fp).integrate_u(0.0) + Jet2.var("v", base, order)
        s = fj.truncate(order)
        t = Jet2.var("u", base, order)
        chart = NullChart(r, s, t, gauge="s=f(u), t=u")
    elif form == "r_of_t":
        base = (0.0, 0.0)
        fj = univariate_jet(f, t0, order + 1)
        fp = fj.diff("u")
        if not fp.value > 0:
            raise ValueError("r = f(t) recipe needs f'(t0) > 0")
        rate = jets.power(fp, -0.5)
        zero = Jet2.const(0.0, base, order)
        T = Jet2.const(t0, base, order)
        for _ in range(order + 1):
            T = jets.compose(rate, T, zero).integrate_u(t0)
        w = Jet2.var("u", base, order) + Jet2.var("v", base, order)
        t = jets.compose(T, w, zero)
        r = evaluate(f, {_single_var(f): t})
        s = Jet2.var("u", base, order) - Jet2.var("v", base, order)
        chart = NullChart(r, s, t, gauge="s=u-v, t_u=t_v")
    else:
        raise ValueError(f"unknown recipe form {form!r}")
    return validate(chart) if check else chart


# general solver --------------------------------------------------------------

def _null_directions(Q: np.ndarray):
    """Two real null directions of the binary quadratic form Q (2x2)."""
    a, b, c = Q[0, 0], Q[0, 1], Q[1, 1]
    disc = b * b - a * c
    if disc <= 0:
        raise NotHyperbolic("induced metric is not Lorentzian")
    sq = np.sqrt(disc)
    if abs(a) >= abs(c) and a != 0:
        # a x^2 + 2 b x + c = 0 for direction (x, 1)
        q = -(b + np.copysign(sq, b))
        roots = (q / a, c / q)
        dirs = [np.array([x, 1.0]) for x in roots]
    elif c != 0:
        q = -(b + np.copysign(sq, b))
        roots = (q / c, a / q)
        dirs = [np.array([1.0, y]) for y in roots]
    else:
        dirs = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    return [d / np.linalg.norm(d) for d in dirs]


def _u_first(n1: np.ndarray, n2: np.ndarray) -> bool:
    """Deterministic labelling: which null tangent becomes the u-direction."""
    z1 = abs(n1[1]) <= 1e-9 * np.linalg.norm(n1)
    z2 = abs(n2[1]) <= 1e-9 * np.linalg.norm(n2)
    if z1 != z2:
        return z2
    if not z1:
        a, b = n1 / n1[1], n2 / n2[1]
        if abs(a[2] - b[2]) > 1e-12 * (abs(a[2]) + abs(b[2]) + 1):
            return a[2] > b[2]
        return a[0] >= b[0]
    return abs(n1[0]) / np.linalg.norm(n1) >= abs(n2[0]) / np.linalg.norm(n2)


def _transport(m: Jet2, along: str) -> Jet2:
    """First integral of a line field, solved order by order.

    along='v': W_v = -m W_u with W(u, 0) = u.
    along='u': W_u = -m W_v with W(0, v) = v.
    """
    K = m.order + 1
    base = m.base
    c = np.zeros((K + 1, K + 1))
    if along == "v":
        c[1, 0] = 1.0
        for j in range(K):
            P = (m * Jet2(c, base).diff("u")).coeffs
            for i in range(K - j):
                c[i, j + 1] = -P[i, j] / (j + 1)
    else:
        c[0, 1] = 1.0
        for i in range(K):
            P = (m * Jet2(c, base).diff("v")).coeffs
            for j in range(K - i):
                c[i + 1, j] = -P[i, j] / (i + 1)
    return Jet2(c, base)


def _invert_map(U: Jet2, V: Jet2):
    """Formal inverse (sigma, rho)(u, v) of (u, v) = (U, V)(sigma, rho); U0 = V0 = 0."""
    K = U.order
    base = U.base
    J = np.array([[U.deriv(1, 0), U.deriv(0, 1)], [V.deriv(1, 0), V.deriv(0, 1)]])
    Ji = np.linalg.inv(J)
    s_ = Jet2.var("u", base, K)
    r_ = Jet2.var("v", base, K)
    NU = U - (s_ * J[0, 0] + r_ * J[0, 1])
    NV = V - (s_ * J[1, 0] + r_ * J[1, 1])
    u = Jet2.var("u", (0.0, 0.0), K)
    v = Jet2.var("v", (0.0, 0.0), K)
    sig = u * Ji[0, 0] + v * Ji[0, 1]
    rho = u * Ji[1, 0] + v * Ji[1, 1]
    for _ in range(K + 1):
        a = u - jets.compose(NU, sig, rho)
        b = v - jets.compose(NV, sig, rho)
        sig, rho = a * Ji[0, 0] + b * Ji[0, 1], a * Ji[1, 0] + b * Ji[1, 1]
    return sig, rho


def _gauge(chart_jets, K):
    r, s, t = chart_jets
    labels = []
    factors = []
    for w, (i, j), target_s in (("u", (1, 0), 1.0), ("v", (0, 1), -1.0)):
        n = np.array([r.deriv(i, j), s.deriv(i, j), t.deriv(i, j)])
        scale = np.linalg.norm(n)
        if abs(n[1]) > 1e-8 * scale:
            lam, lab = n[1] / target_s, f"s_{w}={target_s:+g}"
        elif abs(n[2]) > 1e-8 * scale:
            lam, lab = n[2], f"t_{w}=+1"
        else:
            lam, lab = n[0], f"r_{w}=+1"
        factors.append(1.0 / lam)
        labels.append(lab)
    out = [jets.scale_variables(c, factors[0], factors[1], (0.0, 0.0)) for c in chart_jets]
    return out, ", ".join(labels)


def null_coordinates(X, gauge: bool = True, tol: float = NULL_TOL) -> NullChart:
    """Re-parametrize any regular hyperbolic parametrized surface by null coordinates.

    X is a triple of jets (r, s, t) over an arbitrary parameter plane.
    The result is based at (u, v) = (0, 0) over the same base point.  Pass a
    looser tol for input jets that are themselves derived quantities.
    """
    X = list(X)
    K = min(x.order for x in X)
    X = [x.truncate(K) for x in X]
    b0 = X[0].base
    Xa = np.array([x.deriv(1, 0) for x in X])
    Xb = np.array([x.deriv(0, 1) for x in X])
    Q = np.array(
        [
            [conformal_metric(Xa), conformal_metric(Xa, Xb)],
            [conformal_metric(Xa, Xb), conformal_metric(Xb)],
        ]
    )
    d1, d2 = _null_directions(Q)
    n1 = d1[0] * Xa + d1[1] * Xb
    n2 = d2[0] * Xa + d2[1] * Xb
    if not _u_first(n1, n2):
        d1, d2 = d2, d1

    o = (0.0, 0.0)
    A = Jet2.var("u", o, K)
    B = Jet2.var("v", o, K)
    alpha = A * d1[0] + B * d2[0] + b0[0]
    beta = A * d1[1] + B * d2[1] + b0[1]
    Y = [jets.compose(x, alpha, beta) for x in X]

    Ys = [y.diff("u") for y in Y]
    Yr = [y.diff("v") for y in Y]
    E = conformal_metric(Ys)
    Fm = conformal_metric(Ys, Yr)
    G = conformal_metric(Yr)
    D = Fm * Fm - E * G
    den = Fm + jets.sqrt(D) * (1.0 if Fm.value > 0 else -1.0)
    m1 = -E / den  # u-lines follow d/ds + m1 d/dr
    m2 = -G / den  # v-lines follow m2 d/ds + d/dr

    Ufun = _transport(m2, "v")  # constant along v-lines
    Vfun = _transport(m1, "u")  # constant along u-lines
    sig, rho = _invert_map(Ufun, Vfun)
    comps = [jets.compose(y, sig, rho) for y in Y]
    label = "solver"
    if gauge:
        comps, label = _gauge(comps, K)
    return validate(NullChart(*comps, gauge=label), tol)


def solve_on_line(F: Expr, point, var: str, tol: float = 1e-13, maxiter: int = 60) -> float:
    """Newton along one coordinate (bisection safeguard once a bracket appears)."""
    env = dict(zip("rst", map(float, point)))
    x = env[var]
    lo = hi = None
    for _ in range(maxiter):
        env[var] = x
        h = Jet2.var("u", (0.0, 0.0), 1) + x
        val = evaluate(F, {**env, var: h})
        f, df = val.value, val.deriv(1, 0)
        if f == 0:
            return x
        if f < 0:
            lo = x
        else:
            hi = x
        step = f / df if df != 0 else np.inf
        nx = x - step
        if lo is not None and hi is not None and not (min(lo, hi) < nx < max(lo, hi)):
            nx = 0.5 * (lo + hi)
        if not np.isfinite(nx):
            raise NotHyperbolic("on-surface search diverged")
        if abs(nx - x) <= tol * max(1.0, abs(x)):
            return nx
        x = nx
    raise NotHyperbolic("on-surface search did not converge")


def graph_jets(F: Expr, point, order: int = DEFAULT_ORDER):
    """Solve F = 0 near point as a graph over two coordinates; returns (r, s, t) jets."""
    env = dict(zip("rst", map(float, point)))
    g = np.array(gradient(F, env, "rst"))
    if np.max(np.abs(g)) <= TOL_ZERO:
        raise NotHyperbolic("all partial derivatives vanish")
    k = int(np.argmax(np.abs(g)))
    names = "rst"
    w = names[k]
    free = [n for n in names if n != w]
    base = (env[free[0]], env[free[1]])
    jv = {free[0]: Jet2.var("u", base, order), free[1]: Jet2.var("v", base, order)}
    W = Jet2.const(env[w], base, order)
    for _ in range(order + 3):
        R = evaluate(F, {**jv, w: W})
        W = W - R / g[k]
    jv[w] = W
    R = evaluate(F, jv)
    if np.max(np.abs(R.coeffs)) > 1e-8 * max(1.0, np.max(np.abs(g))) * max(1.0, np.max(np.abs(W.coeffs))):
        raise ChartError("implicit graph solve did not converge")
    return jv["r"], jv["s"], jv["t"]


def solve_null_jet(F: Expr, point, order: int = DEFAULT_ORDER) -> NullChart:
    kind = surface_type_at(F, point)
    if kind != "hyperbolic":
        raise NotHyperbolic(f"surface is {kind} at {tuple(point)}")
    chart = null_coordinates(graph_jets(F, point, order))
    res = evaluate(F, dict(zip("rst", chart.components())))
    g = np.array(gradient(F, dict(zip("rst", map(float, point))), "rst"))
    scale = np.max(np.abs(g)) * max(1.0, max(np.max(np.abs(c.coeffs)) for c in chart.components()))
    if np.max(np.abs(res.coeffs)) > 1e-8 * scale:
        raise ChartError("null chart leaves the surface")
    return chart


# reparametrization --------------------------------------------------------------

def _inverse_series(coeffs, new_base, which: str, order: int) -> Jet2:
    """Jet of the inverse germ x(y) of y = sum coeffs[n] (x - x0)^n, as x - x0."""
    c = [float(a) for a in coeffs]
    if len(c) < 2 or c[1] == 0:
        raise ChartError("reparametrization has a critical point at the base")
    w = Jet2.var(which, new_base, order) - c[0]
    h = w / c[1]
    for _ in range(order + 1):
        acc = w
        p = h
        for n in range(2, min(len(c), order + 1)):
            p = p * h
            acc = acc - p * c[n]
        h = acc / c[1]
    return h


def reparametrize(chart: NullChart, f=None, g=None, swap: bool = False) -> NullChart:
    """New chart in coordinates (f(u), g(v)), optionally followed by exchanging u and v.

    f and g are Taylor coefficient sequences about the base values u0 and v0.
    """
    K = chart.order
    u0, v0 = chart.base
    f = [u0, 1.0] if f is None else list(f)
    g = [v0, 1.0] if g is None else list(g)
    new_base = (float(f[0]), float(g[0]))
    hu = _inverse_series(f, new_base, "u", K) + u0
    hv = _inverse_series(g, new_base, "v", K) + v0
    comps = [jets.compose(c, hu, hv) for c in chart.components()]
    label = chart.gauge + " | reparam"
    if swap:
        comps = [jets.swap_uv(c) for c in comps]
        label += " | swap"
    return validate(NullChart(*comps, gauge=label))


def swap(chart: NullChart) -> NullChart:
    comps = [jets.swap_uv(c) for c in chart.components()]
    return NullChart(*comps, gauge=chart.gauge + " | swap")
