"""The invariant ladder of a hyperbolic surface in the Lagrangian Grassmannian.

Everything is computed from a NullChart by jet arithmetic and evaluated at
the chart base point.  Second order data (I1, I2, I3, Gamma) feed the
second order class; the singly-ruled and generic blocks add the fourth and
fifth order invariants, the conjugate point and the contact spheres.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import jets
from .errors import ClassMismatch, Indeterminate
from .expr import Expr, evaluate, hessian
from .frames import (
    Frame5,
    Lift,
    apply_diagonal,
    decompose,
    decompose_at_base,
    dlog,
    generic_level3_frame,
    jabs,
    level1_frame,
    level2_frame,
    lift_and_normal,
    lin,
    ma_invariants,
    mc_extract,
    ruled_level3_frame,
    sgn,
    vvalue,
)
from .jets import Jet2
from .nullparam import NullChart, null_coordinates, swap, univariate_jet
from .quadric import TOL_ZERO, ProjPoint, Sphere, sphere, surface_type_at

CLASSES2 = ("2-isotropic", "2-parabolic", "2-elliptic", "2-hyperbolic")


def _sign_at(value: float, tol: float) -> int:
    return 0 if abs(value) <= tol else (1 if value > 0 else -1)


# second order ---------------------------------------------------------------

def ma_invariants_implicit(F: Expr, chart: NullChart, on_surface_tol: float = 1e-8):
    """Hessian quadratic forms of F on the two null tangent vectors."""
    point = dict(zip("rst", chart.base_point))
    val = evaluate(F, point)
    if abs(val) > on_surface_tol * max(1.0, *map(abs, chart.base_point)):
        raise ValueError(f"chart base point is off the surface (F = {val:.3e})")
    H = hessian(F, point, ("r", "s", "t"))
    n1, n2 = chart.tangent("u"), chart.tangent("v")
    return float(n1 @ H @ n1), float(n2 @ H @ n2)


def normalized_ma(chart: NullChart):
    """I1, I2 divided by the tangent lengths that carry their weights.

    I1 has weight 3 in the u-tangent and 1 in the v-tangent (I2 mirrored), so
    these quotients are unchanged by constant rescalings of u and v.
    """
    I1, I2, _ = ma_invariants(chart)
    a = np.linalg.norm(chart.tangent("u"))
    b = np.linalg.norm(chart.tangent("v"))
    return I1.value / (a**3 * b), I2.value / (a * b**3)


def classify2(chart: NullChart, tol: float = TOL_ZERO) -> str:
    n1, n2 = normalized_ma(chart)
    z1, z2 = abs(n1) <= tol, abs(n2) <= tol
    if z1 and z2:
        return "2-isotropic"
    if z1 or z2:
        return "2-parabolic"
    return "2-elliptic" if n1 * n2 > 0 else "2-hyperbolic"


def syzygy_residuals(chart: NullChart):
    if chart.order < 4:
        raise ValueError("syzygy residuals need jets of order at least 4")
    L = lift_and_normal(chart)
    G, I1, I2, I3 = L.gamma, L.I1, L.I2, L.I3
    q = I3 / (G * G)
    r1 = dlog(G, "u").diff("v") - (I3 * I3 - I1 * I2) * 2.0 / (G * G * G)
    r2 = q.diff("u") - (I1 / G).diff("v") / G
    r3 = q.diff("v") - (I2 / G).diff("u") / G
    return (r1.value, r2.value, r3.value)


@dataclass(frozen=True)
class Ladder:
    l11: Jet2
    l22: Jet2
    l12: Jet2
    l111: Jet2
    l112: Jet2
    l221: Jet2
    l222: Jet2
    l112_alt: Jet2
    l221_alt: Jet2

    def values(self) -> dict:
        return {k: getattr(self, k).value for k in ("l11", "l22", "l12", "l111", "l112", "l221", "l222")}


def lambda_ladder(L: Lift) -> Ladder:
    G, I1, I2, I3, i = L.gamma, L.I1, L.I2, L.I3, float(L.iota)
    G2, G3 = G * G, G * G * G
    return Ladder(
        l11=I1 * i / G,
        l22=I2 * i / G3,
        l12=I3 * i / G2,
        l111=G2 * (I1 * i / G3).diff("u"),
        l112=(I1 * i / G).diff("v") / G,
        l221=(I2 * i / G).diff("u") / G2,
        l222=(I2 * i / G3).diff("v") / G,
        l112_alt=(I3 * i / G2).diff("u"),
        l221_alt=(I3 * i / G2).diff("v") / G,
    )


# frames by level ---------------------------------------------------------------

def oriented_for_ruled(chart: NullChart, tol: float = TOL_ZERO):
    """Swap u and v when I1 vanishes so that the ruled lift applies."""
    n1, _ = normalized_ma(chart)
    if abs(n1) <= tol:
        return swap(chart), True
    return chart, False


def adapted_frame(chart: NullChart, level: str, tol: float = TOL_ZERO) -> Frame5:
    L = lift_and_normal(chart)
    if level == "1":
        return level1_frame(L)
    if level == "2":
        return level2_frame(L)
    cls = classify2(chart, tol)
    if cls == "2-isotropic":
        raise ClassMismatch("level-3 frames need a surface that is not 2-isotropic")
    if cls == "2-parabolic":
        n1, _ = normalized_ma(chart)
        if abs(n1) <= tol:
            raise ClassMismatch("ruled lift needs I1 != 0; swap the chart first")
        fr = ruled_level3_frame(L)
        if level == "3":
            return fr
        r1, r2 = _ruled_normalizer(L, tol)
        return apply_diagonal(fr, r1, r2)
    fr = generic_level3_frame(L)
    if level == "3":
        return fr
    r1, r2 = _generic_normalizer(L)
    return apply_diagonal(fr, r1, r2)


def adaptation_defects(chart: NullChart, level: str, tol: float = TOL_ZERO) -> dict:
    """Entries of the Maurer-Cartan form that the frame of this level is built to fix.

    Values are deviations from the target at the base point: theta3 = 0 at every
    level; lambda12 = 0 from level 2; beta3 = 0 at levels 1 and 3; lambda11 = 1 and
    lambda22 = epsilon (0 for a singly-ruled surface) once normalized.
    """
    cls = classify2(chart, tol)
    if level.startswith("3"):
        chart, _ = oriented_for_ruled(chart, tol)
    c = mc_extract(adapted_frame(chart, level, tol)).named()
    th1, th2 = c["theta1"], c["theta2"]
    a12 = decompose_at_base(c["alpha12"], th1, th2)
    a21 = decompose_at_base(c["alpha21"], th1, th2)
    out = {"theta3": max(abs(x.value) for x in c["theta3"])}
    if level != "1":
        out["lambda12"] = float(max(abs(a12[1]), abs(a21[0])))
    if level in ("1", "3", "3-normalized"):
        out["beta3"] = max(abs(x.value) for x in c["beta3"])
    if level == "3-normalized":
        target22 = 0.0 if cls == "2-parabolic" else (1.0 if cls == "2-elliptic" else -1.0)
        out["lambda11"] = float(abs(a12[0] - 1.0))
        out["lambda22"] = float(abs(a21[1] - target22))
    return out


def _generic_normalizer(L: Lift):
    lad = lambda_ladder(L)
    s = float(sgn(lad.l11))
    r1 = jets.sqrt(jabs(lad.l11 * lad.l22)) * s
    r2 = jets.power(jabs(lad.l22) / jabs(lad.l11), 0.25) * s
    return r1, r2


def _lambda_big(L: Lift):
    """Lambda11, Lambda12 as jets (ruled orientation, I1 != 0)."""
    G, I1, I3 = L.gamma, L.I1, L.I3
    Lu = dlog(I1 / (G * G * G), "u")
    lam11 = I1 * I3 * 2.0 / (G * G * G) + G * (Lu / G).diff("u") * (1.0 / 3.0) - Lu * Lu * (1.0 / 9.0)
    lam12 = (dlog(G, "u") * 1.5 - dlog(I1, "u")).diff("v") / G
    return lam11, lam12


def _ruled_normalizer(L: Lift, tol: float):
    lam11, lam12 = _lambda_big(L)
    l11 = L.I1 * float(L.iota) / L.gamma
    s = float(sgn(l11))
    d1, d2 = _ruled_deltas(L, tol)
    if d2 != 0:
        r1 = jets.sqrt(jabs(lam12)) * s
        r2 = jets.power(jabs(lam12), 0.25) * jets.power(jabs(l11), -0.5) * s
    elif d1 != 0:
        r2 = jets.sqrt(jabs(lam11)) / l11
        r1 = jabs(lam11) / l11
    else:
        r2 = jets.power(jabs(l11), -0.5) * s
        r1 = l11 * r2 * r2
    return r1, r2


def _ruled_deltas(L: Lift, tol: float):
    """Signs of Lambda11 and Lambda12 with scale-free zero tests.

    Lambda12 is unchanged by null reparametrization; Lambda11 scales like
    1/f_u^2, so it is tested after multiplying by the squared u-tangent length.
    """
    lam11, lam12 = _lambda_big(L)
    a = np.linalg.norm(L.chart.tangent("u"))
    d2 = _sign_at(lam12.value, tol)
    d1 = _sign_at(lam11.value * a * a, tol)
    return d1, d2


# singly-ruled block --------------------------------------------------------------

@dataclass(frozen=True)
class RuledBlock:
    Lambda11: float
    Lambda12: float
    Lambda111: float
    Lambda121: float
    Lambda121_alt: float
    delta1: int
    delta2: int
    zeta: Optional[float]
    zeta1: Optional[float]
    zeta2: Optional[float]
    swapped: bool


def sr_invariants(chart: NullChart, tol: float = TOL_ZERO) -> RuledBlock:
    if classify2(chart, tol) != "2-parabolic":
        raise ClassMismatch("singly-ruled invariants need a 2-parabolic surface")
    chart, swapped = oriented_for_ruled(chart, tol)
    L = lift_and_normal(chart)
    G, I1 = L.gamma, L.I1
    lam11, lam12 = _lambda_big(L)
    lam111 = lam11.diff("u") + lam11 * (dlog(G, "u") * 2.0 - dlog(I1, "u") * (4.0 / 3.0))
    lam121 = lam12.diff("u") + lam12 * (dlog(G, "u") * 2.0 - dlog(I1, "u") * (2.0 / 3.0))
    lam121_alt = lam11.diff("v") * -3.0 / G
    d1, d2 = _ruled_deltas(L, tol)
    l11 = abs(L.I1.value / G.value)
    zeta = zeta1 = zeta2 = None
    if d2 != 0:
        a12 = abs(lam12.value)
        zeta1 = lam11.value / (l11 * math.sqrt(a12))
        zeta2 = d2 * lam121.value / (4.0 * math.sqrt(l11) * a12**1.25)
    elif d1 != 0:
        zeta = 2.0 * d1 * lam111.value / abs(lam11.value) ** 1.5
    return RuledBlock(
        lam11.value, lam12.value, lam111.value, lam121.value, lam121_alt.value,
        d1, d2, zeta, zeta1, zeta2, swapped,
    )


# generic block ---------------------------------------------------------------------

@dataclass(frozen=True)
class GenericJets:
    """kappa1, kappa2, tau and the coframe-route b's as jets."""

    kappa1: Jet2
    kappa2: Jet2
    tau: Jet2
    bbar12: Jet2
    bbar21: Jet2
    r1: Jet2
    r2: Jet2
    gamma: Jet2
    epsilon: int

    def d1(self, f: Jet2) -> Jet2:
        return f.diff("u") * self.r2 / self.r1

    def d2(self, f: Jet2) -> Jet2:
        return f.diff("v") / (self.r1 * self.r2 * self.gamma)


def generic_jets(L: Lift) -> GenericJets:
    G, I1, I2, I3 = L.gamma, L.I1, L.I2, L.I3
    a1, a2, aG = jabs(I1), jabs(I2), jabs(G)
    lg1, lg2, lgG = (dlog(I1, "v"), dlog(I2, "v"), dlog(G, "v"))
    P = jets.power(a1, 0.75) * jets.power(a2, 0.25) * jets.power(aG, -1.5)
    k1 = G * G * G * P * (lg1 * 0.75 + lg2 * 0.25 - lgG * 1.5) / (a1 * a2)
    lu1, lu2, luG = (dlog(I1, "u"), dlog(I2, "u"), dlog(G, "u"))
    Q = jets.power(a1, 0.25) * jets.power(a2, 0.75) * jets.power(aG, -1.5)
    k2 = aG * aG * aG * Q * (lu1 * 0.25 + lu2 * 0.75 - luG * 1.5) / (a1 * a2)
    q = I3 / (G * G)
    tau = (
        float(sgn(I1) * sgn(G)) * G * G / jets.sqrt(a1 * a2)
        * (q * 2.0 - G * G * G / (I1 * I2) * q.diff("u").diff("v"))
    )
    eps = sgn(I1) * sgn(I2)
    r1, r2 = _generic_normalizer(L)
    g = GenericJets(k1, k2, tau, k1, k1, r1, r2, G, eps)
    k11, k22 = g.d1(k1), g.d2(k2)
    b12 = k11 * 0.5 - k22 * 1.5 - k1 * k2 + float(eps)
    b21 = k22 * 0.5 - k11 * 1.5 - k1 * k2 + float(eps)
    return GenericJets(k1, k2, tau, b12, b21, r1, r2, G, eps)


@dataclass(frozen=True)
class GenericBlock:
    kappa1: float
    kappa2: float
    tau: float
    epsilon: int
    bbar12: float
    bbar21: float
    kappa_G: float
    kappa_H2: float
    # second routes, for auditing
    frame_kappa1: float
    frame_kappa2: float
    frame_tau: float
    frame_tau_eps: float
    coframe_bbar12: float
    coframe_bbar21: float
    coframe_factors: tuple


def gen_invariants(chart: NullChart, tol: float = TOL_ZERO) -> GenericBlock:
    if classify2(chart, tol) not in ("2-elliptic", "2-hyperbolic"):
        raise ClassMismatch("generic invariants need a 2-elliptic or 2-hyperbolic surface")
    L = lift_and_normal(chart)
    g = generic_jets(L)
    fr = apply_diagonal(generic_level3_frame(L), g.r1, g.r2)
    c = mc_extract(fr).named()
    th1, th2 = c["theta1"], c["theta2"]
    s1, s2 = decompose(c["alpha11"], th1, th2)
    t1, t2 = decompose(c["alpha22"], th1, th2)
    b1 = decompose(c["beta1"], th1, th2)
    b2 = decompose(c["beta2"], th1, th2)
    k1, k2 = g.kappa1.value, g.kappa2.value
    r1, r2, G = g.r1.value, g.r2.value, g.gamma.value
    return GenericBlock(
        kappa1=k1,
        kappa2=k2,
        tau=g.tau.value,
        epsilon=g.epsilon,
        bbar12=b1[1].value,
        bbar21=b2[0].value,
        kappa_G=k1 * k2,
        kappa_H2=(k1 + k2) ** 2,
        frame_kappa1=(s2.value + t2.value) / 2.0,
        frame_kappa2=(s1.value + t1.value) / 2.0,
        frame_tau=b1[0].value,
        frame_tau_eps=b2[1].value,
        coframe_bbar12=g.bbar12.value,
        coframe_bbar21=g.bbar21.value,
        coframe_factors=(r2 / r1, 1.0 / (r1 * r2 * G)),
    )


def integrability_residual(chart: NullChart, relative: bool = False) -> float:
    """-2(kappa1,1 - kappa2,2) tau + T(kappa1, kappa2, eps) at the base.

    relative=True divides by the sum of the absolute values of the individual
    terms, which is the natural scale of the cancellation.
    """
    L = lift_and_normal(chart)
    g = generic_jets(L)
    k1, k2, tau, b12, b21 = g.kappa1, g.kappa2, g.tau, g.bbar12, g.bbar21
    eps = float(g.epsilon)
    D1, D2 = g.d1, g.d2
    b12_1 = D1(b12)
    b21_2 = D2(b21)
    terms = [
        D1(b12_1), D1(k2) * b12 * 4.0, k2 * b12_1 * 7.0, k2 * k2 * b12 * 12.0,
        D2(b21_2) * -eps, D2(k1) * b21 * (-4.0 * eps), k1 * b21_2 * (-7.0 * eps), k1 * k1 * b21 * (-12.0 * eps),
        D1(k1) * tau * -2.0, D2(k2) * tau * 2.0,
    ]
    vals = [x.value for x in terms]
    res = math.fsum(vals)
    if relative:
        return res / max(math.fsum(abs(v) for v in vals), 1e-300)
    return res


def schwarzian_check(f: Expr, t0: float, order: int = 6):
    """kappa1, kappa2, tau of r = f(t) from the Schwarzian derivative of f."""
    fj = univariate_jet(f, t0, order)
    d1 = fj.diff("u")
    d2 = d1.diff("u")
    if d1.value <= 0:
        raise ValueError("schwarzian_check needs f'(t0) > 0")
    if abs(d2.value) <= TOL_ZERO * max(1.0, abs(d1.value)):
        raise Indeterminate("f'' vanishes: the surface is 2-isotropic here", fallback="2-isotropic")
    d3 = d2.diff("u")
    S = d3 / d1 - (d2 / d1) * (d2 / d1) * 1.5
    kappa = sgn(d2) * 4.0 * d1.value**2 * S.value / d2.value**2
    Sp = (S / d1).diff("u")
    tau = 2.0 - 16.0 * d1.value**4 / d2.value**3 * Sp.value
    return kappa, kappa, tau


# conjugate, contact spheres --------------------------------------------------------

@dataclass(frozen=True)
class Conjugate:
    point: ProjPoint
    dim: int
    label: str


def _rank2(M, tol: float) -> int:
    M = np.asarray(M, dtype=float)
    m = float(np.max(np.abs(M)))
    if m <= tol:
        return 0
    if abs(np.linalg.det(M)) > tol * max(1.0, m * m):
        return 2
    return 1


def _generic_conj_label(dim, eps, tau, b12, b21, tol):
    if dim == 0:
        return "point"
    if dim == 1:
        return "curve"
    z12, z21 = abs(b12) <= tol, abs(b21) <= tol
    if z12 and z21:
        return "indefinite sphere"
    if z12 or z21:
        return "singly-ruled"
    return "2-elliptic" if eps * b12 * b21 > 0 else "2-hyperbolic"


def conjugate(chart: NullChart, tol: float = TOL_ZERO) -> Conjugate:
    cls = classify2(chart, tol)
    if cls == "2-isotropic":
        raise ClassMismatch("the conjugate point needs a level-3 frame")
    if cls == "2-parabolic":
        chart, _ = oriented_for_ruled(chart, tol)
        L = lift_and_normal(chart)
        f4 = vvalue(ruled_level3_frame(L).f[4])
        lam11, lam12 = _lambda_big(L)
        d1, d2 = _ruled_deltas(L, tol)
        dim = 2 if d2 != 0 else (1 if d1 != 0 else 0)
        label = {2: "singly-ruled", 1: "null geodesic", 0: "point"}[dim]
        return Conjugate(ProjPoint.of(f4, "B"), dim, label)
    gb = gen_invariants(chart, tol)
    L = lift_and_normal(chart)
    f4 = vvalue(generic_level3_frame(L).f[4])
    M = [[gb.epsilon * gb.tau, gb.bbar12], [gb.bbar21, gb.tau]]
    dim = _rank2(M, tol)
    label = _generic_conj_label(dim, gb.epsilon, gb.tau, gb.bbar12, gb.bbar21, tol)
    return Conjugate(ProjPoint.of(f4, "B"), dim, label)


DERIVED_CHART_TOL = 1e-6


def conjugate_chart(chart: NullChart, tol: float = TOL_ZERO) -> NullChart:
    """Null chart of the conjugate surface through [f4] (needs dim 2, f4 off infinity).

    The f4 jets lose three orders and carry amplified rounding in their top
    coefficients, so the resulting chart is validated at DERIVED_CHART_TOL.
    """
    cls = classify2(chart, tol)
    if cls == "2-parabolic":
        chart, _ = oriented_for_ruled(chart, tol)
        f4 = ruled_level3_frame(lift_and_normal(chart)).f[4]
    elif cls in ("2-elliptic", "2-hyperbolic"):
        f4 = generic_level3_frame(lift_and_normal(chart)).f[4]
    else:
        raise ClassMismatch("no conjugate surface for a 2-isotropic surface")
    if abs(f4[0].value) <= tol * max(abs(c.value) for c in f4):
        raise ClassMismatch("conjugate point lies on the sphere at infinity")
    return null_coordinates([f4[1] / f4[0], f4[2] / f4[0], f4[3] / f4[0]], tol=DERIVED_CHART_TOL)


def ruled_conjugate_frame(chart: NullChart, tol: float = TOL_ZERO) -> Frame5:
    """(f4, f1 + s1 f4, f2, -f3, f0 + s1 f2) with s1 = -Lambda121 / (3 Lambda12^2).

    Built from the ruled 3-adapted frame; it is 3-adapted along the conjugate
    surface when Lambda12 != 0.
    """
    chart, _ = oriented_for_ruled(chart, tol)
    L = lift_and_normal(chart)
    lam11, lam12 = _lambda_big(L)
    if _ruled_deltas(L, tol)[1] == 0:
        raise ClassMismatch("the conjugate frame needs Lambda12 != 0")
    lam121 = lam12.diff("u") + lam12 * (dlog(L.gamma, "u") * 2.0 - dlog(L.I1, "u") * (2.0 / 3.0))
    s1 = lam121 / (lam12 * lam12) * (-1.0 / 3.0)
    f0, f1, f2, f3, f4 = ruled_level3_frame(L).f
    out = (f4, lin((1.0, f1), (s1, f4)), f2, lin((-1.0, f3)), lin((1.0, f0), (s1, f2)))
    return Frame5(out, "3", L.iota, {"Lambda12": lam12})


def ruled_conjugate_check(chart: NullChart, tol: float = TOL_ZERO) -> dict:
    """Lambda12 of the conjugate surface, read from its conjugate frame.

    beta2' = Lambda12' theta1' with no theta2' part; Lambda12' should equal
    1 / Lambda12, so delta2' = delta2.
    """
    fr = ruled_conjugate_frame(chart, tol)
    c = mc_extract(fr).named()
    a, b = decompose(c["beta2"], c["theta1"], c["theta2"])
    lam12 = fr.info["Lambda12"].value
    return {
        "Lambda12": lam12,
        "Lambda12_conj": a.value,
        "theta2_part": b.value,
        "delta2": _sign_at(lam12, tol),
        "delta2_conj": _sign_at(a.value, tol),
    }


@dataclass(frozen=True)
class ContactSpheres:
    plus: Sphere
    minus: Sphere
    dupin: bool


def contact_spheres_dupin(chart: NullChart, tol: float = TOL_ZERO) -> ContactSpheres:
    if classify2(chart, tol) != "2-elliptic":
        raise ClassMismatch("contact spheres are defined for 2-elliptic surfaces")
    L = lift_and_normal(chart)
    lad = lambda_ladder(L)
    fr = generic_level3_frame(L)
    f0, f3 = vvalue(fr.f[0]), vvalue(fr.f[3])
    root = math.sqrt(lad.l11.value * lad.l22.value)
    gb = gen_invariants(chart, tol)
    dupin = abs(gb.kappa1) <= tol and abs(gb.kappa2) <= tol
    return ContactSpheres(
        sphere(ProjPoint.of(f3 + 2.0 * root * f0, "B")),
        sphere(ProjPoint.of(f3 - 2.0 * root * f0, "B")),
        dupin,
    )


# report -------------------------------------------------------------------------------

@dataclass
class InvariantReport:
    surface_type: str
    base_point: tuple
    iota: int
    gamma: float
    I1: float
    I2: float
    I3: float
    epsilon: Optional[int]
    class2: str
    lambdas: dict
    swapped: bool = False
    ruled: Optional[dict] = None
    generic: Optional[dict] = None
    conjugate: Optional[dict] = None
    contact_spheres: Optional[dict] = None
    dupin: Optional[bool] = None
    csi_candidate: Optional[bool] = None

    def to_dict(self) -> dict:
        return asdict(self)

    def unparametrized(self) -> dict:
        """Invariants of the unparametrized surface (no chart dependence)."""
        out = {"epsilon": self.epsilon, "class2": self.class2}
        if self.ruled:
            r = self.ruled
            out.update(delta1=r["delta1"], delta2=r["delta2"], zeta1=r["zeta1"],
                       zeta_sq=None if r["zeta"] is None else r["zeta"] ** 2,
                       zeta2_sq=None if r["zeta2"] is None else r["zeta2"] ** 2)
        if self.generic:
            g = self.generic
            out.update(kappa_sq=sorted((g["kappa1"] ** 2, g["kappa2"] ** 2)), kappa_G=g["kappa_G"],
                       kappa_H2=g["kappa_H2"])
            out["tau" if g["epsilon"] == 1 else "tau_sq"] = g["tau"] if g["epsilon"] == 1 else g["tau"] ** 2
        if self.conjugate:
            out["dim_conj"] = self.conjugate["dim"]
        return out


def full_report(chart: NullChart, F: Optional[Expr] = None, tol: float = TOL_ZERO) -> InvariantReport:
    stype = "hyperbolic" if F is None else surface_type_at(F, chart.base_point, tol)
    L = lift_and_normal(chart)
    cls = classify2(chart, tol)
    lad = lambda_ladder(L)
    eps = None
    if cls in ("2-elliptic", "2-hyperbolic"):
        eps = 1 if cls == "2-elliptic" else -1
    rep = InvariantReport(
        surface_type=stype,
        base_point=tuple(float(x) for x in chart.base_point),
        iota=L.iota,
        gamma=L.gamma.value,
        I1=L.I1.value,
        I2=L.I2.value,
        I3=L.I3.value,
        epsilon=eps,
        class2=cls,
        lambdas=lad.values() if chart.order >= 4 else {},
    )
    if cls == "2-isotropic":
        return rep
    conj = conjugate(chart, tol)
    rep.conjugate = {"point": [float(x) for x in conj.point.canonical().rep.array()], "dim": conj.dim,
                     "label": conj.label}
    if cls == "2-parabolic":
        rb = sr_invariants(chart, tol)
        rep.swapped = rb.swapped
        rep.ruled = asdict(rb)
        return rep
    gb = gen_invariants(chart, tol)
    rep.generic = asdict(gb)
    rep.generic["coframe_factors"] = list(gb.coframe_factors)
    if cls == "2-elliptic":
        cs = contact_spheres_dupin(chart, tol)
        rep.contact_spheres = {
            "plus": [float(x) for x in cs.plus.center.canonical().rep.array()],
            "minus": [float(x) for x in cs.minus.center.canonical().rep.array()],
        }
        rep.dupin = cs.dupin
    return rep


def spread(reports, keys=None) -> dict:
    """Max minus min of each defined unparametrized invariant across reports."""
    vals: dict = {}
    for rep in reports:
        for k, v in rep.unparametrized().items():
            if v is None or k == "class2":
                continue
            v = np.atleast_1d(np.asarray(v, dtype=float))
            vals.setdefault(k, []).append(v)
    out = {}
    for k, vs in vals.items():
        if keys is not None and k not in keys:
            continue
        if len(vs) != len(reports):
            out[k] = math.inf
            continue
        arr = np.array(vs)
        out[k] = float(np.max(arr.max(axis=0) - arr.min(axis=0)))
    return out


def csi_candidate(reports, tol: float = 1e-4) -> tuple:
    classes = {r.class2 for r in reports}
    sp = spread(reports)
    ok = len(reports) >= 2 and len(classes) == 1 and all(v <= tol for v in sp.values())
    return ok, sp
