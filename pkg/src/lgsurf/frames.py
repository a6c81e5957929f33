"""Moving frames along a null chart and their Maurer-Cartan forms.

Frame vectors are 5-vectors of jets written in basis B (so the chart lift is
x = (1, r, s, t, rt - s^2)); the Gram matrix of a hyperbolic frame is the
B_H Gram matrix.  The Maurer-Cartan form omega satisfies d f_j = sum_i
omega[i][j] f_i, so it can be read off with pairings and no matrix
inversion: omega = G_H^{-1} F^T G_B dF.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ClassMismatch
from .jets import Jet2
from .nullparam import NullChart
from .quadric import GRAM, in_o_plus, pairing


# small vector algebra over jets ---------------------------------------------

def lin(*terms):
    """sum of coefficient * vector for (coefficient, vector) pairs."""
    out = None
    for c, v in terms:
        scaled = [c * x for x in v]
        out = scaled if out is None else [a + b for a, b in zip(out, scaled)]
    return out


def dot(x, y):
    return pairing(x, y, "B")


def vdiff(x, which):
    return [c.diff(which) for c in x]


def vvalue(x):
    return np.array([c.value for c in x])


def dlog(q: Jet2, which: str) -> Jet2:
    """(ln|q|) differentiated along u or v."""
    return q.diff(which) / q


def sgn(x) -> int:
    v = x.value if isinstance(x, Jet2) else float(x)
    return 1 if v > 0 else (-1 if v < 0 else 0)


def jabs(x: Jet2) -> Jet2:
    return x if x.value > 0 else -x


# lift and normal --------------------------------------------------------------

@dataclass(frozen=True)
class Lift:
    chart: NullChart
    x: list
    xu: list
    xv: list
    N: list
    Z: list
    gamma: Jet2
    I1: Jet2
    I2: Jet2
    I3: Jet2
    iota: int


def _det3(a, b, c):
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])


def ma_invariants(chart: NullChart):
    """The three determinants (second-derivative row, u-tangent, v-tangent)."""
    r, s, t = chart.components()
    pu = [c.diff("u") for c in (r, s, t)]
    pv = [c.diff("v") for c in (r, s, t)]
    puu = [c.diff("u") for c in pu]
    pvv = [c.diff("v") for c in pv]
    puv = [c.diff("v") for c in pu]
    return _det3(puu, pu, pv), _det3(pvv, pu, pv), _det3(puv, pu, pv)


def normal_vector(chart: NullChart):
    r, s, t = chart.components()
    ru, su, tu = (c.diff("u") for c in (r, s, t))
    rv, sv, tv = (c.diff("v") for c in (r, s, t))
    zero = ru * 0.0
    return [
        zero,
        ru * sv - su * rv,
        (ru * tv - tu * rv) * 0.5,
        su * tv - tu * sv,
        _det3((r, s, t), (ru, su, tu), (rv, sv, tv)),
    ]


def lift_and_normal(chart: NullChart) -> Lift:
    r, s, t = chart.components()
    one = Jet2.const(1.0, chart.base, chart.order)
    x = [one, r, s, t, r * t - s * s]
    xu, xv = vdiff(x, "u"), vdiff(x, "v")
    N = normal_vector(chart)
    Z = [one * 0.0, one * 0.0, one * 0.0, one * 0.0, one]
    gamma = dot(xu, xv)
    I1, I2, I3 = ma_invariants(chart)
    lift = Lift(chart, x, xu, xv, N, Z, gamma, I1, I2, I3, 1)
    f = _level1(lift, 1)
    iota = 1 if in_o_plus(frame_matrix_at_base(f), "B_H") else -1
    return Lift(chart, x, xu, xv, N, Z, gamma, I1, I2, I3, iota)


# frames -------------------------------------------------------------------------

@dataclass(frozen=True)
class Frame5:
    f: tuple
    level: str
    iota: int
    info: dict = field(default_factory=dict)

    def vector_at_base(self, i: int) -> np.ndarray:
        return vvalue(self.f[i])


def frame_matrix_at_base(vectors, basis: str = "B_H") -> np.ndarray:
    F = np.column_stack([vvalue(v) for v in vectors])
    if basis == "B_H":
        F = F[[0, 1, 3, 2, 4], :]
    return F


def _level1(L: Lift, iota: int):
    G = L.gamma
    return (L.x, L.xu, lin((1.0 / G, L.xv)), lin((2.0 * iota / G, L.N)), L.Z)


def _level2_tail(L: Lift):
    G, I3 = L.gamma, L.I3
    f3 = lin((2.0 * L.iota / G, L.N), (2.0 * L.iota * I3 / (G * G), L.x))
    f4 = lin((1.0, L.Z), (-2.0 * I3 / (G * G * G), L.N), (-(I3 * I3) / (G * G * G * G), L.x))
    return f3, f4


def level1_frame(L: Lift) -> Frame5:
    return Frame5(_level1(L, L.iota), "1", L.iota)


def level2_frame(L: Lift) -> Frame5:
    f0, f1, f2, _, _ = _level1(L, L.iota)
    f3, f4 = _level2_tail(L)
    return Frame5((f0, f1, f2, f3, f4), "2", L.iota)


def generic_level3_frame(L: Lift) -> Frame5:
    G, I1, I2, I3 = L.gamma, L.I1, L.I2, L.I3
    a = dlog(I1 / G, "v")  # (ln|I1/Gamma|)_v
    b = dlog(I2 / G, "u")  # (ln|I2/Gamma|)_u
    f0 = L.x
    f1 = lin((1.0, L.xu), (-b, L.x))
    f2 = lin((1.0 / G, L.xv), (-a / G, L.x))
    f3, _ = _level2_tail(L)
    f4 = lin(
        (1.0, L.Z),
        (-2.0 * I3 / (G * G * G), L.N),
        (-a / G, L.xu),
        (-b / G, L.xv),
        (a * b / G - I3 * I3 / (G * G * G * G), L.x),
    )
    return Frame5((f0, f1, f2, f3, f4), "3", L.iota)


def ruled_level3_frame(L: Lift) -> Frame5:
    G, I1, I3 = L.gamma, L.I1, L.I3
    a = dlog(I1 / G, "v")
    c = dlog(I1 / (G * G * G), "u") * (1.0 / 3.0)
    f0 = L.x
    f1 = lin((1.0, L.xu), (c, L.x))
    f2 = lin((1.0 / G, L.xv), (-a / G, L.x))
    f3, _ = _level2_tail(L)
    f4 = lin(
        (1.0, L.Z),
        (-2.0 * I3 / (G * G * G), L.N),
        (-a / G, L.xu),
        (c / G, L.xv),
        (-(c * a / G) - I3 * I3 / (G * G * G * G), L.x),
    )
    return Frame5((f0, f1, f2, f3, f4), "3", L.iota)


def apply_diagonal(fr: Frame5, r1: Jet2, r2: Jet2, level: str = "3-normalized") -> Frame5:
    """Right action of diag(r1, r2, 1/r2, 1, 1/r1) (B_H ordering)."""
    f0, f1, f2, f3, f4 = fr.f
    out = (lin((r1, f0)), lin((r2, f1)), lin((1.0 / r2, f2)), f3, lin((1.0 / r1, f4)))
    info = dict(fr.info)
    info["r1"], info["r2"] = r1, r2
    return Frame5(out, level, fr.iota, info)


def gram_defect(fr: Frame5, scaled: bool = False) -> float:
    """max over i,j and jet coefficients of |<f_i, f_j> - G_H[i, j]|.

    With scaled=True each pair is divided by the product of the largest
    coefficients of f_i and f_j, so high-order Taylor coefficients of a
    badly conditioned frame do not dominate.
    """
    G = GRAM["B_H"]
    size = [max(1.0, max(float(np.max(np.abs(x.coeffs))) for x in v)) for v in fr.f]
    worst = 0.0
    for i in range(5):
        for j in range(i, 5):
            p = dot(fr.f[i], fr.f[j]) - G[i, j]
            d = float(np.max(np.abs(p.coeffs)))
            worst = max(worst, d / (size[i] * size[j]) if scaled else d)
    return worst


# Maurer-Cartan extraction ------------------------------------------------------

# row i of omega pairs with this frame vector, times this factor: G_H^{-1} rows
_ROW_PAIR = ((4, -1.0), (2, 1.0), (1, 1.0), (3, -0.5), (0, -1.0))

NAMES = ("theta1", "theta2", "theta3", "alpha11", "alpha12", "alpha21", "alpha22", "beta1", "beta2", "beta3")


@dataclass(frozen=True)
class MCForm:
    """omega = A du + B dv with A, B 5x5 object arrays of jets."""

    A: np.ndarray
    B: np.ndarray

    def entry(self, i, j):
        return (self.A[i, j], self.B[i, j])

    def named(self) -> dict:
        A, B = self.A, self.B
        out = {}
        for w, M in (("u", A), ("v", B)):
            comp = {
                "theta1": M[1, 0],
                "theta2": M[2, 0],
                "theta3": M[3, 0],
                "alpha11": (M[0, 0] - M[1, 1]) * 0.5,
                "alpha22": (M[0, 0] + M[1, 1]) * 0.5,
                "alpha12": -M[3, 1],
                "alpha21": -M[3, 2],
                "beta1": M[0, 1],
                "beta2": M[0, 2],
                "beta3": M[0, 3] * 0.5,
            }
            for k, v in comp.items():
                out.setdefault(k, [None, None])[0 if w == "u" else 1] = v
        return {k: tuple(v) for k, v in out.items()}


def layout(c: dict, w: int) -> np.ndarray:
    """Rebuild the 5x5 matrix from named components (w=0: du part, 1: dv part)."""
    g = {k: v[w] for k, v in c.items()}
    z = g["theta1"] * 0.0
    a11, a22, a12, a21 = g["alpha11"], g["alpha22"], g["alpha12"], g["alpha21"]
    b1, b2, b3 = g["beta1"], g["beta2"], g["beta3"]
    t1, t2, t3 = g["theta1"], g["theta2"], g["theta3"]
    rows = [
        [a11 + a22, b1, b2, b3 * 2.0, z],
        [t1, a22 - a11, z, a21 * -2.0, b2],
        [t2, z, a11 - a22, a12 * -2.0, b1],
        [t3, -a12, -a21, z, -b3],
        [z, t2, t1, t3 * -2.0, -(a11 + a22)],
    ]
    M = np.empty((5, 5), dtype=object)
    for i in range(5):
        for j in range(5):
            M[i, j] = rows[i][j]
    return M


def mc_extract(fr: Frame5) -> MCForm:
    out = []
    for w in ("u", "v"):
        df = [vdiff(v, w) for v in fr.f]
        M = np.empty((5, 5), dtype=object)
        for i, (k, fac) in enumerate(_ROW_PAIR):
            for j in range(5):
                M[i, j] = dot(fr.f[k], df[j]) * fac
        out.append(M)
    return MCForm(out[0], out[1])


def layout_defect(mc: MCForm) -> float:
    c = mc.named()
    worst = 0.0
    for w, M in ((0, mc.A), (1, mc.B)):
        L = layout(c, w)
        for i in range(5):
            for j in range(5):
                worst = max(worst, abs((M[i, j] - L[i, j]).value))
    return worst


def structure_residual(mc: MCForm) -> float:
    """max |d omega + omega ^ omega| at the base: dB/du - dA/dv + [A, B]."""
    A, B = mc.A, mc.B
    worst = 0.0
    for i in range(5):
        for j in range(5):
            acc = B[i, j].diff("u") - A[i, j].diff("v")
            v = acc.value
            for k in range(5):
                v += A[i, k].value * B[k, j].value - B[i, k].value * A[k, j].value
            worst = max(worst, abs(v))
    return worst


def decompose(form, th1, th2):
    """Coefficients (c1, c2) with form = c1 th1 + c2 th2 (all pairs of jets)."""
    fu, fv = form
    au, av = th1
    bu, bv = th2
    det = au * bv - av * bu
    return (fu * bv - fv * bu) / det, (au * fv - av * fu) / det


def decompose_at_base(form, th1, th2):
    fu, fv = (x.value for x in form)
    M = np.array([[th1[0].value, th2[0].value], [th1[1].value, th2[1].value]])
    return np.linalg.solve(M, np.array([fu, fv]))


def require(cond: bool, message: str):
    if not cond:
        raise ClassMismatch(message)
