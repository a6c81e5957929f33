"""The (2,3) quadric: scalar product, charts, spheres, sp(4) -> so(2,3).

Two bases of the 5-dimensional representation are used.  Basis "B" is

    e1^e2, e3^e2, e1^e3 - e2^e4, e1^e4, e3^e4

in which a chart point is x = (1, r, s, t, rt - s^2).  Basis "B_H" (the
hyperbolic frame basis) is B with its third and fourth vectors exchanged.
Surface frames are built in B coordinates; group-membership tests work in
whatever basis the caller names.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expr import Expr, evaluate, gradient

TOL_ZERO = 1e-9

GRAM = {
    "B": np.array(
        [
            [0, 0, 0, 0, -1],
            [0, 0, 0, 1, 0],
            [0, 0, -2, 0, 0],
            [0, 1, 0, 0, 0],
            [-1, 0, 0, 0, 0],
        ],
        dtype=float,
    ),
    "B_H": np.array(
        [
            [0, 0, 0, 0, -1],
            [0, 0, 1, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, 0, -2, 0],
            [-1, 0, 0, 0, 0],
        ],
        dtype=float,
    ),
}
for _g in GRAM.values():
    _g.setflags(write=False)

_SWAP = np.array([0, 1, 3, 2, 4])
Z_INF = np.array([0.0, 0.0, 0.0, 0.0, 1.0])


class QuadricError(ValueError):
    pass


def convert(components, src: str, dst: str) -> np.ndarray:
    """Change basis of a 5-vector (or of each column of a 5xn array)."""
    a = np.asarray(components, dtype=float)
    if src == dst:
        return a.copy()
    if {src, dst} != {"B", "B_H"}:
        raise QuadricError(f"unknown basis {src!r}/{dst!r}")
    return a[_SWAP]


def pairing(x, y, basis: str = "B"):
    """Bilinear form on any coefficient type supporting + and * (floats, jets)."""
    if basis == "B":
        return -(x[0] * y[4] + x[4] * y[0]) + x[1] * y[3] + x[3] * y[1] - 2 * (x[2] * y[2])
    if basis == "B_H":
        return -(x[0] * y[4] + x[4] * y[0]) + x[1] * y[2] + x[2] * y[1] - 2 * (x[3] * y[3])
    raise QuadricError(f"unknown basis {basis!r}")


@dataclass(frozen=True)
class Vec5:
    components: tuple
    basis: str = "B"

    def __post_init__(self):
        if len(self.components) != 5:
            raise QuadricError("Vec5 needs five components")
        if self.basis not in GRAM:
            raise QuadricError(f"unknown basis {self.basis!r}")
        object.__setattr__(self, "components", tuple(float(c) for c in self.components))

    def array(self) -> np.ndarray:
        return np.array(self.components)

    def to(self, basis: str) -> "Vec5":
        return Vec5(tuple(convert(self.components, self.basis, basis)), basis)


def scalar_product(x: Vec5, y: Vec5) -> float:
    return float(pairing(x.components, y.to(x.basis).components, x.basis))


@dataclass(frozen=True)
class ProjPoint:
    rep: Vec5

    @classmethod
    def of(cls, components, basis: str = "B") -> "ProjPoint":
        a = np.asarray(components, dtype=float)
        if not np.any(a):
            raise QuadricError("zero vector is not a projective point")
        return cls(Vec5(tuple(a), basis))

    def canonical(self) -> "ProjPoint":
        a = self.rep.array()
        k = int(np.argmax(np.abs(a)))
        return ProjPoint(Vec5(tuple(a / a[k]), self.rep.basis))

    def same_as(self, other: "ProjPoint", tol: float = 1e-9) -> bool:
        a = self.canonical().rep.array()
        b = ProjPoint(other.rep.to(self.rep.basis)).canonical().rep.array()
        return bool(np.max(np.abs(a - b)) <= tol)


def chart_point(r: float, s: float, t: float) -> ProjPoint:
    return ProjPoint.of([1.0, r, s, t, r * t - s * s])


def chart_maps(p: ProjPoint):
    a = p.rep.to("B").array()
    if abs(a[0]) <= TOL_ZERO * np.max(np.abs(a)):
        raise QuadricError("point lies on the sphere at infinity (z0 = 0)")
    return a[1] / a[0], a[2] / a[0], a[3] / a[0]


def chart_change(r: float, s: float, t: float):
    d = r * t - s * s
    if d == 0:
        raise QuadricError("chart change undefined where rt - s^2 = 0")
    return -t / d, s / d, -r / d


def to_second_chart(components) -> np.ndarray:
    """B coordinates -> coordinates in the basis built from (e3, e4, -e1, -e2)."""
    z = np.asarray(components, dtype=float)
    return np.array([z[4], -z[3], z[2], -z[1], z[0]])


def plucker_embed(L, tol: float = 1e-9) -> ProjPoint:
    """Point of the quadric spanned by the rows of a 2x4 matrix (e1..e4 coordinates)."""
    L = np.asarray(L, dtype=float)
    if L.shape != (2, 4):
        raise QuadricError("expected a 2x4 matrix")
    a, b = L
    p = np.outer(a, b) - np.outer(b, a)
    scale = max(np.linalg.norm(a) * np.linalg.norm(b), 1e-300)
    if np.max(np.abs(p)) <= tol * scale:
        raise QuadricError("rows do not span a 2-plane")
    # eta = 2(e1*^e3* + e2*^e4*) in 0-based indices (0,2) and (1,3)
    if abs(p[0, 2] + p[1, 3]) > tol * scale:
        raise QuadricError("plane is not isotropic for the symplectic form")
    z = np.array([p[0, 1], p[2, 1], 0.5 * (p[0, 2] - p[1, 3]), p[0, 3], p[2, 3]])
    return ProjPoint.of(z)


# spheres ----------------------------------------------------------------------

@dataclass(frozen=True)
class Sphere:
    center: ProjPoint
    kind: str

    def chart_equation(self, r, s, t):
        z = self.center.rep.to("B").array()
        return -z[4] + r * z[3] - 2 * s * z[2] + t * z[1] - z[0] * (r * t - s * s)


def _unit(a):
    a = np.asarray(a, dtype=float)
    return a / np.max(np.abs(a))


def sphere(z: ProjPoint, tol: float = TOL_ZERO) -> Sphere:
    a = _unit(z.rep.to("B").array())
    q = pairing(a, a, "B")
    kind = "degenerate" if abs(q) <= tol else ("definite" if q > 0 else "indefinite")
    return Sphere(z, kind)


def membership(w: ProjPoint, S: Sphere, tol: float = TOL_ZERO) -> bool:
    a = w.rep.to("B").array()
    z = S.center.rep.to("B").array()
    _require_on_quadric(a, tol)
    return bool(abs(pairing(a, z, "B")) <= tol * np.linalg.norm(a) * np.linalg.norm(z))


def invert(w: ProjPoint, S: Sphere, tol: float = TOL_ZERO) -> ProjPoint:
    if S.kind == "degenerate":
        raise QuadricError("inversion in a degenerate sphere is undefined")
    a = w.rep.to("B").array()
    _require_on_quadric(a, tol)
    z = S.center.rep.to("B").array()
    out = a - 2 * pairing(a, z, "B") / pairing(z, z, "B") * z
    return ProjPoint.of(out)


def _require_on_quadric(a, tol):
    u = _unit(a)
    if abs(pairing(u, u, "B")) > tol * 10:
        raise QuadricError("point is not on the quadric")


# surfaces and the conformal structure ---------------------------------------

def conformal_metric(v, w=None):
    """mu = dr dt - ds^2 (polarized when w is given)."""
    if w is None:
        w = v
    return 0.5 * (v[0] * w[2] + v[2] * w[0]) - v[1] * w[1]


def surface_type_at(F: Expr, point, tol: float = TOL_ZERO, on_surface_tol: float = 1e-8) -> str:
    env = dict(zip("rst", map(float, point)))
    g = np.array(gradient(F, env, "rst"))
    gmax = np.max(np.abs(g))
    if gmax == 0:
        raise QuadricError("vanishing gradient")
    if abs(evaluate(F, env)) > on_surface_tol * max(1.0, gmax):
        raise QuadricError("point is not on the surface")
    g = g / gmax
    d = g[0] * g[2] - 0.25 * g[1] ** 2
    if d > tol:
        return "elliptic"
    if d < -tol:
        return "hyperbolic"
    return "parabolic"


# Lie algebra ------------------------------------------------------------------

def sp4(a11, a12, a21, a22, b1, b2, b3, c1, c2, c3) -> np.ndarray:
    return np.array(
        [
            [a11, a12, b1, b3],
            [a21, a22, b3, b2],
            [c1, c3, -a11, -a21],
            [c3, c2, -a12, -a22],
        ],
        dtype=float,
    )


def sp4_params(X, tol: float = 1e-12) -> dict:
    X = np.asarray(X, dtype=float)
    A, Bm, C, D = X[:2, :2], X[:2, 2:], X[2:, :2], X[2:, 2:]
    scale = max(1.0, np.max(np.abs(X)))
    if (
        np.max(np.abs(Bm - Bm.T)) > tol * scale
        or np.max(np.abs(C - C.T)) > tol * scale
        or np.max(np.abs(D + A.T)) > tol * scale
    ):
        raise QuadricError("matrix is not in sp(4,R) block form")
    return dict(
        a11=A[0, 0], a12=A[0, 1], a21=A[1, 0], a22=A[1, 1],
        b1=Bm[0, 0], b2=Bm[1, 1], b3=Bm[0, 1],
        c1=C[0, 0], c2=C[1, 1], c3=C[0, 1],
    )


def sp_to_so(X, basis: str = "B") -> np.ndarray:
    p = sp4_params(X)
    a11, a12, a21, a22 = p["a11"], p["a12"], p["a21"], p["a22"]
    b1, b2, b3, c1, c2, c3 = p["b1"], p["b2"], p["b3"], p["c1"], p["c2"], p["c3"]
    tr = a11 + a22
    M = np.array(
        [
            [tr, b1, 2 * b3, b2, 0],
            [c1, a22 - a11, -2 * a21, 0, b2],
            [c3, -a12, 0, -a21, -b3],
            [c2, 0, -2 * a12, a11 - a22, b1],
            [0, c2, -2 * c3, c1, -tr],
        ],
        dtype=float,
    )
    if basis == "B":
        return M
    if basis == "B_H":
        return M[np.ix_(_SWAP, _SWAP)]
    raise QuadricError(f"unknown basis {basis!r}")


def so_residual(M, basis: str = "B") -> float:
    G = GRAM[basis]
    return float(np.max(np.abs(M.T @ G + G @ M)))


GENERATORS = {
    "a11": lambda r, s, t: (-2 * r, -s, 0.0),
    "a12": lambda r, s, t: (0.0, -r, -2 * s),
    "a21": lambda r, s, t: (-2 * s, -t, 0.0),
    "a22": lambda r, s, t: (0.0, -s, -2 * t),
    "b1": lambda r, s, t: (-r * r, -r * s, -s * s),
    "b2": lambda r, s, t: (-s * s, -s * t, -t * t),
    "b3": lambda r, s, t: (-2 * r * s, -(s * s + r * t), -2 * s * t),
    "c1": lambda r, s, t: (1.0, 0.0, 0.0),
    "c2": lambda r, s, t: (0.0, 0.0, 1.0),
    "c3": lambda r, s, t: (0.0, 1.0, 0.0),
}


def generator_field(name: str, point):
    try:
        fn = GENERATORS[name]
    except KeyError:
        raise QuadricError(f"unknown generator {name!r}") from None
    return tuple(float(c) for c in fn(*map(float, point)))


# O(2,3) components --------------------------------------------------------------

def _negative_triple(basis):
    w, V = np.linalg.eigh(GRAM[basis])
    neg = V[:, w < 0]
    # order by the index of each eigenvector's leading component, sign fixed so it is positive
    lead = [int(np.argmax(np.abs(neg[:, i]) > 1e-12)) for i in range(neg.shape[1])]
    order = np.argsort(lead, kind="stable")
    neg = neg[:, order]
    for i in range(neg.shape[1]):
        j = int(np.argmax(np.abs(neg[:, i]) > 1e-12))
        if neg[j, i] < 0:
            neg[:, i] = -neg[:, i]
    return neg


def oplus_component(g, basis: str = "B_H", tol: float = 1e-8):
    """(orientation sign on the negative part, determinant sign) of g in O(2,3)."""
    g = np.asarray(g, dtype=float)
    G = GRAM[basis]
    scale = max(1.0, np.max(np.abs(g)) ** 2)
    if np.max(np.abs(g.T @ G @ g - G)) > tol * scale:
        raise QuadricError("matrix does not preserve the scalar product")
    W = _negative_triple(basis)
    P = W.T @ G @ g @ W
    Q = W.T @ G @ W
    orient = int(np.sign(np.linalg.det(np.linalg.solve(Q, P))))
    det = int(np.sign(np.linalg.det(g)))
    return orient, det


def in_o_plus(g, basis: str = "B_H") -> bool:
    return oplus_component(g, basis)[0] > 0
