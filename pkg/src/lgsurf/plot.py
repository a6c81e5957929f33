"""Static pictures of surfaces in the (r, s, t) chart: a Wavefront OBJ mesh and an SVG.

The SVG is a fixed oblique projection drawn with the painter's algorithm.  Overlays:
null-cone glyphs (the two null tangent directions) at sample points, coordinate
lines of a parametric chart, the conjugate point when it is finite, and contact
spheres of 2-elliptic surfaces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import LgsurfError, NotHyperbolic
from .expr import EvalError, Expr, evaluate, gradient, parse
from .jets import Jet2
from .nullparam import _null_directions, solve_on_line
from .quadric import conformal_metric


class RegionError(LgsurfError):
    """The requested region leaves the affine chart or the surface."""


@dataclass
class Mesh:
    name: str
    vertices: np.ndarray  # (n, 3), NaN rows are missing nodes
    shape: tuple  # grid (rows, cols)
    color: str = "#9ecae1"

    def triangles(self):
        rows, cols = self.shape
        ok = ~np.isnan(self.vertices).any(axis=1)
        for i in range(rows - 1):
            for j in range(cols - 1):
                a, b, c, d = i * cols + j, i * cols + j + 1, (i + 1) * cols + j, (i + 1) * cols + j + 1
                if ok[a] and ok[b] and ok[d]:
                    yield (a, b, d)
                if ok[a] and ok[d] and ok[c]:
                    yield (a, d, c)


@dataclass
class Scene:
    meshes: list = field(default_factory=list)
    segments: list = field(default_factory=list)  # (p, q, color)
    polylines: list = field(default_factory=list)  # (points, color)
    markers: list = field(default_factory=list)  # (p, label)


def mesh_implicit(F: Expr, point, half_width: float, n: int = 25, name: str = "surface",
                  color: str = "#9ecae1") -> Mesh:
    """Grid over the two coordinates with the smallest partials; Newton in the third."""
    p0 = np.asarray(point, float)
    g = np.abs(gradient(F, dict(zip("rst", p0)), "rst"))
    k = int(np.argmax(g))
    free = [i for i in range(3) if i != k]
    grid = np.linspace(-half_width, half_width, n)
    verts = np.full((n * n, 3), np.nan)
    for a, da in enumerate(grid):
        guess = p0[k]
        for b, db in enumerate(grid):
            start = p0.copy()
            start[free[0]] += da
            start[free[1]] += db
            start[k] = guess
            try:
                val = solve_on_line(F, start, "rst"[k])
            except (LgsurfError, EvalError, ArithmeticError, ValueError):
                continue
            if not np.isfinite(val) or abs(val - p0[k]) > 50 * max(1.0, half_width):
                continue
            start[k] = val
            verts[a * n + b] = start
            guess = val
    _require_coverage(verts, name)
    return Mesh(name, verts, (n, n), color)


def mesh_parametric(r: Expr, s: Expr, t: Expr, u_range, v_range, n: int = 25,
                    name: str = "surface", color: str = "#9ecae1") -> Mesh:
    us = np.linspace(*u_range, n)
    vs = np.linspace(*v_range, n)
    verts = np.full((n * n, 3), np.nan)
    for a, u in enumerate(us):
        for b, v in enumerate(vs):
            try:
                p = [float(evaluate(e, {"u": u, "v": v})) for e in (r, s, t)]
            except (EvalError, ArithmeticError, ValueError):
                continue
            if all(np.isfinite(p)):
                verts[a * n + b] = p
    _require_coverage(verts, name)
    return Mesh(name, verts, (n, n), color)


def _require_coverage(verts, name):
    ok = ~np.isnan(verts).any(axis=1)
    if ok.mean() < 0.25:
        raise RegionError(f"{name}: most of the region is off the chart (covered {ok.mean():.0%})")


def null_glyphs(tangent_basis, point, length: float):
    """Segments along the two null directions of the tangent plane spanned by the basis."""
    e1, e2 = (np.asarray(e, float) for e in tangent_basis)
    Q = np.array([[conformal_metric(e1), conformal_metric(e1, e2)],
                  [conformal_metric(e1, e2), conformal_metric(e2)]])
    out = []
    for d, color in zip(_null_directions(Q), ("#d62728", "#1f77b4")):
        w = d[0] * e1 + d[1] * e2
        w = w / np.linalg.norm(w) * length
        out.append((point - w, point + w, color))
    return out


def implicit_tangents(F: Expr, point):
    g = np.asarray(gradient(F, dict(zip("rst", point)), "rst"), float)
    k = int(np.argmax(np.abs(g)))
    basis = []
    for i in range(3):
        if i == k:
            continue
        e = np.zeros(3)
        e[i] = 1.0
        e[k] = -g[i] / g[k]
        basis.append(e)
    return basis


def parametric_tangents(r: Expr, s: Expr, t: Expr, u: float, v: float):
    env = {"u": Jet2.var("u", (u, v), 1), "v": Jet2.var("v", (u, v), 1)}
    cols = []
    for e in (r, s, t):
        j = evaluate(e, env)
        cols.append((j.deriv(1, 0), j.deriv(0, 1)) if isinstance(j, Jet2) else (0.0, 0.0))
    return np.array([c[0] for c in cols]), np.array([c[1] for c in cols])


def sphere_expression(center_b) -> Expr:
    """Chart equation of the sphere with center z (basis B): <x(r,s,t), z> = 0."""
    z = [float(c) for c in center_b]
    text = f"-({z[4]!r}) + r*({z[3]!r}) - 2*s*({z[2]!r}) + t*({z[1]!r}) - ({z[0]!r})*(r*t - s^2)"
    return parse(text, "rst")


def sample_nodes(mesh: Mesh, count: int):
    rows, cols = mesh.shape
    step = max(1, int(round(math.sqrt(rows * cols / max(count, 1)))))
    for i in range(step // 2, rows, step):
        for j in range(step // 2, cols, step):
            p = mesh.vertices[i * cols + j]
            if not np.isnan(p).any():
                yield p


# output -----------------------------------------------------------------------------

def write_obj(scene: Scene, path) -> None:
    lines = ["# surfaces in the (r, s, t) chart"]
    offset = 1
    for m in scene.meshes:
        lines.append(f"o {m.name}")
        index = {}
        for i, p in enumerate(m.vertices):
            if np.isnan(p).any():
                continue
            index[i] = offset
            offset += 1
            lines.append(f"v {p[0]:.9g} {p[1]:.9g} {p[2]:.9g}")
        for a, b, c in m.triangles():
            lines.append(f"f {index[a]} {index[b]} {index[c]}")
    if scene.segments or scene.polylines:
        lines.append("o overlays")
        for p, q, _ in scene.segments:
            lines.append(f"v {p[0]:.9g} {p[1]:.9g} {p[2]:.9g}")
            lines.append(f"v {q[0]:.9g} {q[1]:.9g} {q[2]:.9g}")
            lines.append(f"l {offset} {offset + 1}")
            offset += 2
        for pts, _ in scene.polylines:
            ids = []
            for p in pts:
                lines.append(f"v {p[0]:.9g} {p[1]:.9g} {p[2]:.9g}")
                ids.append(str(offset))
                offset += 1
            if len(ids) > 1:
                lines.append("l " + " ".join(ids))
    for p, label in scene.markers:
        lines.append(f"# marker {label}: {p[0]:.9g} {p[1]:.9g} {p[2]:.9g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _projector(azimuth=35.0, elevation=25.0):
    a, e = math.radians(azimuth), math.radians(elevation)
    right = np.array([math.cos(a), math.sin(a), 0.0])
    up = np.array([-math.sin(a) * math.sin(e), math.cos(a) * math.sin(e), math.cos(e)])
    depth = np.cross(right, up)

    def proj(p):
        p = np.asarray(p, float)
        return float(p @ right), float(p @ up), float(p @ depth)

    return proj


def write_svg(scene: Scene, path, size: int = 640, title: Optional[str] = None) -> None:
    proj = _projector()
    pts = [m.vertices[~np.isnan(m.vertices).any(axis=1)] for m in scene.meshes]
    pts += [np.array([p, q]) for p, q, _ in scene.segments]
    pts += [np.asarray(pl) for pl, _ in scene.polylines if len(pl)]
    pts += [np.array([p]) for p, _ in scene.markers]
    allp = np.vstack([p for p in pts if len(p)]) if pts else np.zeros((1, 3))
    xy = np.array([proj(p)[:2] for p in allp])
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = max(hi - lo) or 1.0
    pad = 30

    def to_px(p):
        x, y, _ = proj(p)
        return (pad + (x - lo[0]) / span * (size - 2 * pad), size - pad - (y - lo[1]) / span * (size - 2 * pad))

    items = []
    for m in scene.meshes:
        for tri in m.triangles():
            P = [m.vertices[i] for i in tri]
            d = sum(proj(p)[2] for p in P) / 3
            poly = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(to_px, P))
            items.append((d, f'<polygon points="{poly}" fill="{m.color}" fill-opacity="0.8" '
                             f'stroke="#555" stroke-width="0.2"/>'))
    body = [s for _, s in sorted(items, key=lambda i: -i[0])]
    for pl, color in scene.polylines:
        path_d = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(to_px, pl))
        body.append(f'<polyline points="{path_d}" fill="none" stroke="{color}" stroke-width="0.8"/>')
    for p, q, color in scene.segments:
        (x1, y1), (x2, y2) = to_px(p), to_px(q)
        body.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                    f'stroke="{color}" stroke-width="1.6"/>')
    for p, label in scene.markers:
        x, y = to_px(p)
        body.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="black"/>')
        body.append(f'<text x="{x + 6:.2f}" y="{y - 6:.2f}" font-size="12">{label}</text>')
    head = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">', '<rect width="100%" height="100%" fill="white"/>']
    if title:
        head.append(f'<text x="10" y="18" font-size="13">{_escape(title)}</text>')
    with open(path, "w") as fh:
        fh.write("\n".join(head + body + ["</svg>"]) + "\n")


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def add_glyphs_implicit(scene: Scene, F: Expr, mesh: Mesh, count: int, length: float):
    for p in sample_nodes(mesh, count):
        try:
            scene.segments.extend(null_glyphs(implicit_tangents(F, p), p, length))
        except (NotHyperbolic, EvalError, ArithmeticError):
            continue


def add_glyphs_parametric(scene: Scene, exprs, uv_points, length: float):
    r, s, t = exprs
    for u, v in uv_points:
        try:
            p = np.array([float(evaluate(e, {"u": u, "v": v})) for e in exprs])
            scene.segments.extend(null_glyphs(parametric_tangents(r, s, t, u, v), p, length))
        except (NotHyperbolic, EvalError, ArithmeticError, ValueError):
            continue


def coordinate_lines(exprs, u_range, v_range, n_lines: int = 7, n_pts: int = 40):
    """u = const lines (blue) and v = const lines (red) of a parametric chart."""
    out = []
    for fixed, other, color, ucol in ((u_range, v_range, "#1f77b4", True), (v_range, u_range, "#d62728", False)):
        for c in np.linspace(*fixed, n_lines):
            pts = []
            for w in np.linspace(*other, n_pts):
                env = {"u": c, "v": w} if ucol else {"u": w, "v": c}
                try:
                    p = [float(evaluate(e, env)) for e in exprs]
                except (EvalError, ArithmeticError, ValueError):
                    continue
                if all(np.isfinite(p)):
                    pts.append(p)
            if len(pts) > 1:
                out.append((np.array(pts), color))
    return out
