"""Command-line front end.

    lgsurf surface --implicit "r*t = -1" --at "r=1,s=0,t=-1"
    lgsurf surface --param "r=u,s=0,t=v" --base "u=0,v=0"
    lgsurf pde --eq "s = exp(t)" --fiber "x=0,y=0,z=0,p=0,q=0"
    lgsurf paper-tables
    lgsurf plot --implicit "r*t = -1" --at "r=1,s=0,t=-1" --spheres --out rt

Exit codes: 0 success, 1 usage or input error, 2 classification not applicable
(non-hyperbolic point, wrong class), 3 internal tolerance failure (including a
reference-table mismatch).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import catalog
from .errors import ClassMismatch, Indeterminate, LgsurfError, NotHyperbolic
from .expr import PARAM_VARS, SURFACE_VARS, EvalError, ParseError, evaluate, gradient, parse
from .invariants import full_report, integrability_residual, syzygy_residuals
from . import plot as P
from .jets import JetError
from .nullparam import from_parametric, solve_null_jet, solve_on_line
from .pde import DEFAULT_SEEDS, FIBER_VARS, PdeProblem, classify_pde
from .plot import RegionError
from .quadric import TOL_ZERO, surface_type_at
from .schema import SCHEMA

EXIT_OK, EXIT_INPUT, EXIT_NOT_APPLICABLE, EXIT_TOLERANCE = 0, 1, 2, 3

MIN_ORDER_REPORT = 5
MIN_ORDER_INTEGRABILITY = 6


class InputError(ValueError):
    """Bad user input: malformed assignment, off-surface point, bad region."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    expressions: dict = field(default_factory=dict)
    points: tuple = ()
    order: int = 7
    tol: float = TOL_ZERO
    samples: Optional[int] = None
    fmt: str = "json"
    out: Optional[str] = None
    plot: Optional[str] = None
    seed: Optional[int] = None
    integrability: bool = True

    def __post_init__(self):
        if self.fmt not in ("json", "csv", "text"):
            raise InputError(f"unknown format {self.fmt!r}")
        if self.command in ("surface", "pde", "plot"):
            if self.order < MIN_ORDER_REPORT:
                raise InputError(
                    f"--order {self.order} is too low: generic and singly-ruled invariants "
                    f"need jets of order >= {MIN_ORDER_REPORT}")
            if self.command == "surface" and self.integrability and self.order < MIN_ORDER_INTEGRABILITY:
                raise InputError(
                    f"--order {self.order} is too low for the integrability residual "
                    f"(needs >= {MIN_ORDER_INTEGRABILITY}); raise --order or pass --no-integrability")
        if not self.tol > 0:
            raise InputError("--tol must be positive")
        if self.samples is not None and self.samples < 1:
            raise InputError("--samples must be at least 1")

    def summary(self) -> dict:
        return {"command": self.command, "order": self.order, "tol": self.tol,
                "samples": self.samples, "seed": self.seed, "format": self.fmt}


# input parsing -------------------------------------------------------------------------

def _split_items(text: str):
    """Split on commas that are not inside parentheses."""
    depth, cur, out = 0, [], []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [x.strip() for x in out if x.strip() and x.strip() != "..."]


def parse_assignments(text: str, allowed, what: str) -> dict:
    """'r=1, s=0, t=exp(1)' -> {'r': 1.0, ...}; values may be constant expressions."""
    out = {}
    for item in _split_items(text):
        if "=" not in item:
            raise InputError(f"{what}: expected name=value, got {item!r}")
        name, value = (x.strip() for x in item.split("=", 1))
        if name not in allowed:
            raise InputError(f"{what}: unknown coordinate {name!r} (allowed: {', '.join(sorted(allowed))})")
        if name in out:
            raise InputError(f"{what}: {name} given twice")
        v = float(evaluate(parse(value, ()), {}))
        if not math.isfinite(v):
            raise InputError(f"{what}: {name} is not finite")
        out[name] = v
    return out


def parse_param(text: str) -> dict:
    out = {}
    for item in _split_items(text):
        if "=" not in item:
            raise InputError(f"--param: expected r=..., s=..., t=..., got {item!r}")
        name, value = (x.strip() for x in item.split("=", 1))
        if name not in SURFACE_VARS:
            raise InputError(f"--param: unknown component {name!r}")
        out[name] = (value, parse(value, PARAM_VARS))
    missing = sorted(SURFACE_VARS - set(out))
    if missing:
        raise InputError(f"--param is missing components {missing}")
    return out


def parse_region(text: str) -> dict:
    out = {}
    for item in _split_items(text):
        try:
            name, rng = (x.strip() for x in item.split("=", 1))
            a, b = (float(evaluate(parse(x, ()), {})) for x in rng.split(":"))
        except (ValueError, EvalError) as exc:
            raise InputError(f"--region: cannot read {item!r} (want u=a:b,v=c:d)") from exc
        if name not in PARAM_VARS or not a < b:
            raise InputError(f"--region: bad range {item!r}")
        out[name] = (a, b)
    return out


def complete_point(F, partial: dict, tol: float = 1e-8):
    """Fill in missing chart coordinates by Newton along the one with the largest partial."""
    missing = [c for c in "rst" if c not in partial]
    if not missing:
        pt = tuple(partial[c] for c in "rst")
        val = float(evaluate(F, dict(partial)))
        g = np.max(np.abs(gradient(F, dict(partial), "rst")))
        if abs(val) > tol * max(1.0, g):
            raise InputError(f"point {pt} is off the surface (F = {val:.3e})")
        return pt
    last = None
    for start in (0.0, 1.0, 0.5, -1.0, 2.0):
        env = dict(partial)
        env.update({c: start for c in missing})
        try:
            g = np.abs(gradient(F, env, "rst"))
            var = max(missing, key=lambda c: g["rst".index(c)])
            env[var] = solve_on_line(F, [env[c] for c in "rst"], var)
            return tuple(env[c] for c in "rst")
        except (LgsurfError, EvalError, ArithmeticError, ValueError) as exc:
            last = exc
    raise InputError(f"could not complete the point from {partial}: {last}")


# report assembly ---------------------------------------------------------------------

def _clean(x):
    """JSON-ready copy: numpy scalars to Python, non-finite floats to None, tuples to lists."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return [_clean(v) for v in sorted(x, key=str)]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def surface_report(chart, F, cfg: RunConfig) -> dict:
    rep = full_report(chart, F, cfg.tol)
    syz = list(syzygy_residuals(chart))
    integ = None
    if cfg.integrability and rep.generic is not None and chart.order >= MIN_ORDER_INTEGRABILITY:
        integ = integrability_residual(chart)
    return {"invariants": rep.to_dict(), "checks": {"syzygy": syz, "integrability": integ}}


def _flatten(prefix, x, rows):
    if isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, rows)
    elif isinstance(x, list):
        rows.append((prefix, " ".join("" if v is None else repr(v) for v in x)))
    else:
        rows.append((prefix, "" if x is None else x))


def render(doc: dict, fmt: str, text_fn=None) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        rows = []
        _flatten("", doc["report"], rows)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("key", "value"))
        w.writerows(rows)
        return buf.getvalue()
    return text_fn(doc) + "\n"


def _num(x):
    return "null" if x is None else f"{x:.10g}"


def text_surface(doc: dict) -> str:
    inv = doc["report"]["invariants"]
    lines = [
        f"surface type: {inv['surface_type']}   class: {inv['class2']}   epsilon: {inv['epsilon']}",
        f"base point (r,s,t): {', '.join(_num(v) for v in inv['base_point'])}",
        f"Gamma = {_num(inv['gamma'])}   I1 = {_num(inv['I1'])}   I2 = {_num(inv['I2'])}   I3 = {_num(inv['I3'])}",
    ]
    if inv["ruled"]:
        r = inv["ruled"]
        zsq = None if r["zeta"] is None else r["zeta"] ** 2
        lines.append(f"Lambda11 = {_num(r['Lambda11'])}   Lambda12 = {_num(r['Lambda12'])}   "
                     f"Lambda111 = {_num(r['Lambda111'])}")
        lines.append(f"delta1 = {r['delta1']}   delta2 = {r['delta2']}   zeta^2 = {_num(zsq)}   "
                     f"zeta1 = {_num(r['zeta1'])}   zeta2 = {_num(r['zeta2'])}")
    if inv["generic"]:
        g = inv["generic"]
        lines.append(f"kappa1 = {_num(g['kappa1'])}   kappa2 = {_num(g['kappa2'])}   tau = {_num(g['tau'])}")
        lines.append(f"bbar12 = {_num(g['bbar12'])}   bbar21 = {_num(g['bbar21'])}   dupin = {inv['dupin']}")
    if inv["conjugate"]:
        c = inv["conjugate"]
        lines.append(f"conjugate point [{', '.join(_num(v) for v in c['point'])}]   "
                     f"dim = {c['dim']} ({c['label']})")
    ch = doc["report"]["checks"]
    lines.append(f"syzygy residuals: {', '.join(_num(v) for v in ch['syzygy'])}   "
                 f"integrability residual: {_num(ch['integrability'])}")
    return "\n".join(lines)


def text_pde(doc: dict) -> str:
    rep = doc["report"]
    lines = [f"class: {rep['pde_class']}   CSI: {rep['csi']}"]
    for f in rep["fibers"]:
        fib = ", ".join(f"{k}={v:g}" for k, v in f["fiber"].items())
        counts = {}
        for s in f["samples"]:
            key = s["report"]["class2"] if s["report"] else s["status"]
            counts[key] = counts.get(key, 0) + 1
        lines.append(f"fiber {fib}: " + (f["error"] or ", ".join(f"{k} x{v}" for k, v in counts.items())))
    big = {k: v for k, v in rep["spreads"].items() if v is None or v > 1e-4}
    if big:
        lines.append("non-constant invariants: " + ", ".join(sorted(big)))
    return "\n".join(lines)


def _emit(doc, cfg: RunConfig, text_fn):
    out = render(_clean(doc), cfg.fmt, text_fn)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# commands ----------------------------------------------------------------------------

def _surface_chart(args, cfg: RunConfig):
    """(chart, F or None, input description) from --implicit/--at or --param/--base."""
    if args.implicit:
        if args.param or args.base:
            raise InputError("use either --implicit/--at or --param/--base")
        if not args.at:
            raise InputError("--implicit needs --at")
        F = parse(args.implicit, SURFACE_VARS)
        partial = parse_assignments(args.at, SURFACE_VARS, "--at")
        point = complete_point(F, partial)
        kind = surface_type_at(F, point, cfg.tol)
        if kind != "hyperbolic":
            raise NotHyperbolic(f"surface is {kind} at {point}")
        chart = solve_null_jet(F, point, cfg.order)
        return chart, F, {"mode": "implicit", "expression": args.implicit, "at": partial, "point": list(point)}
    if not args.param:
        raise InputError("give --implicit EXPR --at POINT or --param 'r=...,s=...,t=...' --base 'u=..,v=..'")
    comps = parse_param(args.param)
    base = parse_assignments(args.base or "u=0,v=0", PARAM_VARS, "--base")
    uv = (base.get("u", 0.0), base.get("v", 0.0))
    chart = from_parametric(*(comps[c][1] for c in "rst"), base=uv, order=cfg.order)
    desc = {"mode": "param", **{c: comps[c][0] for c in "rst"}, "base": list(uv)}
    return chart, None, desc


def cmd_surface(args) -> int:
    cfg = RunConfig("surface", order=args.order, tol=args.tol, fmt=args.format, out=args.out,
                    plot=args.plot, integrability=not args.no_integrability)
    chart, F, desc = _surface_chart(args, cfg)
    doc = {"input": desc, "config": cfg.summary(), "report": surface_report(chart, F, cfg)}
    _emit(doc, cfg, text_surface)
    if cfg.plot:
        _plot(args, cfg.plot, chart, F)
    return EXIT_OK


def cmd_pde(args) -> int:
    fibers = tuple(parse_assignments(f, FIBER_VARS, "--fiber") for f in args.fiber) or None
    seeds = tuple(tuple(parse_assignments(a, SURFACE_VARS, "--at").get(c, 0.0) for c in "rst")
                  for a in args.at) or DEFAULT_SEEDS
    cfg = RunConfig("pde", expressions={"F": args.eq}, points=seeds, order=args.order, tol=args.tol,
                    samples=args.samples, fmt=args.format, out=args.out, seed=args.seed)
    kw = {"seeds": seeds, "order": cfg.order, "seed": cfg.seed or 0}
    if fibers:
        kw["fibers"] = tuple({k: f.get(k, 0.0) for k in FIBER_VARS} for f in fibers)
    if cfg.samples:
        kw["points_per_fiber"] = cfg.samples
    try:
        problem = PdeProblem.from_text(args.eq, **kw)
    except ParseError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep = classify_pde(problem, cfg.tol)
    doc = {"input": {"equation": args.eq, "fibers": list(problem.fibers), "seeds": [list(s) for s in seeds]},
           "config": cfg.summary(), "report": rep.to_dict()}
    _emit(doc, cfg, text_pde)
    return EXIT_NOT_APPLICABLE if rep.pde_class == "non-hyperbolic-at-samples" else EXIT_OK


def cmd_paper_tables(args) -> int:
    groups = args.group or None
    unknown = set(groups or ()) - set(catalog.GROUPS)
    if unknown:
        raise InputError(f"unknown group(s) {sorted(unknown)}; choose from {', '.join(catalog.GROUPS)}")
    cfg = RunConfig("paper-tables", fmt=args.format, out=args.out)
    results = catalog.run_catalog(groups)
    doc = {"input": {"groups": list(groups or catalog.GROUPS)}, "config": cfg.summary(),
           "report": {"rows": [r.to_dict() for r in results], "passed": sum(r.ok for r in results),
                      "total": len(results)}}
    _emit(doc, cfg, lambda d: catalog.format_results(results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_TOLERANCE


def cmd_schema(args) -> int:
    sys.stdout.write(json.dumps(SCHEMA, indent=2) + "\n")
    return EXIT_OK


def _plot(args, prefix, chart, F) -> dict:
    scene = P.Scene()
    n = args.grid
    if F is not None:
        h = float(args.region) if args.region else 1.0
        mesh = P.mesh_implicit(F, chart.base_point, h, n)
        scene.meshes.append(mesh)
        P.add_glyphs_implicit(scene, F, mesh, args.glyphs, 0.08 * h)
    else:
        comps = parse_param(args.param)
        exprs = tuple(comps[c][1] for c in "rst")
        u0, v0 = chart.base
        reg = parse_region(args.region) if args.region else {}
        ur, vr = reg.get("u", (u0 - 1, u0 + 1)), reg.get("v", (v0 - 1, v0 + 1))
        mesh = P.mesh_parametric(*exprs, ur, vr, n)
        scene.meshes.append(mesh)
        scene.polylines.extend(P.coordinate_lines(exprs, ur, vr))
        k = max(2, int(round(math.sqrt(args.glyphs))))
        uv = [(u, v) for u in np.linspace(*ur, k + 2)[1:-1] for v in np.linspace(*vr, k + 2)[1:-1]]
        span = float(np.nanmax(mesh.vertices) - np.nanmin(mesh.vertices))
        P.add_glyphs_parametric(scene, exprs, uv, 0.04 * span)
    written = {}
    try:
        rep = full_report(chart, F)
    except LgsurfError:
        rep = None
    if rep is not None and rep.conjugate:
        p = np.asarray(rep.conjugate["point"], float)
        if abs(p[0]) > 1e-9 * np.max(np.abs(p)):
            scene.markers.append((p[1:4] / p[0], "conjugate point"))
            written["conjugate_point"] = [float(x) for x in p[1:4] / p[0]]
    if getattr(args, "spheres", False) and rep is not None and rep.contact_spheres:
        h = float(args.region) if (F is not None and args.region) else 1.0
        for key, color in (("plus", "#fdae6b"), ("minus", "#a1d99b")):
            G = P.sphere_expression(rep.contact_spheres[key])
            try:
                scene.meshes.append(P.mesh_implicit(G, chart.base_point, h, n, f"sphere_{key}", color))
            except P.RegionError:
                continue
    P.write_obj(scene, prefix + ".obj")
    title = args.implicit or args.param
    P.write_svg(scene, prefix + ".svg", title=title)
    written.update(obj=prefix + ".obj", svg=prefix + ".svg")
    return written


def cmd_plot(args) -> int:
    cfg = RunConfig("plot", order=args.order, tol=args.tol, fmt="text", out=None, plot=args.out,
                    integrability=False)
    chart, F, _ = _surface_chart(args, cfg)
    try:
        written = _plot(args, cfg.plot, chart, F)
    except RegionError as exc:
        raise InputError(str(exc)) from exc
    for k, v in written.items():
        print(f"{k}: {v}")
    return EXIT_OK


# argument parsing ------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _surface_args(p, with_format=True):
    p.add_argument("--implicit", help="surface F(r,s,t) = 0, e.g. 'r*t = -1'")
    p.add_argument("--at", help="point on the surface, e.g. 'r=1,s=0,t=-1'; missing coordinates are solved for")
    p.add_argument("--param", help="null parametrization, e.g. 'r=u,s=0,t=v'")
    p.add_argument("--base", help="base parameters, e.g. 'u=0,v=0'")
    p.add_argument("--order", type=int, default=7, help="jet order K (>= 5)")
    p.add_argument("--tol", type=float, default=TOL_ZERO, help="zero-test tolerance")
    if with_format:
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--out", help="write the report here instead of stdout")


def _plot_args(p):
    p.add_argument("--region", help="implicit: half-width around the point; param: 'u=a:b,v=c:d'")
    p.add_argument("--grid", type=int, default=25, help="mesh nodes per side")
    p.add_argument("--glyphs", type=int, default=16, help="number of null-cone glyphs")
    p.add_argument("--spheres", action="store_true", help="overlay the contact spheres (2-elliptic)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lgsurf", description="Invariants of hyperbolic surfaces and second order PDE.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("surface", help="invariant report for one surface")
    _surface_args(s)
    s.add_argument("--no-integrability", action="store_true", help="skip the integrability residual")
    s.add_argument("--plot", metavar="PREFIX", help="also write PREFIX.obj and PREFIX.svg")
    _plot_args(s)
    s.set_defaults(func=cmd_surface)

    p = sub.add_parser("pde", help="fibrewise classification of F(x,y,z,p,q,r,s,t) = 0")
    p.add_argument("--eq", required=True, help="the equation, e.g. 's = exp(t)'")
    p.add_argument("--fiber", action="append", default=[], help="'x=0,y=0,z=0,p=0,q=0' (repeatable)")
    p.add_argument("--at", action="append", default=[], help="seed point 'r=..,s=..,t=..' (repeatable)")
    p.add_argument("--samples", type=int, help="points per fiber (default 5)")
    p.add_argument("--seed", type=int, default=0, help="random seed for sample search")
    p.add_argument("--order", type=int, default=7)
    p.add_argument("--tol", type=float, default=TOL_ZERO)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pde)

    t = sub.add_parser("paper-tables", help="check the reference example tables")
    t.add_argument("--group", action="append", choices=catalog.GROUPS, help="restrict to a group (repeatable)")
    t.add_argument("--format", choices=("json", "csv", "text"), default="text")
    t.add_argument("--out")
    t.set_defaults(func=cmd_paper_tables)

    g = sub.add_parser("plot", help="OBJ mesh and SVG picture of a surface")
    _surface_args(g, with_format=False)
    _plot_args(g)
    g.add_argument("--out", default="lgsurf_plot", help="output prefix")
    g.set_defaults(func=cmd_plot)

    sc = sub.add_parser("schema", help="print the JSON schema of the reports")
    sc.set_defaults(func=cmd_schema)
    return ap


def _caret(exc: ParseError) -> str:
    text = exc.text
    col = len(text.encode("utf-8")[: exc.offset].decode("utf-8", errors="ignore"))
    return f"  {text}\n  {' ' * col}^"


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n{_caret(exc)}\n")
        return EXIT_INPUT
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (NotHyperbolic, ClassMismatch, Indeterminate) as exc:
        sys.stderr.write(f"not applicable: {exc}\n")
        return EXIT_NOT_APPLICABLE
    except (LgsurfError, JetError, ZeroDivisionError, FloatingPointError) as exc:
        sys.stderr.write(f"tolerance failure: {type(exc).__name__}: {exc}\n")
        return EXIT_TOLERANCE
    except (EvalError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


def console() -> None:
    sys.exit(main())

