"""Fibrewise classification of second order PDE F(x,y,z,p,q,r,s,t) = 0.

Each fibre (x,y,z,p,q) = const cuts out a surface in the (r,s,t) chart.  We
sample hyperbolic points on it, build null charts with the implicit solver
and run the surface invariants; the per-sample classes are then aggregated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import LgsurfError
from .expr import BinOp, Expr, EvalError, Neg, Num, PDE_VARS, free_vars, gradient, parse, substitute
from .invariants import InvariantReport, csi_candidate, full_report
from .nullparam import solve_null_jet, solve_on_line
from .quadric import TOL_ZERO, QuadricError, chart_change, surface_type_at

FIBER_VARS = ("x", "y", "z", "p", "q")

PDE_CLASS = {
    "2-isotropic": "MA",
    "2-parabolic": "Goursat",
    "2-elliptic": "generic-2-elliptic",
    "2-hyperbolic": "generic-2-hyperbolic",
}

DEFAULT_SEEDS = ((0.5, 0.3, 0.8), (1.0, 0.0, -1.0), (-0.7, 0.4, 1.3), (1.5, 1.2, 0.5))


@dataclass(frozen=True)
class PdeProblem:
    F: Expr
    fibers: tuple = ({"x": 0.0, "y": 0.0, "z": 0.0, "p": 0.0, "q": 0.0},)
    seeds: tuple = DEFAULT_SEEDS
    points_per_fiber: int = 5
    order: int = 7
    spread: float = 0.3
    seed: int = 0
    max_attempts: int = 60

    def __post_init__(self):
        names = free_vars(self.F)
        unknown = names - PDE_VARS
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        if not names & {"r", "s", "t"}:
            raise ValueError("equation does not involve r, s or t; it is not second order")
        if not self.fibers:
            raise ValueError("at least one fibre sample is required")

    @classmethod
    def from_text(cls, text: str, **kw) -> "PdeProblem":
        return cls(parse(text, PDE_VARS), **kw)


@dataclass
class Sample:
    point: tuple
    status: str  # "ok", "not-hyperbolic", "failed"
    report: Optional[InvariantReport] = None
    detail: str = ""


@dataclass
class FiberResult:
    fiber: dict
    samples: list = field(default_factory=list)
    error: Optional[str] = None

    @property
    def reports(self):
        return [s.report for s in self.samples if s.status == "ok"]


@dataclass
class PdeReport:
    fibers: list
    pde_class: str
    csi: Optional[bool]
    spreads: dict

    def reports(self):
        return [r for f in self.fibers for r in f.reports]

    def to_dict(self) -> dict:
        return {
            "pde_class": self.pde_class,
            "csi": self.csi,
            "spreads": self.spreads,
            "fibers": [
                {
                    "fiber": f.fiber,
                    "error": f.error,
                    "samples": [
                        {
                            "point": list(s.point),
                            "status": s.status,
                            "detail": s.detail,
                            "report": None if s.report is None else s.report.to_dict(),
                        }
                        for s in f.samples
                    ],
                }
                for f in self.fibers
            ],
        }


def fiber_restrict(F: Expr, fiber: dict) -> Expr:
    missing = [k for k in free_vars(F) & set(FIBER_VARS) if k not in fiber]
    if missing:
        raise ValueError(f"fibre is missing values for {sorted(missing)}")
    vals = {}
    for k in FIBER_VARS:
        if k in fiber:
            v = float(fiber[k])
            if not np.isfinite(v):
                raise ValueError(f"fibre value {k} is not finite")
            vals[k] = Num(v)
    return substitute(F, vals)


def _solve_from(G: Expr, start) -> tuple:
    env = dict(zip("rst", start))
    g = np.abs(gradient(G, env, ("r", "s", "t")))
    var = "rst"[int(np.argmax(g))]
    val = solve_on_line(G, start, var)
    point = list(start)
    point["rst".index(var)] = val
    return tuple(point)


def sample_points(G: Expr, seeds, count: int, rng: np.random.Generator, spread: float,
                  max_attempts: int):
    """On-surface points near the seeds (the first tries are the seeds themselves)."""
    found, failures = [], []
    attempts = 0
    queue = [tuple(map(float, s)) for s in seeds]
    while len(found) < count and attempts < max_attempts:
        if queue:
            start = queue.pop(0)
        else:
            base = seeds[attempts % len(seeds)] if not found else found[attempts % len(found)]
            start = tuple(np.asarray(base, float) + rng.normal(scale=spread, size=3))
        attempts += 1
        try:
            pt = _solve_from(G, start)
        except (LgsurfError, EvalError, ValueError, ArithmeticError) as exc:
            failures.append((start, str(exc)))
            continue
        if any(np.allclose(pt, q, atol=1e-6) for q in found):
            continue
        found.append(pt)
    return found, failures


def _classify_point(G: Expr, pt, order: int, tol: float) -> Sample:
    try:
        kind = surface_type_at(G, pt, tol)
    except (QuadricError, EvalError) as exc:
        return Sample(pt, "failed", detail=str(exc))
    if kind != "hyperbolic":
        return Sample(pt, "not-hyperbolic", detail=kind)
    try:
        chart = solve_null_jet(G, pt, order)
        return Sample(pt, "ok", full_report(chart, G, tol))
    except (LgsurfError, EvalError, ArithmeticError, ValueError) as exc:
        return Sample(pt, "failed", detail=f"{type(exc).__name__}: {exc}")


def classify_fiber(problem: PdeProblem, fiber: dict, rng, tol: float = TOL_ZERO) -> FiberResult:
    G = fiber_restrict(problem.F, fiber)
    res = FiberResult(dict(fiber))
    pts, fails = sample_points(G, problem.seeds, problem.points_per_fiber, rng, problem.spread,
                               problem.max_attempts)
    if not pts:
        res.error = "no on-surface point found near the seeds"
        if fails:
            res.error += f" (last: {fails[-1][1]})"
        return res
    res.samples = [_classify_point(G, p, problem.order, tol) for p in pts]
    return res


def aggregate(classes) -> str:
    classes = list(classes)
    if not classes:
        return "non-hyperbolic-at-samples"
    labels = {PDE_CLASS[c] for c in classes}
    return labels.pop() if len(labels) == 1 else "mixed"


def classify_pde(problem: PdeProblem, tol: float = TOL_ZERO, csi_tol: float = 1e-4) -> PdeReport:
    rng = np.random.default_rng(problem.seed)
    fibers = [classify_fiber(problem, f, rng, tol) for f in problem.fibers]
    reps = [r for f in fibers for r in f.reports]
    pde_class = aggregate(r.class2 for r in reps)
    csi, spreads = (None, {})
    if len(reps) >= 2:
        csi, spreads = csi_candidate(reps, csi_tol)
    return PdeReport(fibers, pde_class, csi, spreads)


def csi_probe(problem: PdeProblem, tol: float = TOL_ZERO, csi_tol: float = 1e-4):
    rep = classify_pde(problem, tol, csi_tol)
    if len(rep.reports()) < 2:
        raise LgsurfError("CSI probe needs at least two classified samples")
    return rep.csi, rep.spreads


def legendre_transform(F: Expr) -> Expr:
    """F composed with the chart change (r,s,t) -> (-t, s, -r)/(rt - s^2)."""
    r, s, t = (parse(v) for v in "rst")
    d = parse("(r*t - s^2)")
    return substitute(F, {
        "r": BinOp("/", Neg(t), d),
        "s": BinOp("/", s, d),
        "t": BinOp("/", Neg(r), d),
    })


def legendre_point(pt):
    return chart_change(*pt)
