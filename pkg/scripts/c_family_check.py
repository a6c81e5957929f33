"""Sweep the one-parameter family (3r - 6st + 2t^3)^2 + c (2s - t^2)^3 = 0.

Expected: c > 4 generic 2-elliptic, c < 0 generic 2-hyperbolic, 0 < c <= 4 no
hyperbolic points. Also lists c(m) = (1 + eps m^4)(1 + eps / m^4) for the
maximally symmetric charts, which lands in c >= 4 (eps = 1) or c <= 0 (eps = -1).
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from lgsurf.pde import PdeProblem, classify_pde


@dataclass(frozen=True)
class Config:
    cs: tuple = (-50.0, -8.0, -1.0, -0.1, 0.5, 2.0, 3.9, 4.1, 8.0, 100.0)
    points: int = 4


def expected(c: float) -> str:
    if c > 4:
        return "generic-2-elliptic"
    if c < 0:
        return "generic-2-hyperbolic"
    return "non-hyperbolic-at-samples"


def family(c: float) -> str:
    return f"(3*r - 6*s*t + 2*t^3)^2 + {c!r}*(2*s - t^2)^3"


def main(cfg: Config) -> int:
    bad = 0
    for c in cfg.cs:
        rep = classify_pde(PdeProblem.from_text(family(c), points_per_fiber=cfg.points))
        ok = rep.pde_class == expected(c)
        bad += not ok
        tau = [r.generic["tau"] for r in rep.reports() if r.generic]
        extra = f"tau = {tau[0]:+.6f}" if tau else ""
        print(f"c = {c:8.2f}  {rep.pde_class:26s} csi={str(rep.csi):5s} {'ok' if ok else 'MISMATCH'}  {extra}")
    print()
    for eps in (1, -1):
        for m in (0.5, 0.9, 1.0, 1.5, 3.0):
            print(f"eps = {eps:+d}  m = {m:4.2f}  c(m) = {(1 + eps * m**4) * (1 + eps / m**4):+.4f}")
    return 1 if bad else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--c", type=float, action="append")
    a = ap.parse_args()
    raise SystemExit(main(Config(tuple(a.c)) if a.c else Config()))
