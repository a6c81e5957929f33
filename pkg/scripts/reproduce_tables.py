"""Recompute every catalog row and print expected vs computed values.

    python3 scripts/reproduce_tables.py [--group ruled-catalog] [--json out.json]
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass

from lgsurf import catalog


@dataclass(frozen=True)
class Config:
    groups: tuple = catalog.GROUPS
    json_out: str | None = None


def main(cfg: Config) -> int:
    t0 = time.perf_counter()
    results = catalog.run_catalog(cfg.groups)
    print(catalog.format_results(results))
    passed = sum(r.ok for r in results)
    print(f"({time.perf_counter() - t0:.1f} s)")
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump([r.to_dict() for r in results], fh, indent=2, default=float)
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--group", action="append", choices=catalog.GROUPS)
    ap.add_argument("--json")
    a = ap.parse_args()
    raise SystemExit(main(Config(tuple(a.group) if a.group else catalog.GROUPS, a.json)))
