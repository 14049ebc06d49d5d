#!/usr/bin/env python3
"""Measure solve time against matrix size and fit a power law.

Runs the deep-split family (every iteration performs exactly one
refinement, so the workload scales with the instance, not with luck) at a
range of sizes, takes the median wall time per size over several seeds,
and reports the log-log slope::

    python3 scripts/scaling_study.py --sizes 16,32,64 --seeds 5
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from susim.instances import deep_split
from susim.linalg import DEFAULT_TOLERANCES
from susim.model import SOLVED
from susim.solver import solve


def run_study(sizes, count, seeds, depth_ratio):
    rows = []
    for n in sizes:
        depth = max(1, n // depth_ratio)
        times = []
        for seed in range(seeds):
            inst, _ = deep_split(n, count, depth, np.random.default_rng(seed))
            started = time.perf_counter()
            result = solve(inst, tol=DEFAULT_TOLERANCES)
            elapsed = time.perf_counter() - started
            if result.status != SOLVED:
                raise RuntimeError(f"n={n} seed={seed} ended {result.status}")
            times.append(elapsed)
        rows.append(
            {
                "n": n,
                "depth": depth,
                "median_s": float(np.median(times)),
                "min_s": float(np.min(times)),
                "max_s": float(np.max(times)),
            }
        )
    slope = float(
        np.polyfit(
            np.log([r["n"] for r in rows]),
            np.log([r["median_s"] for r in rows]),
            1,
        )[0]
    )
    return rows, slope


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="16,32,64", help="comma-separated matrix sizes")
    parser.add_argument("--count", type=int, default=2, help="matrices per side")
    parser.add_argument("--seeds", type=int, default=5, help="seeds per size")
    parser.add_argument(
        "--depth-ratio",
        type=int,
        default=4,
        help="scheduled refinements = n / depth-ratio",
    )
    parser.add_argument("--json", help="also write the rows and slope to this file")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    # warm up the linear algebra stack so the first row is not penalized
    solve(deep_split(sizes[0], args.count, 1, np.random.default_rng(0))[0])

    rows, slope = run_study(sizes, args.count, args.seeds, args.depth_ratio)
    print(f"{'n':>6} {'depth':>6} {'median':>10} {'min':>10} {'max':>10}")
    for r in rows:
        print(
            f"{r['n']:>6} {r['depth']:>6} {r['median_s']:>10.4f} "
            f"{r['min_s']:>10.4f} {r['max_s']:>10.4f}"
        )
    print(f"\nfitted exponent: time ~ n^{slope:.2f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"rows": rows, "exponent": slope}, fh, indent=2)
        print(f"wrote {args.json}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
