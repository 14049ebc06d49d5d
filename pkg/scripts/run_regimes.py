#!/usr/bin/env python3
"""Walk through three characteristic solver regimes and print what happens.

Covers one instance of each behaviour:

* a deep refinement cascade that takes one split per iteration,
* a non-normal single-matrix pair solved through its Hermitian parts,
* a pairwise-similar but jointly non-similar pair, rejected with a
  certificate and cross-checked against the trace-word oracle.

Usage: python3 scripts/run_regimes.py [--seed N]
"""

from __future__ import annotations

import argparse

import numpy as np

from susim.certcheck import check_certificate
from susim.instances import deep_split, ginibre, pairwise_trap, random_unitary
from susim.linalg import adjoint, fro
from susim.model import Instance
from susim.oracles import word_to_string
from susim.solver import solve


def banner(title: str) -> None:
    print()
    print(title)
    print("-" * len(title))


def deep_cascade(seed: int) -> None:
    banner("deep refinement cascade (n=7, p=3, five scheduled splits)")
    inst, _ = deep_split(7, 3, 5, np.random.default_rng(seed))
    result = solve(inst)
    print(f"status     {result.status}")
    print(f"iterations {result.iterations} (5 refinements + final check)")
    print(f"residual   {result.residual:.3e}")


def non_normal_pair(seed: int) -> None:
    banner("non-normal single-matrix pair (n=5)")
    rng = np.random.default_rng(seed)
    a = ginibre(5, 5, rng)
    defect = fro(a @ adjoint(a) - adjoint(a) @ a)
    u = random_unitary(5, rng)
    inst = Instance("sus", [a], [u @ a @ adjoint(u)])
    result = solve(inst)
    print(f"normality defect |AA*-A*A| = {defect:.3f}")
    print(f"status     {result.status}")
    print(f"iterations {result.iterations}")
    print(f"residual   {result.residual:.3e}")


def pairwise_trap_regime(seed: int) -> None:
    banner("pairwise similar, jointly non-similar (n=5, p=2)")
    inst, word = pairwise_trap(5, np.random.default_rng(seed))
    result = solve(inst)
    print(f"status      {result.status}")
    cert = result.certificate
    print(f"certificate {cert.kind} ({cert.target}) after {cert.iterations} iterations")
    report = check_certificate(inst, cert)
    print(f"recheck     {'confirmed' if report.confirmed else 'REFUTED'}: {report.reason}")
    print(
        f"oracle      word {word_to_string(word.letters, inst.count)} has traces "
        f"{word.trace_a:.4f} vs {word.trace_b:.4f}"
    )
    for k in range(2):
        single = Instance("sus", [inst.a_mats[k]], [inst.b_mats[k]])
        print(f"pair {k + 1} alone: {solve(single).status}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    deep_cascade(args.seed)
    non_normal_pair(args.seed)
    pairwise_trap_regime(args.seed)
    print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
