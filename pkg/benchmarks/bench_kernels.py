"""Benchmark the compiled row-reduction kernels against the pure-Python twins.

Runs the exact workloads the engine spends its time on: canonical RREF of
dense integer matrices (the rational lane) and of matrices over F_p.

    python benchmarks/bench_kernels.py [--size 60] [--rounds 5]
"""

from __future__ import annotations

import argparse
import random
import time

from koszul import _kernels

try:
    from koszul import _ckernels
except ImportError:
    _ckernels = None


def make_int_matrix(rng, n, m, lo=-30, hi=30):
    return [[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]


def bench(fn, mats, extra=()):
    best = None
    for _ in range(3):
        t0 = time.perf_counter()
        for m in mats:
            fn([list(r) for r in m], len(m[0]), *extra)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=60)
    ap.add_argument("--rounds", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    n = args.size
    mats = [make_int_matrix(rng, n, n + 5) for _ in range(args.rounds)]
    p = 1000003
    mats_p = [[[v % p for v in row] for row in m] for m in mats]

    print(f"dense {n}x{n + 5}, {args.rounds} matrices per timing (best of 3)")
    rows = []
    t_py = bench(_kernels.rref_int, mats)
    rows.append(("rref_int (rational lane)", "python", t_py, 1.0))
    if _ckernels is not None:
        t_c = bench(_ckernels.rref_int, mats)
        rows.append(("rref_int (rational lane)", "c", t_c, t_py / t_c))
    t_py_p = bench(_kernels.rref_fp, mats_p, (p,))
    rows.append((f"rref_fp (p={p})", "python", t_py_p, 1.0))
    if _ckernels is not None:
        t_c_p = bench(_ckernels.rref_fp, mats_p, (p,))
        rows.append((f"rref_fp (p={p})", "c", t_c_p, t_py_p / t_c_p))
    print(f"{'kernel':34} {'backend':8} {'seconds':>10} {'speedup':>9}")
    for name, backend, secs, speed in rows:
        print(f"{name:34} {backend:8} {secs:10.4f} {speed:8.1f}x")
    if _ckernels is None:
        print("compiled backend unavailable; only the fallback was timed")
    else:
        sample = mats[0]
        assert _kernels.rref_int([list(r) for r in sample], len(sample[0])) == \
            _ckernels.rref_int([list(r) for r in sample], len(sample[0]))
        print("outputs verified identical on a sample matrix")


if __name__ == "__main__":
    main()
