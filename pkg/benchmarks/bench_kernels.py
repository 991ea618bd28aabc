#!/usr/bin/env python3
"""Benchmark the compiled distance kernels against the numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--sizes 158,1000,10000] [--queries 200]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from wasmfp._kernels import _distpy

try:
    from wasmfp._kernels import _distcy
except ImportError:
    _distcy = None

KERNELS = ("sq_euclidean_scan", "inner_product_scan", "mahalanobis_sq_scan")


def time_kernel(module, name: str, rows, queries, chol) -> float:
    fn = getattr(module, name)
    args = (chol,) if name == "mahalanobis_sq_scan" else ()
    fn(rows, queries[0], *args)  # warm-up
    started = time.perf_counter()
    for q in queries:
        fn(rows, q, *args)
    return time.perf_counter() - started


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="158,1000,10000",
                        help="database sizes (columns) to benchmark")
    parser.add_argument("--queries", type=int, default=200)
    parser.add_argument("--dim", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _distcy is None:
        print("compiled kernels not built; run pip install -e . first")
        return

    rng = np.random.default_rng(args.seed)
    n = args.dim
    cov = rng.uniform(-1, 1, (n, n))
    cov = cov @ cov.T + n * np.eye(n)
    chol = np.ascontiguousarray(np.linalg.cholesky(cov))
    queries = [np.ascontiguousarray(rng.uniform(0, 100, n))
               for _ in range(args.queries)]

    header = f"{'kernel':<22} {'m':>7} {'numpy':>10} {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for m in (int(s) for s in args.sizes.split(",")):
        rows = np.ascontiguousarray(rng.uniform(0, 100, (m, n)))
        for name in KERNELS:
            t_py = time_kernel(_distpy, name, rows, queries, chol)
            t_cy = time_kernel(_distcy, name, rows, queries, chol)
            print(f"{name:<22} {m:>7} {t_py * 1e3:>9.2f}ms {t_cy * 1e3:>9.2f}ms "
                  f"{t_py / t_cy:>7.2f}x")


if __name__ == "__main__":
    main()
