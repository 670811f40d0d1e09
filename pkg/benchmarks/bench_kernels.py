#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallbacks.

Times the twisted-convolution product and the multi-index power
enumeration on growing problem sizes.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --degrees 16 32 64 --repeats 20
    python benchmarks/bench_kernels.py --output results.json
"""

import argparse
import json
import time

import numpy as np

from qplane._accel import (
    NUMBA_ENABLED,
    qmul_full_numba,
    qmul_full_numpy,
    qpow_formula_numba,
    qpow_formula_numpy,
)

Q = 0.5 + 0.25j


def dense_table(rng, degree):
    return rng.standard_normal((degree + 1, degree + 1)) + 1j * rng.standard_normal(
        (degree + 1, degree + 1)
    )


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_qmul(degrees, repeats):
    rng = np.random.default_rng(0)
    print("\ntwisted product (dense tables)")
    print(f"{'D':>6} {'numba (ms)':>12} {'numpy (ms)':>12} {'speedup':>9}")
    print("-" * 42)
    results = []
    for d in degrees:
        a, b = dense_table(rng, d), dense_table(rng, d)
        t_np = time_call(lambda: qmul_full_numpy(a, b, Q), repeats)
        if NUMBA_ENABLED:
            qmul_full_numba(a, b, Q)  # warm the jit
            t_nb = time_call(lambda: qmul_full_numba(a, b, Q), repeats)
            err = np.max(
                np.abs(qmul_full_numba(a, b, Q) - qmul_full_numpy(a, b, Q))
            )
            assert err < 1e-9, f"kernel mismatch {err}"
        else:
            t_nb = float("inf")
        speedup = t_np / t_nb if t_nb > 0 else 0.0
        print(f"{d:>6} {t_nb * 1e3:>12.3f} {t_np * 1e3:>12.3f} {speedup:>8.1f}x")
        results.append(
            {"degree": d, "numba_s": t_nb, "numpy_s": t_np, "speedup": speedup}
        )
    return results


def bench_qpow(sizes, repeats):
    rng = np.random.default_rng(1)
    print("\npower enumeration (support m, exponent s: m**s tuples)")
    print(f"{'m':>4} {'s':>3} {'tuples':>9} {'numba (ms)':>12} {'numpy (ms)':>12} {'speedup':>9}")
    print("-" * 56)
    results = []
    for m, s in sizes:
        ii = rng.integers(0, 4, m).astype(np.int64)
        kk = rng.integers(0, 4, m).astype(np.int64)
        aa = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        t_np = time_call(lambda: qpow_formula_numpy(ii, kk, aa, s, Q), repeats)
        if NUMBA_ENABLED:
            qpow_formula_numba(ii, kk, aa, s, Q)
            t_nb = time_call(lambda: qpow_formula_numba(ii, kk, aa, s, Q), repeats)
            err = np.max(
                np.abs(
                    qpow_formula_numba(ii, kk, aa, s, Q)
                    - qpow_formula_numpy(ii, kk, aa, s, Q)
                )
            )
            assert err < 1e-9, f"kernel mismatch {err}"
        else:
            t_nb = float("inf")
        speedup = t_np / t_nb if t_nb > 0 else 0.0
        print(
            f"{m:>4} {s:>3} {m**s:>9} {t_nb * 1e3:>12.3f} "
            f"{t_np * 1e3:>12.3f} {speedup:>8.1f}x"
        )
        results.append(
            {"support": m, "power": s, "numba_s": t_nb, "numpy_s": t_np,
             "speedup": speedup}
        )
    return results


def main():
    parser = argparse.ArgumentParser(description="benchmark kernels vs fallbacks")
    parser.add_argument("--degrees", type=int, nargs="+", default=[8, 16, 32, 48])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--output", default=None, help="JSON results path")
    args = parser.parse_args()

    print(f"numba available: {NUMBA_ENABLED}")
    if not NUMBA_ENABLED:
        print("jitted columns will be empty; set QPLANE_BACKEND unset or 'numba'")

    all_results = {
        "numba_enabled": NUMBA_ENABLED,
        "qmul": bench_qmul(args.degrees, args.repeats),
        "qpow": bench_qpow([(4, 4), (4, 6), (6, 6), (8, 6)], args.repeats),
    }

    if args.output:
        with open(args.output, "w", encoding="utf-8") as fp:
            json.dump(all_results, fp, indent=2)
        print(f"\nresults written to {args.output}")


if __name__ == "__main__":
    main()
