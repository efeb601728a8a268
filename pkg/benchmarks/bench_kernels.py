#!/usr/bin/env python3
"""Benchmark the compiled cover-amplitude kernel against the numpy fallback.

The kernel is the inner loop of Hurst estimation, which runs once per
candidate pair per training window (hundreds of times per backtest), so
its latency on short series is what matters most.

Usage: python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from fractalport import _cover_py
from fractalport.fbm import window_ladder

try:
    from fractalport import _cover_cy
except ImportError:
    _cover_cy = None


def bench(fn, x, deltas, repeats):
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeats):
            fn(x, deltas)
        best = min(best, (time.perf_counter() - t0) / repeats)
    return best


def main():
    rng = np.random.default_rng(0)
    sizes = [126, 252, 1024, 4096, 16384]
    print(f"{'n':>7} {'scales':>6} {'numpy':>12} {'cython':>12} {'speedup':>8}")
    for n in sizes:
        x = np.cumsum(rng.standard_normal(n))
        deltas = window_ladder(n)
        repeats = max(20, 200_000 // n)
        t_py = bench(_cover_py.cover_amplitudes, x, deltas, repeats)
        if _cover_cy is not None:
            t_cy = bench(_cover_cy.cover_amplitudes, x, deltas, repeats)
            s_py, _ = _cover_py.cover_amplitudes(x, deltas)
            s_cy, _ = _cover_cy.cover_amplitudes(x, deltas)
            assert np.allclose(s_py, s_cy, rtol=1e-12), "backend mismatch"
            print(
                f"{n:>7} {len(deltas):>6} {t_py * 1e6:>10.1f}us "
                f"{t_cy * 1e6:>10.1f}us {t_py / t_cy:>7.1f}x"
            )
        else:
            print(f"{n:>7} {len(deltas):>6} {t_py * 1e6:>10.1f}us {'n/a':>12} {'n/a':>8}")
    if _cover_cy is None:
        print("\ncompiled kernel not built; install with a C compiler to compare")


if __name__ == "__main__":
    main()
