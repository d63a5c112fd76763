#!/usr/bin/env python3
"""Benchmark: compiled kernel backend vs the pure-Python fallback.

Times the raw reduction kernels on large arrays and one end-to-end hot
path (integrating the finest comb function against the exponential
measure).  Run after `pip install -e .`:

    python benchmarks/bench_kernels.py [--size 2000000] [--repeat 5]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from measure_limits.kernels import _pure

try:
    from measure_limits.kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(size: int, repeat: int) -> list[tuple[str, float, float]]:
    rng = np.random.default_rng(1)
    values = np.ascontiguousarray(rng.uniform(-10, 10, size))
    masses = np.ascontiguousarray(rng.uniform(0, 1, size))
    rows = []
    for name, call in [
        ("comp_sum", lambda impl: impl.comp_sum(values)),
        ("pos_neg_dot", lambda impl: impl.pos_neg_dot(values, masses)),
        ("tail_dot(k=5)", lambda impl: impl.tail_dot(values, masses, 5.0)),
    ]:
        t_pure = timeit(lambda: call(_pure), repeat)
        t_fast = timeit(lambda: call(_fast), repeat) if _fast else math.nan
        rows.append((name, t_pure, t_fast))
    return rows


def bench_end_to_end(repeat: int) -> list[tuple[str, float, float]]:
    import importlib
    import os

    def run_with(backend: str) -> float:
        os.environ["MEASURE_LIMITS_BACKEND"] = backend
        import measure_limits.kernels as kern
        importlib.reload(kern)
        import measure_limits.integration as integ
        importlib.reload(integ)
        from measure_limits import gallery
        importlib.reload(gallery)
        sc = gallery.build("dyadic_comb", n_max=20)
        g20 = sc.g_seq.fn(20)
        mu = sc.limit_measure
        return timeit(lambda: integ.integrate(g20, mu), repeat)

    t_pure = run_with("pure")
    t_fast = run_with("fast") if _fast else math.nan
    os.environ.pop("MEASURE_LIMITS_BACKEND", None)
    return [("integrate comb g_20 (2M cells)", t_pure, t_fast)]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _fast is None:
        print("note: compiled backend not built; timing pure only")
    rows = bench_kernels(args.size, args.repeat)
    rows += bench_end_to_end(args.repeat)
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'pure':>10}  {'fast':>10}  {'speedup':>8}")
    for name, t_pure, t_fast in rows:
        speed = t_pure / t_fast if t_fast == t_fast and t_fast > 0 else math.nan
        fast_s = f"{t_fast * 1e3:9.2f}ms" if t_fast == t_fast else "       n/a"
        print(f"{name:<{width}}  {t_pure * 1e3:9.2f}ms  {fast_s}  {speed:7.1f}x")


if __name__ == "__main__":
    main()
