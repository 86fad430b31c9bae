#!/usr/bin/env python3
"""Compare the compiled and pure-numpy evaluation kernels.

Usage: python benchmarks/bench_kernels.py [reps]
"""
import sys
import time

import numpy as np

from varorbit import _kernels_py

try:
    from varorbit import _kernels as _compiled
except ImportError:
    _compiled = None


def bench(fn, samples, masses, alpha, reps):
    fn(samples, masses, alpha)  # warm up
    t0 = time.perf_counter()
    for _ in range(reps):
        fn(samples, masses, alpha)
    return (time.perf_counter() - t0) / reps


def main():
    reps = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    rng = np.random.default_rng(0)
    print(f"{'case':<28}{'numpy':>12}{'cython':>12}{'speedup':>10}")
    for n, d, m in [(3, 2, 257), (3, 2, 2049), (5, 3, 2049), (8, 3, 4097)]:
        samples = rng.normal(size=(m, n, d)) + 3.0 * np.arange(n)[None, :, None]
        masses = np.full(n, 1.0 / n)
        for name, py_fn, cy_fn in [
            ("potential", _kernels_py.potential_batch,
             _compiled.potential_batch if _compiled else None),
            ("potential+grad", _kernels_py.potential_grad_batch,
             _compiled.potential_grad_batch if _compiled else None),
        ]:
            t_py = bench(py_fn, samples, masses, 1.0, reps)
            if cy_fn is None:
                print(f"{name} n={n} d={d} m={m:<6}{t_py * 1e3:>10.3f}ms"
                      f"{'n/a':>12}{'':>10}")
                continue
            t_cy = bench(cy_fn, samples, masses, 1.0, reps)
            case = f"{name} n={n} d={d} m={m}"
            print(f"{case:<28}{t_py * 1e3:>10.3f}ms{t_cy * 1e3:>10.3f}ms"
                  f"{t_py / t_cy:>10.2f}x")
    if _compiled is None:
        print("\ncompiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
