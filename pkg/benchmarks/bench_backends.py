#!/usr/bin/env python3
"""Timing comparison of the compiled and pure-Python Hermite backends.

The Hermite evaluation is the hot inner loop of the whole package: scalar
calls drive every characteristic-equation root solve, and array calls
sample every eigenfunction.  Run after `pip install -e .`:

    python benchmarks/bench_backends.py
"""
import time

import numpy as np

from dgl1d import _hermite_py

try:
    from dgl1d import _hermite_cy
except ImportError:
    _hermite_cy = None


def time_call(fn, repeat, *args):
    best = np.inf
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def bench_backend(mod):
    # scalar: one characteristic-equation evaluation needs two of these
    scalar = time_call(mod.hermite_scalar, 2000, 0.45, -1.3)
    # array: one eigenfunction sampling on the default nonlinear grid
    z = np.linspace(-0.85, 11.0, 12001)
    array = time_call(mod.hermite_array, 20, 0.45, z)
    return scalar, array


def main():
    rows = [("python", *bench_backend(_hermite_py))]
    if _hermite_cy is not None:
        rows.append(("cython", *bench_backend(_hermite_cy)))
    else:
        print("compiled backend not built; showing pure Python only")

    print(f"{'backend':<10} {'scalar H(nu,t)':>16} {'array H (12001 pts)':>20}")
    for name, scalar, array in rows:
        print(f"{name:<10} {scalar * 1e6:>13.2f} us {array * 1e3:>17.2f} ms")
    if len(rows) == 2:
        s0, a0 = rows[0][1], rows[0][2]
        s1, a1 = rows[1][1], rows[1][2]
        print(f"{'speedup':<10} {s0 / s1:>15.1f}x {a0 / a1:>18.1f}x")

    # end-to-end: one characteristic eigenvalue (root solve + seed)
    import dgl1d.degennes as dg
    t0 = time.perf_counter()
    dg._mu_value(2, 1.33)
    print(f"\none eigenvalue via characteristic equation "
          f"(incl. seed): {(time.perf_counter() - t0) * 1e3:.1f} ms "
          f"[active backend: {__import__('dgl1d').HERMITE_BACKEND}]")


if __name__ == "__main__":
    main()
