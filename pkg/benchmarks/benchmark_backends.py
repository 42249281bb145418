"""Compare the compiled RK4 kernel against the pure-numpy fallback.

Usage: python benchmarks/benchmark_backends.py [--n 10] [--steps 20000]
"""
import argparse
import time

import numpy as np

from opinionnet import _stepper_py
from opinionnet.fixtures import default_params, fixture_graph, initial_condition

try:
    from opinionnet import _stepper
except ImportError:
    _stepper = None


def time_backend(mod, a, u, x0, dt, steps, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = mod.rk4_final(a, u, 1.0, 1.2, 1.3, x0, dt, steps)
        best = min(best, time.perf_counter() - start)
    return best, np.asarray(out)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=20_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    g = fixture_graph()
    p = default_params(10, 0.294)
    a = g.matrix()
    x0 = initial_condition(10, seed=0)

    t_py, x_py = time_backend(_stepper_py, a, p.u, x0, 0.01, args.steps,
                              args.repeats)
    print(f"python backend: {args.steps / t_py:12.0f} steps/s "
          f"({t_py * 1e3:.1f} ms for {args.steps} steps)")
    if _stepper is None:
        print("cython backend: not built")
        return
    t_cy, x_cy = time_backend(_stepper, a, p.u, x0, 0.01, args.steps,
                              args.repeats)
    print(f"cython backend: {args.steps / t_cy:12.0f} steps/s "
          f"({t_cy * 1e3:.1f} ms for {args.steps} steps)")
    print(f"speedup: {t_py / t_cy:.1f}x")
    gap = float(np.max(np.abs(x_py - x_cy)))
    print(f"endpoint agreement: max |diff| = {gap:.3e}")


if __name__ == "__main__":
    main()
