"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from hermitizer import kernels
from hermitizer._accel import HAS_NUMBA


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    A = -1j * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    psi = rng.normal(size=3) + 0j
    V = np.ascontiguousarray(rng.normal(size=(2000, 60)) + 1j * rng.normal(size=(2000, 60)))
    edge = np.zeros(2000, dtype=bool)
    edge[:100] = edge[-100:] = True
    return {
        "rk4_integrate (dim 3, 10^4 steps)": ("rk4_integrate", (A, psi, 1e-3, 50, 201)),
        "path_table (N=16)": ("path_table", (16,)),
        "edge_mass (2000 x 60)": ("edge_mass", (V, edge)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAS_NUMBA:
        print("numba is not installed; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<36} {'numpy [ms]':>11} {'numba [ms]':>11} {'speed-up':>9}")
    for label, (name, fargs) in cases(rng).items():
        t_np = best_of(lambda: kernels.BACKENDS["numpy"][name](*fargs), args.repeat)
        t_nb = best_of(lambda: kernels.BACKENDS["numba"][name](*fargs), args.repeat)
        print(f"{label:<36} {1e3 * t_np:>11.3f} {1e3 * t_nb:>11.3f} {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
