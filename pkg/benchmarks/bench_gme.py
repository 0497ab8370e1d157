#!/usr/bin/env python3
"""Benchmark the two march backends on the strong-coupling kernel.

The population march is a sequential O(N^2) convolution; this script
times the numba jit kernel against the pure-numpy fallback for a few
grid sizes and prints the speedup.  Usage:

    python benchmarks/bench_gme.py [--sizes 2000,5000,10000] [--repeat 3]
"""

import argparse
import os
import time

import numpy as np

from effbath.correlation import closed_form_correlation
from effbath.gme import default_step, niba_kernels, solve_gme
from effbath.params import build_params, derived_scales


def time_solve(grid, backend, repeat):
    os.environ["EFFBATH_BACKEND"] = backend
    solve_gme(grid)  # warm-up (jit compile / cache touch)
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        series = solve_gme(grid)
        best = min(best, time.perf_counter() - start)
    return best, series.values


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="2000,5000,10000",
                        help="comma-separated step counts")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    p = build_params({"Omega": 1, "alpha": 0.02, "g": 0.18,
                      "gamma_over_2piOmega": 0.0154, "beta": 10,
                      "Delta": 1, "epsilon": 0})
    scales = derived_scales(p)
    corr = closed_form_correlation(p, scales)
    h = default_step(p, scales)

    print(f"{'steps':>8} {'numba [s]':>12} {'numpy [s]':>12} {'speedup':>9} {'max |diff|':>12}")
    for n in sizes:
        grid = niba_kernels(corr, p.Delta, p.epsilon, h, n)
        t_numba, v_numba = time_solve(grid, "numba", args.repeat)
        t_numpy, v_numpy = time_solve(grid, "numpy", args.repeat)
        diff = np.abs(v_numba - v_numpy).max()
        print(f"{n:>8d} {t_numba:>12.4f} {t_numpy:>12.4f} {t_numpy / t_numba:>9.1f} {diff:>12.2e}")
    os.environ.pop("EFFBATH_BACKEND", None)


if __name__ == "__main__":
    main()
