#!/usr/bin/env python3
"""Benchmark the jitted grid kernels against their pure-numpy twins.

Times the three hot kernels (single-crystal sinc, N-crystal assembly,
Gaussian model) on square grids of a few sizes. The jitted path is compiled
before timing so the numbers compare steady-state throughput.

Usage:
    python3 benchmarks/bench_kernels.py [--sizes 512 1024] [--repeats 5]
"""

import argparse
import time

import numpy as np

from biphoton import _backend


def _grid_inputs(n):
    rng = np.random.default_rng(7)
    nu = np.linspace(-100.0, 100.0, n)
    ks = 9.0 + 1e-3 * nu + 1e-6 * nu**2 + 1e-9 * rng.standard_normal(n)
    ki = 9.1 + 1.1e-3 * nu + 0.9e-6 * nu**2
    kp_sum = 18.1 + 1.05e-3 * np.linspace(-200.0, 200.0, 2 * n - 1)
    qs, qi = 1.01 * ks, 0.99 * ki
    qp_sum = 1.002 * kp_sum
    return nu, kp_sum, ks, ki, qp_sum, qs, qi


def _time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[512, 1024])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if not _backend.HAVE_NUMBA:
        print("numba is not importable; only the numpy path can run")

    rows = []
    for n in args.sizes:
        nu, kp_sum, ks, ki, qp_sum, qs, qi = _grid_inputs(n)
        cases = {
            "phasematching": (
                lambda: _backend.phasematching_numpy(kp_sum, ks, ki, 2e4),
                lambda: _backend.phasematching_numba(kp_sum, ks, ki, 2e4),
            ),
            "assembly": (
                lambda: _backend.assembly_numpy(
                    kp_sum, ks, ki, qp_sum, qs, qi, 48.85, 58.83, 10
                ),
                lambda: _backend.assembly_numba(
                    kp_sum, ks, ki, qp_sum, qs, qi, 48.85, 58.83, 10
                ),
            ),
            "gaussian_model": (
                lambda: _backend.gaussian_model_numpy(
                    nu, 46.4, 0.0, -2.9, -0.0013, -6e-4, -7e-4, 2e-3
                ),
                lambda: _backend.gaussian_model_numba(
                    nu, 46.4, 0.0, -2.9, -0.0013, -6e-4, -7e-4, 2e-3
                ),
            ),
        }
        for name, (numpy_fn, numba_fn) in cases.items():
            t_np = _time(numpy_fn, args.repeats)
            if _backend.HAVE_NUMBA:
                numba_fn()  # compile outside the timed region
                t_nb = _time(numba_fn, args.repeats)
                if not np.allclose(numpy_fn(), numba_fn(), rtol=1e-12, atol=1e-14):
                    raise AssertionError(f"{name}: backend results disagree")
                rows.append((name, n, t_np, t_nb, t_np / t_nb))
            else:
                rows.append((name, n, t_np, float("nan"), float("nan")))

    print(f"{'kernel':<16}{'n':>6}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}")
    for name, n, t_np, t_nb, speedup in rows:
        print(
            f"{name:<16}{n:>6}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{speedup:>9.2f}"
        )


if __name__ == "__main__":
    main()
