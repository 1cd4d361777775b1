"""Compiled vs numpy kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--points 4000] [--grid 256]

Prints the best wall time of each kernel per backend and the speedup, and
checks that both backends agree.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from quadrex import kernels
from quadrex.kernels import _pykernels

try:
    from quadrex.kernels import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=4000)
    ap.add_argument("--grid", type=int, default=256)
    args = ap.parse_args(argv)

    # A(t) = (t - 1)(2 - t)(t^2 + 1) positive on (1, 2)
    coeffs = np.polymul(np.polymul([1.0, -1.0], [-1.0, 2.0]), [1.0, 0.0, 1.0])
    pts = np.sort(np.random.default_rng(0).uniform(1.001, 1.999, args.points))
    n = args.grid
    x = np.linspace(0, 1, n + 1)
    X, Y = np.meshgrid(x, x, indexing="ij")
    h11, h12, h22 = 1 + X ** 3 * Y, X * Y ** 2, 2 + Y ** 4 + X
    d = x[1] - x[0]

    impls = [("python", _pykernels)]
    if _ckernels is not None:
        impls.append(("compiled", _ckernels))
    results = {}
    print(f"threads: {kernels.thread_count()}")
    for name, impl in impls:
        tq, q = best_of(lambda: kernels.cumulative_moments(coeffs, 1.5, pts, 1e-10, 40, impl), args.repeat)
        ts, s = best_of(lambda: kernels.abreu_stencil(h11, h12, h22, d, d, impl), args.repeat)
        results[name] = (tq, ts, q[0], s)
        print(f"{name:9s} quadrature {args.points} pts: {tq * 1e3:9.2f} ms   stencil {n}^2: {ts * 1e3:8.2f} ms")
    if len(results) == 2:
        py, c = results["python"], results["compiled"]
        print(f"speedup   quadrature x{py[0] / c[0]:.1f}   stencil x{py[1] / c[1]:.1f}")
        print(f"max |diff| quadrature {np.max(np.abs(py[2] - c[2])):.2e}   stencil {np.max(np.abs(py[3] - c[3])):.2e}")


if __name__ == "__main__":
    main()
