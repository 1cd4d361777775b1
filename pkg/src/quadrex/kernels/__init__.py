"""Hot numerical loops: adaptive quadrature of t^k/P(t) and the FD Abreu stencil.

The compiled extension ``_ckernels`` is used when it is importable; otherwise
the numpy implementation in ``_pykernels`` is used.  Setting
``QUADREX_PURE_PYTHON=1`` forces the fallback.  ``QUADREX_THREADS`` caps the
number of worker threads used for large batches (the compiled loops release
the GIL).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _pykernels

_impl = _pykernels
if os.environ.get("QUADREX_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

OK, FAILED, NONPOSITIVE = 0, 1, 2


def thread_count() -> int:
    try:
        n = int(os.environ.get("QUADREX_THREADS", "0"))
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return max(1, n)


def segment_integrals(coeffs, lo, hi, tol=1e-10, depth=40, impl=None):
    impl = impl or _impl
    lo = np.ascontiguousarray(lo, dtype=float)
    hi = np.ascontiguousarray(hi, dtype=float)
    n = lo.size
    workers = thread_count() if impl is not _pykernels else 1
    if workers == 1 or n < 512:
        return impl.segment_integrals(coeffs, lo, hi, tol, depth)
    chunks = np.array_split(np.arange(n), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda idx: impl.segment_integrals(coeffs, lo[idx], hi[idx], tol, depth), chunks))
    out = np.vstack([p[0] for p in parts])
    return out, max(p[1] for p in parts)


def cumulative_moments(coeffs, base, points, tol=1e-10, depth=40, impl=None):
    """∫_base^x t^k / P(t) dt for k = 0, 1, 2 at every x in ``points``.

    Points are sorted on each side of the base point and integrated gap by
    gap, so each stretch of the interval is only visited once.
    """
    pts = np.asarray(points, dtype=float).ravel()
    out = np.zeros((pts.size, 3))
    status = OK
    for sign in (1, -1):
        mask = (pts - base) * sign > 0
        idx = np.nonzero(mask)[0]
        if idx.size == 0:
            continue
        order = idx[np.argsort(sign * pts[idx])]
        xs = pts[order]
        lo = np.concatenate([[base], xs[:-1]])
        part, st = segment_integrals(coeffs, lo, xs, tol, depth, impl)
        if st == NONPOSITIVE:
            return out, st
        status = max(status, st)
        out[order] = np.cumsum(part, axis=0)
    return out, status


def abreu_stencil(h11, h12, h22, d1, d2, impl=None):
    return (impl or _impl).abreu_stencil(h11, h12, h22, float(d1), float(d2))
