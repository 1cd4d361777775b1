"""Pure-Python versions of the hot loops (used when the extension is absent)."""

from __future__ import annotations

import numpy as np

# Gauss-Kronrod 7/15 on [-1, 1]
XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])

NODES = np.concatenate([-XGK[:-1], XGK[::-1]])
WK = np.concatenate([WGK[:-1], WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
WG15 = np.zeros(15)
WG15[[1, 3, 5]] = WG[:3]
WG15[[9, 11, 13]] = WG[2::-1]
WG15[7] = WG[3]

OK, FAILED, NONPOSITIVE = 0, 1, 2
MAX_EVALS = 4000  # rule applications per segment; past it the tolerance is reported as missed


def _rule(coeffs, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    t = c + h * NODES
    p = np.polyval(coeffs, t)
    if np.any(p <= 0.0):
        return None, None, None
    f = np.vstack([1.0 / p, t / p, t * t / p])
    k = h * (f @ WK)
    g = h * (f @ WG15)
    # rounding bound from evaluating P with cancellation at the nodes
    cond = np.polyval(np.abs(coeffs), np.abs(t)) / p
    noise = 4.0 * coeffs.size * np.finfo(float).eps * abs(h) * float(WK @ ((1.0 + t * t) * cond / p))
    return k, float(np.max(np.abs(k - g))), noise


def segment_integrals(coeffs, lo, hi, tol=1e-10, depth=40):
    """∫_lo^hi t^k / P(t) dt for k = 0, 1, 2 on each segment.

    Returns an (n, 3) array and a status code (0 ok, 1 tolerance not met,
    2 P not positive at a node).
    """
    coeffs = np.asarray(coeffs, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    out = np.zeros((lo.size, 3))
    status = OK
    for i in range(lo.size):
        a, b = lo[i], hi[i]
        if a == b:
            continue
        total = np.zeros(3)
        stack = [(a, b, 0)]
        span = abs(b - a)
        evals = 0
        while stack:
            x0, x1, d = stack.pop()
            k, err, noise = _rule(coeffs, x0, x1)
            evals += 1
            if k is None:
                return out, NONPOSITIVE
            kmax = float(np.max(np.abs(k)))
            if err <= max(tol * abs(x1 - x0) / span, 1e-15 * kmax, noise):
                total += k
                # accepted on rounding noise alone is fine only while the noise is small
                if err > tol * abs(x1 - x0) / span and noise > 1e-6 * kmax:
                    status = FAILED
            elif d >= depth or evals >= MAX_EVALS:
                total += k
                status = FAILED
            else:
                m = 0.5 * (x0 + x1)
                stack.append((m, x1, d + 1))
                stack.append((x0, m, d + 1))
        out[i] = total
    return out, status


def abreu_stencil(h11, h12, h22, d1, d2):
    """−(∂₁₁H₁₁ + 2∂₁₂H₁₂ + ∂₂₂H₂₂) by central differences on interior nodes."""
    h11 = np.asarray(h11, dtype=float)
    h12 = np.asarray(h12, dtype=float)
    h22 = np.asarray(h22, dtype=float)
    c = (slice(1, -1), slice(1, -1))
    a11 = (h11[2:, 1:-1] - 2.0 * h11[c] + h11[:-2, 1:-1]) / (d1 * d1)
    a22 = (h22[1:-1, 2:] - 2.0 * h22[c] + h22[1:-1, :-2]) / (d2 * d2)
    a12 = (h12[2:, 2:] - h12[2:, :-2] - h12[:-2, 2:] + h12[:-2, :-2]) / (4.0 * d1 * d2)
    return -(a11 + 2.0 * a12 + a22)
