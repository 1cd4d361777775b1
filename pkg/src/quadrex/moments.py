"""Moment integrals, the extremal affine function and the relative Futaki
functional of a labeled quadrilateral, all in exact rational arithmetic.

The boundary measure dν on edge j has constant density κ_j with respect to
the affine parameter t ∈ [0, 1] of that edge; κ_j is always taken positive.
"""

from __future__ import annotations

import itertools

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import NonConvexPL, NonPositiveScaling, QuadratureFailure
from .exact import Vec2, cross, dot, frac, solve, sub, vec
from .polytope import LabeledQuadrilateral

ZERO = Fraction(0)

Affine = tuple  # (c0, c1, c2) meaning c0 + c1*mu1 + c2*mu2


def facet_density(quad: LabeledQuadrilateral, j: int) -> Fraction:
    p, q = quad.edge(j)
    u = quad.normals[j]
    return abs(cross(u, sub(q, p)) / dot(u, u))


def _mu(p) -> tuple:
    return (Fraction(1), p[0], p[1])


def _triangle_integral(a, b, c, f: Callable) -> Fraction:
    """Exact integral of a polynomial of degree <= 2 over a triangle (edge midpoint rule)."""
    area = abs(cross(sub(b, a), sub(c, a))) / 2
    mids = [((a[0] + b[0]) / 2, (a[1] + b[1]) / 2),
            ((b[0] + c[0]) / 2, (b[1] + c[1]) / 2),
            ((c[0] + a[0]) / 2, (c[1] + a[1]) / 2)]
    return area * sum(f(m) for m in mids) / 3


def _polygon_integral(poly: Sequence, f: Callable) -> Fraction:
    total = ZERO
    for k in range(1, len(poly) - 1):
        total += _triangle_integral(poly[0], poly[k], poly[k + 1], f)
    return total


def moment_matrix(quad: LabeledQuadrilateral) -> list[list[Fraction]]:
    v = quad.vertices
    tris = [(v[0], v[1], v[2]), (v[0], v[2], v[3])]
    W = [[ZERO] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            val = sum((_triangle_integral(*t, lambda p: _mu(p)[i] * _mu(p)[j]) for t in tris), ZERO)
            W[i][j] = W[j][i] = val
    return W


def facet_matrix(quad: LabeledQuadrilateral) -> list[list[Fraction]]:
    """A_facet[i][j] = 2 ∫_{F_j} μ_i dν_j for the stored normals."""
    A = [[ZERO] * 4 for _ in range(3)]
    for j in range(4):
        p, q = quad.edge(j)
        kappa = facet_density(quad, j)
        mid = _mu(((p[0] + q[0]) / 2, (p[1] + q[1]) / 2))
        for i in range(3):
            A[i][j] = 2 * kappa * mid[i]
    return A


def _check_r(r) -> tuple:
    r = tuple(frac(x) for x in r)
    if len(r) != 4 or any(x <= 0 for x in r):
        raise NonPositiveScaling(f"scaling vector must have four positive entries, got {r}")
    return r


def boundary_moments(quad: LabeledQuadrilateral, r=None) -> list[Fraction]:
    A = facet_matrix(quad)
    r = (Fraction(1),) * 4 if r is None else _check_r(r)
    return [sum((a * x for a, x in zip(row, r)), ZERO) for row in A]


@dataclass(frozen=True)
class MomentData:
    W: list
    Z: list
    A_facet: list


def moment_data(quad: LabeledQuadrilateral) -> MomentData:
    A = facet_matrix(quad)
    return MomentData(moment_matrix(quad), [sum(row, ZERO) for row in A], A)


@dataclass(frozen=True)
class ExtremalAffine:
    zeta0: Fraction
    zeta1: Fraction
    zeta2: Fraction
    equipoised: bool

    @property
    def coeffs(self) -> tuple:
        return (self.zeta0, self.zeta1, self.zeta2)

    def __call__(self, p):
        return self.zeta0 + self.zeta1 * p[0] + self.zeta2 * p[1]


def alternating_sum(quad: LabeledQuadrilateral, f: Callable) -> Fraction:
    return sum(((-1) ** (i + 1) * f(s) for i, s in enumerate(quad.vertices)), ZERO)


def extremal_affine(quad: LabeledQuadrilateral, r=None) -> ExtremalAffine:
    if r is not None:
        quad = quad.scaled(_check_r(r))
    W = moment_matrix(quad)
    Z = boundary_moments(quad)
    z = solve(W, Z)
    eq = alternating_sum(quad, lambda s: z[0] + z[1] * s[0] + z[2] * s[1]) == 0
    return ExtremalAffine(z[0], z[1], z[2], eq)


# ------------------------------------------------------------------ Futaki

@dataclass(frozen=True)
class CreaseFunction:
    """f = max(f1, f2) with f1 - f2 = ⟨x - p, u_f⟩ vanishing on the segment [p, q].

    ``base`` is the affine piece f2; f1 = f2 + ⟨x - p, u_f⟩.
    """

    p: Vec2
    q: Vec2
    u_f: Vec2
    base: Affine = (ZERO, ZERO, ZERO)

    def __post_init__(self):
        object.__setattr__(self, "p", vec(self.p))
        object.__setattr__(self, "q", vec(self.q))
        object.__setattr__(self, "u_f", vec(self.u_f))
        object.__setattr__(self, "base", tuple(frac(c) for c in self.base))
        if self.p == self.q or self.u_f == (ZERO, ZERO):
            raise NonConvexPL("degenerate crease")
        if dot(sub(self.q, self.p), self.u_f) != 0:
            raise NonConvexPL("u_f must be normal to the crease")

    @property
    def pieces(self) -> list:
        c0, c1, c2 = self.base
        u = self.u_f
        return [self.base, (c0 - dot(self.p, u), c1 + u[0], c2 + u[1])]

    @classmethod
    def through(cls, p, q, scale=1, base=(0, 0, 0)) -> "CreaseFunction":
        """Crease along [p, q] with u_f the left-turn normal of q - p times ``scale``."""
        p, q = vec(p), vec(q)
        e = sub(q, p)
        s = frac(scale)
        return cls(p, q, (-e[1] * s, e[0] * s), base)


@dataclass(frozen=True)
class PLFunction:
    """Piecewise linear function.

    Without ``cells`` it is the maximum of ``pieces``.  With ``cells`` (one
    convex polygon per piece) it is the function equal to ``pieces[k]`` on
    ``cells[k]``; that representation is checked for convexity.
    """

    pieces: tuple
    cells: tuple | None = None


def _eval(piece: Affine, p) -> Fraction:
    return piece[0] + piece[1] * p[0] + piece[2] * p[1]


def _clip(poly: list, piece: Affine) -> list:
    """Sutherland-Hodgman clip of a convex polygon against piece(x) >= 0."""
    out = []
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        fa, fb = _eval(piece, a), _eval(piece, b)
        if fa >= 0:
            out.append(a)
        if (fa > 0 > fb) or (fa < 0 < fb):
            t = fa / (fa - fb)
            out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    dedup = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def _regions(pieces: Sequence) -> list[list]:
    """For each piece k, the half-planes piece_k - piece_l >= 0."""
    out = []
    for k, fk in enumerate(pieces):
        cons = []
        for l, fl in enumerate(pieces):
            if l != k:
                cons.append(tuple(a - b for a, b in zip(fk, fl)))
        out.append(cons)
    return out


def _check_cells(f: PLFunction):
    for k, cell in enumerate(f.cells):
        for p in cell:
            vk = _eval(f.pieces[k], p)
            if any(_eval(g, p) > vk for g in f.pieces):
                raise NonConvexPL(f"piece {k} is not the maximum on its cell")


def _as_pieces(f) -> list:
    if isinstance(f, CreaseFunction):
        return f.pieces
    if isinstance(f, PLFunction):
        if f.cells is not None:
            _check_cells(f)
        return [tuple(frac(c) for c in piece) for piece in f.pieces]
    return [tuple(frac(c) for c in piece) for piece in f]


def futaki(quad: LabeledQuadrilateral, zeta: ExtremalAffine, f) -> Fraction:
    """L(f) = ∫_{∂Δ} f dν − ½ ∫_Δ f ζ dv for a convex PL function f."""
    pieces = _as_pieces(f)
    # pieces that coincide would claim the same cell twice
    uniq = []
    for piece in pieces:
        if piece not in uniq:
            uniq.append(piece)
    regions = _regions(uniq)
    interior = ZERO
    for piece, cons in zip(uniq, regions):
        cell = list(quad.vertices)
        for c in cons:
            cell = _clip(cell, c)
            if len(cell) < 3:
                break
        if len(cell) >= 3:
            interior += _polygon_integral(cell, lambda p, g=piece: _eval(g, p) * zeta(p))
    boundary = ZERO
    for j in range(4):
        p, q = quad.edge(j)
        kappa = facet_density(quad, j)
        # f is affine between consecutive crossings of two pieces; pieces that
        # agree along the whole edge must not be counted twice
        cuts = {Fraction(0), Fraction(1)}
        for fk, fl in itertools.combinations(uniq, 2):
            d = tuple(a - b for a, b in zip(fk, fl))
            dp, dq = _eval(d, p), _eval(d, q)
            if dp != dq and 0 < dp / (dp - dq) < 1:
                cuts.add(dp / (dp - dq))
        cuts = sorted(cuts)
        for lo, hi in zip(cuts, cuts[1:]):
            tm = (lo + hi) / 2
            mid = (p[0] + tm * (q[0] - p[0]), p[1] + tm * (q[1] - p[1]))
            boundary += kappa * (hi - lo) * max(_eval(g, mid) for g in uniq)
    return boundary - interior / 2


def crease_segment(quad: LabeledQuadrilateral, crease: CreaseFunction) -> tuple[Vec2, Vec2]:
    """Intersection of the crease line with the quadrilateral."""
    line = (-dot(crease.p, crease.u_f), crease.u_f[0], crease.u_f[1])
    hits = []
    for j in range(4):
        p, q = quad.edge(j)
        fp, fq = _eval(line, p), _eval(line, q)
        if fp == 0:
            hits.append(p)
        elif fp * fq < 0:
            t = fp / (fp - fq)
            hits.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    hits = sorted(set(hits))
    if len(hits) != 2:
        raise NonConvexPL("crease does not cut the quadrilateral")
    return hits[0], hits[1]


def crease_value(quad: LabeledQuadrilateral, H: Callable, crease: CreaseFunction,
                 tol: float = 1e-11) -> float:
    """∫_{S_f} H(u_f, u_f) dν_f over the part of the crease inside the quad.

    ``H`` maps a point (μ1, μ2) of floats to a 2x2 array.  The measure has
    u_f ∧ dν_f = dv, i.e. Euclidean length divided by |u_f|.
    """
    p, q = crease_segment(quad, crease)
    u = np.array([float(x) for x in crease.u_f])
    p = np.array([float(x) for x in p])
    e = np.array([float(x) for x in q]) - p
    kappa = abs(u[0] * e[1] - u[1] * e[0]) / float(u @ u)

    def integrand(t):
        h = np.asarray(H(p + t * e), dtype=float)
        return float(u @ h @ u)

    val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=tol, limit=200)
    if not np.isfinite(val) or err > max(1e-8, 1e-6 * abs(val)):
        raise QuadratureFailure(f"crease quadrature error estimate {err:.3g}")
    return kappa * val
