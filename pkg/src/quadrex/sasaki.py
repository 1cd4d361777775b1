"""Toric Sasaki data: good polyhedral cones in R³ with four facets.

A Reeb vector b in the interior of the dual cone cuts the moment cone C in
a quadrilateral.  Coordinates on the slice {⟨b, x⟩ = 1} come from a basis
(b, e1, e2): a point x goes to (⟨e1, x⟩, ⟨e2, x⟩) and a normal
û = c0 b + c1 e1 + c2 e2 to its quotient label (c1, c2), with facet
inequality c0 + c1 μ1 + c2 μ2 ≥ 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import GridTooCoarse, NotFourFacets, NotGood, ParseError, ReebOutsideDual
from .exact import fmt, frac, solve
from .moments import extremal_affine
from .polytope import LabeledQuadrilateral
from .solver import ExtremalPolynomials, StabilityVerdict, h_grid
from .solver import solve as solve_quad
from .verify import _interior_mask, fd_abreu_3d

Vec3 = tuple


def _cross3(u, v) -> Vec3:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot3(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _det3(a, b, c):
    return _dot3(a, _cross3(b, c))


def _integral(v) -> bool:
    return all(x.denominator == 1 for x in v)


@dataclass(frozen=True)
class GoodCone3:
    """C = {x : ⟨û_i, x⟩ ≥ 0}, stored with its facets in cyclic order.

    ``rays[k]`` spans the edge between facets k and k+1.  Goodness is
    checked on each edge when the normals are integral; rational normals
    are accepted only with ``check_good=False``.
    """

    normals: tuple
    rays: tuple

    @classmethod
    def from_normals(cls, normals: Sequence, check_good: bool = True) -> "GoodCone3":
        norms = [tuple(frac(c) for c in u) for u in normals]
        if len(norms) != 4 or any(len(u) != 3 for u in norms):
            raise NotFourFacets(f"need four normals in R^3, got {len(norms)}")
        edges = {}
        for i, j in combinations(range(4), 2):
            r = _cross3(norms[i], norms[j])
            if r == (0, 0, 0):
                raise NotFourFacets(f"normals {i} and {j} are parallel")
            others = [_dot3(norms[k], r) for k in range(4) if k not in (i, j)]
            if all(v > 0 for v in others):
                edges[(i, j)] = r
            elif all(v < 0 for v in others):
                edges[(i, j)] = tuple(-c for c in r)
        degree = [sum(k in e for e in edges) for k in range(4)]
        if len(edges) != 4 or degree != [2, 2, 2, 2]:
            raise NotFourFacets("normals do not bound a strictly convex cone with four facets")
        order = [0]
        while len(order) < 4:
            last = order[-1]
            nxt = next(k for k in range(4) if k not in order and tuple(sorted((last, k))) in edges)
            order.append(nxt)
        cyc_norms = tuple(norms[k] for k in order)
        rays = tuple(edges[tuple(sorted((order[k], order[(k + 1) % 4])))] for k in range(4))
        cone = cls(cyc_norms, rays)
        if check_good:
            cone.check_good()
        return cone

    def edge_pairs(self):
        return [(k, (k + 1) % 4) for k in range(4)]

    def check_good(self) -> None:
        for i, j in self.edge_pairs():
            u, v = self.normals[i], self.normals[j]
            if not (_integral(u) and _integral(v)):
                raise NotGood("goodness is a lattice condition; normals must be integral")
            if math.gcd(*(int(c) for c in u)) != 1 or math.gcd(*(int(c) for c in v)) != 1:
                raise NotGood("normals must be primitive lattice vectors")
            minors = [int(c) for c in _cross3(u, v)]
            if math.gcd(*minors) != 1:
                raise NotGood(f"edge between facets {i} and {j}: 2x2 minors have gcd {math.gcd(*minors)}")

    @property
    def good(self) -> bool:
        try:
            self.check_good()
        except NotGood:
            return False
        return True


@dataclass(frozen=True)
class ReebVector:
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(frac(c) for c in self.b))
        if len(self.b) != 3:
            raise ParseError("Reeb vector needs three entries")

    def check(self, cone: GoodCone3) -> None:
        for r in cone.rays:
            if _dot3(self.b, r) <= 0:
                raise ReebOutsideDual(f"<b, ray> = {_dot3(self.b, r)} is not positive")


def load_cone(data) -> tuple[GoodCone3, ReebVector]:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        normals, reeb = data["normals"], data["reeb"]
    except (KeyError, TypeError) as exc:
        raise ParseError("cone JSON needs 'normals' and 'reeb'") from exc
    check = bool(data.get("check_good", True))
    return GoodCone3.from_normals(normals, check), ReebVector(reeb)


def default_basis(b: Sequence) -> tuple:
    """(e1, e2) completing b to a basis: the pair of standard vectors with |det| closest to 1.

    With an integral primitive b the determinant is ±1 when some entry of b
    is ±1, which keeps the chart unimodular.
    """
    b = tuple(frac(c) for c in b)
    std = [tuple(Fraction(int(i == k)) for i in range(3)) for k in range(3)]
    best = None
    for i, j in combinations(range(3), 2):
        d = _det3(b, std[i], std[j])
        if d == 0:
            continue
        key = (abs(abs(d) - 1), -i, -j)
        if best is None or key < best[0]:
            best = (key, std[i], std[j], d)
    _, e1, e2, d = best
    if d < 0:
        e1, e2 = e2, e1
    return e1, e2


@dataclass(frozen=True)
class Transversal:
    quad: LabeledQuadrilateral
    basis: tuple  # (b, e1, e2)
    offsets: tuple  # c0 of each facet, in the order of quad.normals

    def lift(self, mu) -> Vec3:
        """The point of the slice ⟨b, x⟩ = 1 with chart coordinates mu."""
        rows = self.basis
        return tuple(solve([list(r) for r in rows], [Fraction(1), frac(mu[0]), frac(mu[1])]))


def transversal(cone: GoodCone3, reeb: ReebVector, basis=None) -> Transversal:
    reeb.check(cone)
    b = reeb.b
    e1, e2 = basis if basis is not None else default_basis(b)
    e1 = tuple(frac(c) for c in e1)
    e2 = tuple(frac(c) for c in e2)
    if _det3(b, e1, e2) == 0:
        raise ValueError("chart vectors do not complete b to a basis")
    cols = [[b[k], e1[k], e2[k]] for k in range(3)]
    verts = []
    for r in cone.rays:
        s = _dot3(b, r)
        verts.append((_dot3(e1, r) / s, _dot3(e2, r) / s))
    # ray k lies on facets k and k+1, so the edge ray(k-1) -> ray(k) is facet k
    verts = [verts[(k - 1) % 4] for k in range(4)]
    labels, offsets = [], []
    for u in cone.normals:
        c0, c1, c2 = solve(cols, list(u))
        labels.append((c1, c2))
        offsets.append(c0)
    quad = LabeledQuadrilateral(tuple(verts), tuple(labels))
    return Transversal(quad, (b, e1, e2), tuple(offsets))


def transversal_polytope(cone: GoodCone3, reeb: ReebVector, basis=None) -> LabeledQuadrilateral:
    return transversal(cone, reeb, basis).quad


@dataclass(frozen=True)
class CscSasakiCheck:
    verdict: StabilityVerdict
    zeta: tuple
    zeta_constant: bool
    degree_bound: bool | None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.to_json(),
            "zeta": [fmt(c) for c in self.zeta],
            "zeta_constant": self.zeta_constant,
            "degree_bound": self.degree_bound,
        }


def _degree_at_most_3(poly: ExtremalPolynomials) -> bool:
    if poly.kind == "Product":
        return len(poly.A) <= 4 or poly.A[0] == 0
    return poly.A[0] == 0 and poly.B[0] == 0


def csc_sasaki_check(cone: GoodCone3, reeb: ReebVector, basis=None) -> CscSasakiCheck:
    quad = transversal_polytope(cone, reeb, basis)
    zeta = extremal_affine(quad).coeffs
    verdict = solve_quad(quad)
    constant = zeta[1] == 0 and zeta[2] == 0
    bound = None
    if constant and verdict.status == "Stable":
        bound = _degree_at_most_3(verdict.polynomials)
    return CscSasakiCheck(verdict, tuple(zeta), constant, bound)


# -------------------------------------------------------------- cone lift

def h_original(poly: ExtremalPolynomials, m1, m2):
    """H_{A,B} in the coordinates of the quadrilateral the solver was given.

    The witness φ(μ) = Mμ + t maps those coordinates to the chart; normals
    push by M^{-T}, so H_orig = M^{-1} H_chart(φ(μ)) M^{-T}.
    """
    m = np.array([[float(c) for c in row] for row in poly.witness.matrix])
    t = np.array([float(c) for c in poly.witness.shift])
    m1 = np.asarray(m1, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    c1 = m[0, 0] * m1 + m[0, 1] * m2 + t[0]
    c2 = m[1, 0] * m1 + m[1, 1] * m2 + t[1]
    with np.errstate(all="ignore"):
        h11, h12, h22 = h_grid(poly, c1, c2)
    H = np.array([[h11, h12], [h12, h22]])
    mi = np.linalg.inv(m)
    return np.einsum("ia,ab...,jb->ij...", mi, H, mi)


def lifted_h(poly: ExtremalPolynomials, x0, x1, x2):
    """Ĥ = x0 (H^b ⊕ 0)(x'/x0) + x xᵀ / x0 in the basis (b, e1, e2)."""
    x0 = np.asarray(x0, dtype=float)
    hb = h_original(poly, x1 / x0, x2 / x0)
    xs = np.array([x0, x1, x2])
    out = np.einsum("i...,j...->ij...", xs, xs) / x0
    out[1:, 1:] += x0 * hb
    return out


@dataclass
class ConeLiftResult:
    n: int
    residual: float  # max |S_3d − (S_2d + 4)| at x0 = 1 scale
    offset: float  # mean of x0 S_3d − S_2d
    offset_spread: float  # max |x0 S_3d − S_2d − offset|
    ratio: float  # spread at n over spread at 2n
    b_row_defect: float  # max |Ĥ(b, ·) − x|
    homogeneity_defect: float

    def to_json(self) -> dict:
        return {k: (float(f"{v:.17g}") if isinstance(v, float) else v) for k, v in self.__dict__.items()}


EXPECTED_OFFSET = 4


def _cone_range(vals):
    lo, hi = min(vals), max(vals)
    return min(0.75 * lo, 1.25 * lo), max(0.75 * hi, 1.25 * hi)


def _lift_defect(tr: Transversal, poly: ExtremalPolynomials, n: int, eps: float):
    """x0·S_3d − S_2d on the (n+1)³ grid (NaN off the interior), plus b-row and homogeneity defects."""
    quad = tr.quad
    xs = [float(v[0]) for v in quad.vertices]
    ys = [float(v[1]) for v in quad.vertices]
    g0 = np.linspace(0.75, 1.25, n + 1)
    g1 = np.linspace(*_cone_range(xs), n + 1)
    g2 = np.linspace(*_cone_range(ys), n + 1)
    X0, X1, X2 = np.meshgrid(g0, g1, g2, indexing="ij")
    mu1, mu2 = X1 / X0, X2 / X0
    H = lifted_h(poly, X0, X1, X2)
    diff = np.full(X0.shape, np.nan)
    core = (slice(1, -1),) * 3
    s3 = fd_abreu_3d(H, (g0[1] - g0[0], g1[1] - g1[0], g2[1] - g2[0]))
    z = [float(c) for c in extremal_affine(quad).coeffs]
    s2 = z[0] + z[1] * mu1[core] + z[2] * mu2[core]
    mask = _interior_mask(quad, mu1[core], mu2[core], eps) & np.isfinite(s3)
    diff[core] = np.where(mask, X0[core] * s3 - s2, np.nan)
    if not mask.any():
        raise GridTooCoarse("no grid node lies over the interior of the slice")
    xs3 = np.array([X0, X1, X2])[(slice(None),) + core]
    brow = np.max(np.abs(H[0][(slice(None),) + core] - xs3)[:, mask])
    H2 = lifted_h(poly, 2 * X0[core], 2 * X1[core], 2 * X2[core])
    homog = np.max(np.abs(H2 - 2 * H[(slice(None), slice(None)) + core])[:, :, mask])
    return diff, float(brow), float(homog)


def cone_lift_check(tr: Transversal, poly: ExtremalPolynomials, n: int = 16,
                    eps=Fraction(1, 8)) -> ConeLiftResult:
    """Scalar curvature of the lifted cone metric against the transversal one.

    The grid covers x0 ∈ [3/4, 5/4] times the cone over the slice's bounding
    box; nodes whose slice point lies within relative distance eps of a
    facet are dropped.  S_2d is the exact extremal affine function and
    x0·S_3d − S_2d should be constant.  The check runs at n and 2n and
    compares on the shared nodes; ``residual`` is measured against the
    offset 4 at resolution 2n, ``offset_spread`` against the observed mean.
    """
    if poly is None:
        raise ValueError("cone lift needs a Stable transversal instance")
    if n < 8:
        raise GridTooCoarse(f"grid resolution must be at least 8, got {n}")
    coarse, _, _ = _lift_defect(tr, poly, n, float(eps))
    fine, brow, homog = _lift_defect(tr, poly, 2 * n, float(eps))
    shared = np.isfinite(coarse) & np.isfinite(fine[::2, ::2, ::2])
    offset = float(np.mean(fine[::2, ::2, ::2][shared]))
    c = coarse[shared]
    f = fine[::2, ::2, ::2][shared]
    spread_c = float(np.max(np.abs(c - offset)))
    spread_f = float(np.max(np.abs(f - offset)))
    return ConeLiftResult(
        n, float(np.max(np.abs(f - EXPECTED_OFFSET))), offset, spread_f,
        spread_c / spread_f if spread_f > 1e-12 else math.inf, brow, homog,
    )
