"""Floating-point oracle for the exact pipeline.

Nothing here feeds back into a stability verdict.  The checks are: a
finite-difference Abreu operator on a uniform grid of the chart, the
boundary behaviour of H along each facet, the inverse-Hessian identity for
the quadrature potentials, crease values against exact Futaki values, and
the relative K-energy E(G) = 2 L(G) − ∫ log det Hess G.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .errors import GridTooCoarse, NonConvexSample
from .exact import dot, frac, sub
from .moments import CreaseFunction, crease_value, extremal_affine, facet_density, futaki
from .polytope import LabeledQuadrilateral
from .potential import ABPotential
from .solver import ExtremalPolynomials, h_grid, h_matrix, scalar_curvature_closed_form, to_params

DEFAULT_N = 64
DEFAULT_EPS = Fraction(1, 32)


@dataclass(frozen=True)
class GridSpec:
    n: int = DEFAULT_N
    eps: Fraction = DEFAULT_EPS

    def __post_init__(self):
        object.__setattr__(self, "eps", frac(self.eps))
        if self.n < 8:
            raise GridTooCoarse(f"grid resolution must be at least 8, got {self.n}")
        if not 0 < self.eps < Fraction(1, 4):
            raise GridTooCoarse("boundary offset must lie in (0, 1/4)")


# ------------------------------------------------------------------ FD Abreu

def fd_abreu(h11, h12, h22, d1: float, d2: float, impl=None) -> np.ndarray:
    """S = −(D11 H11 + 2 D12 H12 + D22 H22) on the interior nodes of the grid."""
    h11 = np.asarray(h11, dtype=float)
    if min(h11.shape) < 8:
        raise GridTooCoarse(f"need at least 8 nodes per axis, got {h11.shape}")
    return kernels.abreu_stencil(h11, h12, h22, d1, d2, impl)


def _interior_mask(quad: LabeledQuadrilateral, m1: np.ndarray, m2: np.ndarray, eps: float) -> np.ndarray:
    """Points whose normalized distance to every facet is at least eps."""
    mask = np.ones(m1.shape, dtype=bool)
    verts = np.array([[float(a), float(b)] for a, b in quad.vertices])
    for u, lam in zip(quad.normals, quad.support):
        u = np.array([float(u[0]), float(u[1])])
        vals = verts @ u - float(lam)
        width = vals.max()
        mask &= (m1 * u[0] + m2 * u[1] - float(lam)) >= eps * width
    return mask


def _bbox(quad: LabeledQuadrilateral):
    xs = [float(v[0]) for v in quad.vertices]
    ys = [float(v[1]) for v in quad.vertices]
    return min(xs), max(xs), min(ys), max(ys)


@dataclass
class AbreuGrid:
    mu1: np.ndarray
    mu2: np.ndarray
    H11: np.ndarray
    H12: np.ndarray
    H22: np.ndarray
    S_fd: np.ndarray
    zeta: np.ndarray
    mask: np.ndarray
    h: tuple

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.S_fd - self.zeta)[self.mask]))

    def rows(self):
        idx = np.nonzero(self.mask)
        for i, j in zip(*idx):
            yield (self.mu1[i, j], self.mu2[i, j], self.H11[i, j], self.H12[i, j],
                   self.H22[i, j], self.S_fd[i, j], self.zeta[i, j])


def abreu_grid(poly: ExtremalPolynomials, n: int = DEFAULT_N, eps=DEFAULT_EPS, impl=None) -> AbreuGrid:
    """FD scalar curvature of H_{A,B} on an (n+1)×(n+1) grid over the chart's bounding box.

    Values are compared with ζ only at nodes at normalized distance ≥ eps
    from every facet; with n doubled the old nodes are a subset of the new.
    """
    spec = GridSpec(n, eps)
    quad = poly.chart
    x0, x1, y0, y1 = _bbox(quad)
    g1 = np.linspace(x0, x1, n + 1)
    g2 = np.linspace(y0, y1, n + 1)
    m1, m2 = np.meshgrid(g1, g2, indexing="ij")
    inside = _interior_mask(quad, m1, m2, 0.0)
    with np.errstate(all="ignore"):
        h11, h12, h22 = h_grid(poly, np.where(inside, m1, np.nan), np.where(inside, m2, np.nan))
    d1, d2 = g1[1] - g1[0], g2[1] - g2[0]
    s = np.full(m1.shape, np.nan)
    s[1:-1, 1:-1] = fd_abreu(h11, h12, h22, d1, d2, impl)
    z = [float(c) for c in scalar_curvature_closed_form(poly)]
    zeta = z[0] + z[1] * m1 + z[2] * m2
    mask = _interior_mask(quad, m1, m2, float(spec.eps)) & np.isfinite(s)
    if not mask.any():
        raise GridTooCoarse("no grid node lies in the interior region")
    return AbreuGrid(m1, m2, h11, h12, h22, s, zeta, mask, (d1, d2))


def richardson(poly: ExtremalPolynomials, n: int = DEFAULT_N, eps=DEFAULT_EPS) -> dict:
    """Max |S_fd − ζ| on the coarse nodes for grids n and 2n, and their ratio."""
    coarse = abreu_grid(poly, n, eps)
    fine = abreu_grid(poly, 2 * n, eps)
    sub_mask = coarse.mask & fine.mask[::2, ::2]
    e1 = float(np.max(np.abs(coarse.S_fd - coarse.zeta)[sub_mask]))
    err_f = np.abs(fine.S_fd - fine.zeta)[::2, ::2]
    e2 = float(np.max(err_f[sub_mask]))
    return {"n": n, "err_n": e1, "err_2n": e2, "ratio": e1 / e2 if e2 > 0 else math.inf}


# ----------------------------------------------------------------- boundary

def facet_names(poly: ExtremalPolynomials) -> list:
    return ["a1", "a2", "b1", "b2"]


def _facet_point(poly: ExtremalPolynomials, name: str, s):
    """Parameter coordinates of the point at fraction s along facet ``name``."""
    a1, a2 = poly.alphas
    b1, b2 = poly.betas
    if name in ("a1", "a2"):
        return (a1 if name == "a1" else a2), b1 + s * (b2 - b1)
    return a1 + s * (a2 - a1), (b1 if name == "b1" else b2)


def _sigma(poly, x, y):
    if poly.kind == "Orthotoric":
        return (x + y, x * y)
    if poly.kind == "Calabi":
        return (x, x * y)
    return (x, y)


def _facet_normal(poly: ExtremalPolynomials, name: str):
    """Label of the chart edge carrying the facet."""
    p = _sigma(poly, *_facet_point(poly, name, Fraction(0)))
    q = _sigma(poly, *_facet_point(poly, name, Fraction(1)))
    for k in range(4):
        if set(poly.chart.edge(k)) == {p, q}:
            return poly.chart.normals[k], k
    raise AssertionError(f"facet {name} not found on the chart")  # pragma: no cover


def _h_float(poly, mu):
    x, y = to_params(poly, mu)
    return np.array(h_matrix(poly, float(x), float(y)), dtype=float)


def boundary_residual(poly: ExtremalPolynomials, samples: int = 10,
                      steps: Sequence[float] = (1e-2, 5e-3, 2.5e-3, 1.25e-3)) -> dict:
    """Per facet: the exact kernel H(u_i, ·) and the one-sided derivative defect.

    The kernel is evaluated in rational arithmetic at ``samples`` facet
    points and must vanish identically.  The defect is
    |(H(u,u)(p + h v) − H(u,u)(p)) / h − 2⟨u, v⟩| with v = u/|u| inward, and
    should shrink linearly in h.
    """
    out = {}
    for name in facet_names(poly):
        u, _ = _facet_normal(poly, name)
        kernel_max = Fraction(0)
        defects = np.zeros(len(steps))
        uf = np.array([float(u[0]), float(u[1])])
        v = uf / np.linalg.norm(uf)
        for k in range(samples):
            s = Fraction(2 * k + 1, 2 * samples)
            x, y = _facet_point(poly, name, s)
            hm = h_matrix(poly, x, y)
            hu = (hm[0][0] * u[0] + hm[0][1] * u[1], hm[1][0] * u[0] + hm[1][1] * u[1])
            kernel_max = max(kernel_max, abs(hu[0]), abs(hu[1]))
            p = np.array([float(c) for c in _sigma(poly, x, y)])
            for i, h in enumerate(steps):
                hq = _h_float(poly, tuple(p + h * v))
                val = uf @ hq @ uf
                defects[i] = max(defects[i], abs(val / h - 2 * uf @ v))
        rates = [float(defects[i] / defects[i + 1]) if defects[i + 1] > 0 else math.inf
                 for i in range(len(steps) - 1)]
        out[name] = {"kernel": kernel_max, "defects": defects.tolist(), "rates": rates}
    return out


# ------------------------------------------------------------- Hessian identity

def fd_hessian(f, p, d: float) -> np.ndarray:
    """Fourth-order central-difference Hessian of a scalar function at p."""
    p = np.asarray(p, dtype=float)
    e = np.eye(2) * d
    c1 = np.array([-1, 16, -30, 16, -1]) / 12.0
    offs = np.array([-2, -1, 0, 1, 2])
    hess = np.zeros((2, 2))
    for i in range(2):
        pts = [p + k * e[i] for k in offs]
        hess[i, i] = sum(c * f(q) for c, q in zip(c1, pts)) / d ** 2
    w = np.array([1, -8, 0, 8, -1]) / 12.0
    acc = 0.0
    for a, wa in zip(offs, w):
        if wa == 0:
            continue
        for b, wb in zip(offs, w):
            if wb == 0:
                continue
            acc += wa * wb * f(p + a * e[0] + b * e[1])
    hess[0, 1] = hess[1, 0] = acc / d ** 2
    return hess


def hessian_identity(poly: ExtremalPolynomials, points, d: float = 1e-2, tol: float = 1e-13) -> float:
    """max ‖FD-Hess(G)·H − I‖_∞ over chart points."""
    pot = ABPotential.from_polynomials(poly, tol=tol)
    worst = 0.0
    for mu in points:
        mu = np.asarray(mu, dtype=float)
        scale = _local_scale(poly, mu)
        step = d * scale
        hess = fd_hessian(lambda q: float(pot.at_mu(q[0], q[1])), mu, step)
        hm = _h_float(poly, tuple(mu))
        worst = max(worst, float(np.max(np.abs(hess @ hm - np.eye(2)))))
    return worst


def _local_scale(poly: ExtremalPolynomials, mu) -> float:
    quad = poly.chart
    dist = []
    for u, lam in zip(quad.normals, quad.support):
        uf = np.array([float(u[0]), float(u[1])])
        dist.append((mu @ uf - float(lam)) / np.linalg.norm(uf))
    return max(min(dist), 1e-6)


def interior_points(poly: ExtremalPolynomials, count: int, seed: int = 0, margin: float = 0.1) -> list:
    """Random chart points from the inner part of the parameter rectangle."""
    rng = np.random.default_rng(seed)
    a1, a2 = (float(c) for c in poly.alphas)
    b1, b2 = (float(c) for c in poly.betas)
    out = []
    for _ in range(count):
        s, t = rng.uniform(margin, 1 - margin, size=2)
        out.append(_sigma(poly, a1 + s * (a2 - a1), b1 + t * (b2 - b1)))
    return out


def min_eigenvalue(grid: AbreuGrid) -> float:
    h11, h12, h22 = (g[grid.mask] for g in (grid.H11, grid.H12, grid.H22))
    tr = h11 + h22
    disc = np.sqrt((h11 - h22) ** 2 + 4 * h12 ** 2)
    return float(np.min((tr - disc) / 2))


# ------------------------------------------------------------------ creases

def crease_along(poly: ExtremalPolynomials, axis: str, c) -> CreaseFunction:
    """Crease over the coordinate line x = c (axis 'x') or y = c (axis 'y')."""
    c = frac(c)
    a1, a2 = poly.alphas
    b1, b2 = poly.betas
    if axis == "x":
        p, q = _sigma(poly, c, b1), _sigma(poly, c, b2)
    else:
        p, q = _sigma(poly, a1, c), _sigma(poly, a2, c)
    return CreaseFunction.through(p, q)


def crease_residuals(poly: ExtremalPolynomials, per_axis: int = 10) -> list:
    """Exact Futaki value of each crease against ½ ∫ H(u_f, u_f) dν_f."""
    quad = poly.chart
    zeta = extremal_affine(quad)
    out = []
    for axis, (lo, hi) in (("x", poly.alphas), ("y", poly.betas)):
        for k in range(per_axis):
            c = lo + (hi - lo) * Fraction(k + 1, per_axis + 1)
            crease = crease_along(poly, axis, c)
            exact = futaki(quad, zeta, crease)
            num = crease_value(quad, lambda m: _h_float(poly, (m[0], m[1])), crease)
            rel = abs(float(exact) - 0.5 * num) / max(1.0, abs(float(exact)))
            out.append({"axis": axis, "at": c, "futaki": exact, "crease": num, "residual": rel})
    return out


# ---------------------------------------------------------------- K-energy

@dataclass(frozen=True)
class PotentialMix:
    """Σ w_k G_k + affine, all G_k sharing one chart (kind and intervals)."""

    terms: tuple  # ((weight, ABPotential), ...)
    affine: tuple = (0.0, 0.0, 0.0)

    @property
    def base(self) -> ABPotential:
        return self.terms[0][1]

    def value(self, x, y):
        s1, s2 = self.base.sigma(np.asarray(x, float), np.asarray(y, float))
        acc = self.affine[0] + self.affine[1] * s1 + self.affine[2] * s2
        for w, g in self.terms:
            acc = acc + w * g.value(x, y)
        return acc

    def facet_value(self, name, s):
        x, y = _facet_point(self.base, name, s)
        s1, s2 = self.base.sigma(np.asarray(x, float), np.asarray(y, float))
        acc = self.affine[0] + self.affine[1] * s1 + self.affine[2] * s2
        for w, g in self.terms:
            acc = acc + w * _facet_potential(g, name, s)
        return acc

    def hessian(self, x, y):
        acc = [0.0, 0.0, 0.0]
        for w, g in self.terms:
            acc = [a + w * b for a, b in zip(acc, g.hessian(x, y))]
        return acc


def as_mix(g) -> PotentialMix:
    return g if isinstance(g, PotentialMix) else PotentialMix(((1.0, g),))


def segment(g0, g1, t: float) -> PotentialMix:
    """(1 − t) G0 + t G1."""
    g0, g1 = as_mix(g0), as_mix(g1)
    terms = tuple((w * (1 - t), g) for w, g in g0.terms) + tuple((w * t, g) for w, g in g1.terms)
    aff = tuple((1 - t) * a + t * b for a, b in zip(g0.affine, g1.affine))
    return PotentialMix(terms, aff)


def _deflated(coeffs, root):
    q, _ = np.polydiv(np.asarray(coeffs, dtype=float), np.array([1.0, -root]))
    return q


def _end_moments(g: ABPotential, coeffs, interval, end):
    """∫_{mid}^{end} t^k (t − end) / P(t) dt for k = 0, 1, 2 (P has a simple zero at end)."""
    base = 0.5 * (interval[0] + interval[1])
    q = _deflated(coeffs, end)
    sign = 1.0 if np.polyval(q, base) > 0 else -1.0
    out, status = kernels.cumulative_moments(sign * q, base, np.array([end]), g.tol, g.depth)
    if status != kernels.OK:
        raise NonConvexSample("boundary quadrature failed")
    return sign * out[0]


def _facet_potential(g: ABPotential, name: str, s):
    """G restricted to a facet, using the simple zero of A or B there."""
    s = np.asarray(s, dtype=float)
    x, y = _facet_point(g, name, s)
    x = np.asarray(x, dtype=float) * np.ones_like(s)
    y = np.asarray(y, dtype=float) * np.ones_like(s)
    s1, s2 = g.sigma(x, y)
    if name in ("a1", "a2"):
        end = g.alphas[0] if name == "a1" else g.alphas[1]
        m0, m1, _ = _end_moments(g, g.A, g.alphas, end)
        j0, j1, j2 = g._moments(g.B, g.betas, y)
        if g.kind == "Orthotoric":
            return -(m1 - y * m0) + (j2 - s1 * j1 + s2 * j0)
        if g.kind == "Calabi":
            return s2 * j0 - s1 * j1 - m1
        return -m0 + (y * j0 - j1)
    end = g.betas[0] if name == "b1" else g.betas[1]
    n0, n1, _ = _end_moments(g, g.B, g.betas, end)
    i0, i1, i2 = g._moments(g.A, g.alphas, x)
    if g.kind == "Orthotoric":
        return -(i2 - s1 * i1 + s2 * i0) + (n1 - x * n0)
    if g.kind == "Calabi":
        return -x * n0 + s1 * i1 - i2
    return (x * i0 - i1) - n0


def _chart_kappa(g: ABPotential, quad: LabeledQuadrilateral) -> dict:
    verts = [np.array([float(a), float(b)]) for a, b in quad.vertices]
    out = {}
    for name in facet_names(g):
        ends = [np.array(_sigma(g, *_facet_point(g, name, s)), dtype=float) for s in (0.0, 1.0)]
        for k in range(4):
            e = (verts[k], verts[(k + 1) % 4])
            same = np.allclose(e[0], ends[0], atol=1e-9) and np.allclose(e[1], ends[1], atol=1e-9)
            flip = np.allclose(e[0], ends[1], atol=1e-9) and np.allclose(e[1], ends[0], atol=1e-9)
            if same or flip:
                out[name] = float(facet_density(quad, k))
                break
        else:  # pragma: no cover
            raise AssertionError(f"facet {name} not found on the chart")
    return out


@dataclass
class KEnergy:
    value: float
    error: float
    L: float
    log_det: float
    interior_truncated: bool
    order: int

    def to_json(self) -> dict:
        return asdict(self)


def _energy_terms(g: PotentialMix, quad, zeta, kappa, eps: float, order: int):
    base = g.base
    a1, a2 = base.alphas
    b1, b2 = base.betas
    t, w = np.polynomial.legendre.leggauss(order)
    s = 0.5 * (t + 1)
    w = 0.5 * w
    x = a1 + s * (a2 - a1)
    y = b1 + s * (b2 - b1)
    X, Y = np.meshgrid(x, y, indexing="ij")
    W = np.outer(w, w) * (a2 - a1) * (b2 - b1) * base.jacobian(X, Y)
    s1, s2 = base.sigma(X, Y)
    z = zeta[0] + zeta[1] * s1 + zeta[2] * s2
    boundary = sum(kappa[name] * float(np.sum(w * g.facet_value(name, s))) for name in facet_names(base))
    interior = float(np.sum(W * g.value(X, Y) * z))
    L = boundary - 0.5 * interior
    # log det term on the rectangle shrunk by eps in parameter units
    xe = a1 + (eps + (1 - 2 * eps) * s) * (a2 - a1)
    ye = b1 + (eps + (1 - 2 * eps) * s) * (b2 - b1)
    Xe, Ye = np.meshgrid(xe, ye, indexing="ij")
    We = np.outer(w, w) * (1 - 2 * eps) ** 2 * (a2 - a1) * (b2 - b1) * base.jacobian(Xe, Ye)
    g11, g12, g22 = g.hessian(Xe, Ye)
    det = g11 * g22 - g12 * g12
    if np.any(~np.isfinite(det)) or np.any(det <= 0) or np.any(g11 <= 0):
        raise NonConvexSample("Hessian of the potential is not positive definite on the sample")
    log_det = float(np.sum(We * np.log(det)))
    return L, log_det


def k_energy(quad: LabeledQuadrilateral, zeta, g, eps=DEFAULT_EPS, order: int = 48) -> KEnergy:
    """Relative K-energy E(G) = 2 L(G) − ∫ log det Hess G dv in the chart of ``g``.

    ``quad`` is the chart quadrilateral (with its labels) and ``zeta`` the
    extremal affine function in chart coordinates.  L uses the full
    quadrilateral (boundary values of G are finite); the log-det term skips a
    layer of relative width eps when eps > 0.  The error estimate compares
    with a run at double the order.
    """
    g = as_mix(g)
    zeta = tuple(float(c) for c in (zeta.coeffs if hasattr(zeta, "coeffs") else zeta))
    kappa = _chart_kappa(g.base, quad)
    eps = float(eps)
    L1, D1 = _energy_terms(g, quad, zeta, kappa, eps, order)
    L2, D2 = _energy_terms(g, quad, zeta, kappa, eps, 2 * order)
    e1, e2 = 2 * L1 - D1, 2 * L2 - D2
    return KEnergy(e2, abs(e2 - e1), L2, D2, eps > 0, 2 * order)


# ------------------------------------------------------------------ oracle

def brute_force_moments(quad: LabeledQuadrilateral, order: int = 12):
    """W and Z by Gauss-Legendre quadrature (Duffy map on two triangles)."""
    t, w = np.polynomial.legendre.leggauss(order)
    s, ws = 0.5 * (t + 1), 0.5 * w
    v = [np.array([float(a), float(b)]) for a, b in quad.vertices]
    W = np.zeros((3, 3))
    for a, b, c in ((v[0], v[1], v[2]), (v[0], v[2], v[3])):
        e1, e2 = b - a, c - a
        area2 = abs(e1[0] * e2[1] - e1[1] * e2[0])
        for ui, wu in zip(s, ws):
            for vi, wv in zip(s, ws):
                p = a + ui * (b - a) + ui * vi * (c - b)
                m = np.array([1.0, p[0], p[1]])
                W += wu * wv * ui * area2 * np.outer(m, m)
    Z = np.zeros(3)
    for j in range(4):
        p, q = (np.array([float(a), float(b)]) for a, b in quad.edge(j))
        kappa = float(facet_density(quad, j))
        for si, wi in zip(s, ws):
            x = p + si * (q - p)
            Z += 2 * kappa * wi * np.array([1.0, x[0], x[1]])
    return W, Z


# ------------------------------------------------------------------ report

@dataclass
class VerificationReport:
    max_abreu_residual: float
    boundary_residuals: dict
    hessian_identity_residual: float
    min_eigenvalue_on_grid: float
    futaki_crease_residuals: list
    k_energy: dict | None
    grid: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def clean(o):
            if isinstance(o, Fraction):
                return f"{o.numerator}/{o.denominator}" if o.denominator != 1 else str(o.numerator)
            if isinstance(o, float):
                return float(f"{o:.17g}")
            if isinstance(o, dict):
                return {k: clean(v) for k, v in o.items()}
            if isinstance(o, (list, tuple)):
                return [clean(v) for v in o]
            return o
        return clean(asdict(self))


def verify_instance(poly: ExtremalPolynomials, n: int = DEFAULT_N, eps=DEFAULT_EPS,
                    seed: int = 0, energy: bool = True) -> tuple[VerificationReport, AbreuGrid]:
    grid = abreu_grid(poly, n, eps)
    bnd = boundary_residual(poly)
    hid = hessian_identity(poly, interior_points(poly, 5, seed))
    creases = crease_residuals(poly, per_axis=3)
    ke = None
    if energy:
        pot = ABPotential.from_polynomials(poly)
        ke = k_energy(poly.chart, scalar_curvature_closed_form(poly), pot, eps, order=24).to_json()
    report = VerificationReport(
        grid.max_residual, bnd, hid, min_eigenvalue(grid), creases, ke,
        {"n": n, "eps": str(frac(eps)), "h": list(grid.h)},
    )
    return report, grid


def fd_abreu_3d(H: np.ndarray, h: Sequence[float]) -> np.ndarray:
    """−Σ_ij D_i D_j H_ij on the interior of a 3-D grid; H has shape (3, 3, n0, n1, n2)."""
    H = np.asarray(H, dtype=float)
    if min(H.shape[2:]) < 8:
        raise GridTooCoarse(f"need at least 8 nodes per axis, got {H.shape[2:]}")
    core = (slice(1, -1),) * 3

    def shift(a, i, s, j=None, t=0):
        idx = [slice(1, -1)] * 3
        idx[i] = slice(1 + s, a.shape[i] - 1 + s)
        if j is not None:
            idx[j] = slice(1 + t, a.shape[j] - 1 + t)
        return a[tuple(idx)]

    out = np.zeros(tuple(n - 2 for n in H.shape[2:]))
    for i in range(3):
        f = H[i, i]
        out += (shift(f, i, 1) - 2 * f[core] + shift(f, i, -1)) / h[i] ** 2
        for j in range(i + 1, 3):
            f = H[i, j]
            mixed = (shift(f, i, 1, j, 1) - shift(f, i, 1, j, -1)
                     - shift(f, i, -1, j, 1) + shift(f, i, -1, j, -1)) / (4 * h[i] * h[j])
            out += 2 * mixed
    return -out
