"""Explicit extremal solutions for the three kinds of quadrilaterals.

Generic quadrilaterals use the orthotoric ansatz, trapezoids the Calabi
ansatz and parallelograms a product of two one dimensional solutions.  The
coefficient formulas are linear in the inverse labels 1/C, which is what
lets the ``cones`` module reuse them as linear forms in r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BoundaryPoint, EndpointSignViolation, QuadrexError
from .exact import AffineMap, fmt, frac, pad, poly_eval, poly_mul
from .polytope import (
    CalabiParams,
    Chart,
    Kind,
    LabeledQuadrilateral,
    OrthotoricParams,
    calabi_chart,
    chart_of,
    classify,
    orthotoric_chart,
    product_chart,
)

ZERO = Fraction(0)


class KEUndefined(QuadrexError):
    pass


# ------------------------------------------------------------ coefficient forms

def orthotoric_coefficients(alphas, betas, inv_c) -> dict:
    """A0, R1, R2, S1, S2 and the compatibility residual.

    ``inv_c`` holds (1/C_α1, 1/C_α2, 1/C_β1, 1/C_β2); everything returned is
    linear in it.  The residual vanishes exactly when the quadrilateral is
    equipoised.
    """
    a1, a2 = alphas
    b1, b2 = betas
    ia1, ia2, ib1, ib2 = inv_c
    da2, db2 = (a2 - a1) ** 2, (b2 - b1) ** 2
    k1 = 2 * (ia1 + ia2) / da2
    l1 = 2 * (ib1 + ib2) / db2
    A0 = (k1 - l1) / (2 * (a1 + a2 - b1 - b2))
    R1 = k1 - A0 * (a1 + a2)
    R2 = -2 * (a2 * ia1 + a1 * ia2) / da2 + A0 * a1 * a2
    S1 = -l1 + A0 * (b1 + b2)
    S2 = 2 * (b2 * ib1 + b1 * ib2) / db2 - A0 * b1 * b2
    lhs = (2 / da2 * ((2 * a2 + a1) * ia1 + (2 * a1 + a2) * ia2)
           - 2 / db2 * ((2 * b2 + b1) * ib1 + (2 * b1 + b2) * ib2))
    rhs = A0 * ((a1 + a2) ** 2 + 2 * a1 * a2 - (b1 + b2) ** 2 - 2 * b1 * b2)
    return {"A0": A0, "R1": R1, "R2": R2, "S1": S1, "S2": S2, "residual": lhs - rhs}


def calabi_coefficients(alphas, betas, inv_c) -> dict:
    """κ, A0, R1, R2 for the Calabi ansatz, assuming C_β1 = −C_β2."""
    a1, a2 = alphas
    b1, b2 = betas
    ia1, ia2, ib1, ib2 = inv_c
    da2 = (a2 - a1) ** 2
    kappa = 2 * ib2 / (b2 - b1)
    s, p = a1 + a2, a1 * a2
    A0 = (2 / da2 * ((2 * a2 + a1) * ia1 + (2 * a1 + a2) * ia2) + kappa) / (s * s + 2 * p)
    R1 = 2 * (ia1 + ia2) / da2 - A0 * s
    R2 = -2 * (a2 * ia1 + a1 * ia2) / da2 + A0 * p
    return {"kappa": kappa, "A0": A0, "R1": R1, "R2": R2}


def _inv(params) -> tuple:
    return tuple(1 / c for c in params.cs)


# ------------------------------------------------------------------- types

@dataclass(frozen=True)
class ExtremalPolynomials:
    """The functions A, B defining H_{A,B}, with descending coefficients.

    Orthotoric and Calabi kinds store five coefficients for both A and B
    (B is quadratic for Calabi); Product stores the two cubic factors H1, H2
    on [0, 1] in the unit-square chart.
    """

    kind: str
    A: tuple
    B: tuple
    alphas: tuple
    betas: tuple
    chart: LabeledQuadrilateral
    witness: AffineMap = field(default_factory=AffineMap.identity)
    params: object = None

    def a(self, x):
        return poly_eval(self.A, x)

    def b(self, y):
        return poly_eval(self.B, y)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "A": [fmt(c) for c in self.A],
            "B": [fmt(c) for c in self.B],
            "alphas": [fmt(c) for c in self.alphas],
            "betas": [fmt(c) for c in self.betas],
            "chart": self.chart.to_json(),
            "witness": self.witness.to_json(),
        }
        if self.params is not None:
            out["params"] = self.params.to_json()
        return out


@dataclass(frozen=True)
class StabilityVerdict:
    status: str  # Stable | Unstable | NotEquipoised
    polynomials: ExtremalPolynomials | None = None
    witness: dict | None = None
    residual: Fraction | None = None

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.polynomials is not None:
            out["polynomials"] = self.polynomials.to_json()
        if self.witness is not None:
            out["witness"] = {"axis": self.witness["axis"], "value": fmt(self.witness["value"])}
        if self.residual is not None:
            out["residual"] = fmt(self.residual)
        return out


@dataclass(frozen=True)
class PositivityResult:
    positive: bool
    witness: Fraction | None = None


def check_positivity(q: Sequence, interval) -> PositivityResult:
    """Sign of (t − a)(t − b)·Q(t) on (a, b) for a quadratic Q.

    Q must be negative at both ends.  If Q is convex (or linear) it stays
    negative.  Otherwise the only place it can turn non-negative is its
    vertex v; Q(v) = 0 is the semistable case and is reported as not
    positive with witness v.
    """
    q = pad(q, 3)
    a, b = (frac(t) for t in interval)
    qa, qb = poly_eval(q, a), poly_eval(q, b)
    if qa >= 0 or qb >= 0:
        raise EndpointSignViolation(f"quadratic factor must be negative at the endpoints, got {qa}, {qb}")
    if q[0] >= 0:
        return PositivityResult(True)
    v = -q[1] / (2 * q[0])
    if a < v < b and poly_eval(q, v) >= 0:
        return PositivityResult(False, v)
    return PositivityResult(True)


def _quartic(root1, root2, quad_factor) -> tuple:
    return tuple(pad(poly_mul(poly_mul([1, -root1], [1, -root2]), quad_factor), 5))


# ------------------------------------------------------------------ solvers

def _verdict(poly: ExtremalPolynomials, qa, qb) -> StabilityVerdict:
    ra = check_positivity(qa, poly.alphas)
    if not ra.positive:
        return StabilityVerdict("Unstable", poly, {"axis": "x", "value": ra.witness})
    rb = check_positivity(qb, poly.betas)
    if not rb.positive:
        return StabilityVerdict("Unstable", poly, {"axis": "y", "value": rb.witness})
    return StabilityVerdict("Stable", poly)


def solve_orthotoric(params: OrthotoricParams, chart: Chart | None = None) -> StabilityVerdict:
    chart = chart or chart_of(params)
    c = orthotoric_coefficients(params.alphas, params.betas, _inv(params))
    if c["residual"] != 0:
        return StabilityVerdict("NotEquipoised", residual=c["residual"])
    qa = [c["A0"], c["R1"], c["R2"]]
    qb = [-c["A0"], c["S1"], c["S2"]]
    poly = ExtremalPolynomials(
        "Orthotoric",
        _quartic(params.alpha1, params.alpha2, qa),
        _quartic(params.beta1, params.beta2, qb),
        params.alphas, params.betas, chart.quad, chart.witness, params,
    )
    _assert_boundary(poly, params)
    return _verdict(poly, qa, qb)


def solve_calabi(params: CalabiParams, chart: Chart | None = None) -> StabilityVerdict:
    chart = chart or chart_of(params)
    residual = params.c_beta2 + params.c_beta1
    if residual != 0:
        return StabilityVerdict("NotEquipoised", residual=residual)
    c = calabi_coefficients(params.alphas, params.betas, _inv(params))
    qa = [c["A0"], c["R1"], c["R2"]]
    qb = [ZERO, ZERO, -c["kappa"]]
    poly = ExtremalPolynomials(
        "Calabi",
        _quartic(params.alpha1, params.alpha2, qa),
        _quartic(params.beta1, params.beta2, qb),
        params.alphas, params.betas, chart.quad, chart.witness, params,
    )
    _assert_boundary(poly, params)
    assert poly.A[2] == c["kappa"]
    return _verdict(poly, qa, qb)


def _assert_boundary(poly: ExtremalPolynomials, params) -> None:
    da = [4 * poly.A[0], 3 * poly.A[1], 2 * poly.A[2], poly.A[3]]
    db = [4 * poly.B[0], 3 * poly.B[1], 2 * poly.B[2], poly.B[3]]
    for t, c in zip(params.alphas, params.cs[:2]):
        assert poly_eval(poly.A, t) == 0 and poly_eval(da, t) == 2 / c
    for t, c in zip(params.betas, params.cs[2:]):
        assert poly_eval(poly.B, t) == 0 and poly_eval(db, t) == -2 / c


def _interval_factor(u_lo: Fraction, u_hi: Fraction) -> tuple:
    """H(t) = t(1−t)(c0 + c1 t) on [0, 1] with H'(0) = 2/u_lo, H'(1) = 2/u_hi."""
    c0 = 2 / u_lo
    c1 = -2 / u_hi - c0
    return (-c1, c1 - c0, c0, ZERO)


def solve_product(quad: LabeledQuadrilateral) -> StabilityVerdict:
    if classify(quad).kind is not Kind.PARALLELOGRAM:
        raise ValueError("product solution needs a parallelogram")
    square, phi = product_chart(quad)
    lab = {}
    for k in range(4):
        (p, q), u = square.edge(k), square.normals[k]
        if p[0] == q[0]:
            lab["x0" if p[0] == 0 else "x1"] = u[0]
        else:
            lab["y0" if p[1] == 0 else "y1"] = u[1]
    poly = ExtremalPolynomials(
        "Product",
        _interval_factor(lab["x0"], lab["x1"]),
        _interval_factor(lab["y0"], lab["y1"]),
        (ZERO, Fraction(1)), (ZERO, Fraction(1)), square, phi,
    )
    return StabilityVerdict("Stable", poly)


def solve(quad: LabeledQuadrilateral) -> StabilityVerdict:
    kind = classify(quad).kind
    if kind is Kind.GENERIC:
        chart = orthotoric_chart(quad)
        return solve_orthotoric(chart.params, chart)
    if kind is Kind.TRAPEZOID:
        chart = calabi_chart(quad)
        return solve_calabi(chart.params, chart)
    return solve_product(quad)


# ------------------------------------------------------- derived quantities

def scalar_curvature_closed_form(poly: ExtremalPolynomials) -> tuple:
    """ζ in the chart coordinates of ``poly``."""
    if poly.kind == "Product":
        c = [pad(poly.A, 4), pad(poly.B, 4)]
        # −H'' = −6 h3 t − 2 h2 for H = h3 t^3 + h2 t^2 + h1 t
        return (-2 * c[0][1] - 2 * c[1][1], -6 * c[0][0], -6 * c[1][0])
    return (-6 * poly.A[1], -12 * poly.A[0], ZERO)


@dataclass(frozen=True)
class SubConeFlags:
    csc: bool
    wbf: bool | None
    _ke: bool | None

    @property
    def ke(self) -> bool:
        if self._ke is None:
            raise KEUndefined("Kähler-Einstein flag is not defined for product solutions")
        return self._ke


def sub_cone_flags(poly: ExtremalPolynomials) -> SubConeFlags:
    if poly.kind == "Product":
        zeta = scalar_curvature_closed_form(poly)
        return SubConeFlags(zeta[1] == 0 and zeta[2] == 0, None, None)
    csc = poly.A[0] == 0
    if poly.kind == "Orthotoric":
        wbf = poly.A[3] == -poly.B[3]
    else:
        wbf = poly.A[3] == 0
    return SubConeFlags(csc, wbf, csc and wbf)


def to_params(poly: ExtremalPolynomials, mu) -> tuple:
    """Ansatz coordinates (x, y) of a chart point μ (floats or exact for Calabi/Product)."""
    m1, m2 = mu
    if poly.kind == "Orthotoric":
        disc = m1 * m1 - 4 * m2
        if disc <= 0:
            raise BoundaryPoint("point is on the discriminant x = y")
        r = math.sqrt(disc) if not isinstance(disc, Fraction) else math.sqrt(float(disc))
        return ((m1 + r) / 2, (m1 - r) / 2)
    if poly.kind == "Calabi":
        if m1 == 0:
            raise BoundaryPoint("x = 0")
        return (m1, m2 / m1)
    return (m1, m2)


def h_matrix(poly: ExtremalPolynomials, x, y):
    """H_{A,B} at ansatz coordinates (x, y); exact when x, y are rationals.

    Orthotoric and Calabi kinds use the parameter rectangle coordinates; for
    Product (x, y) are the chart coordinates (μ1, μ2).
    """
    A = poly_eval(poly.A, x)
    B = poly_eval(poly.B, y)
    if poly.kind == "Orthotoric":
        if x == y:
            raise BoundaryPoint("x = y")
        d = x - y
        h12 = (y * A + x * B) / d
        return ((( A + B) / d, h12), (h12, (y * y * A + x * x * B) / d))
    if poly.kind == "Calabi":
        if x == 0:
            raise BoundaryPoint("x = 0")
        return ((A / x, y * A / x), (y * A / x, (x * x * B + y * y * A) / x))
    return ((A, 0 * A), (0 * A, B))


def h_matrix_mu(poly: ExtremalPolynomials, mu) -> np.ndarray:
    x, y = to_params(poly, mu)
    return np.array(h_matrix(poly, float(x), float(y)), dtype=float)


def h_grid(poly: ExtremalPolynomials, m1: np.ndarray, m2: np.ndarray):
    """Vectorized H entries (H11, H12, H22) on arrays of chart points."""
    m1 = np.asarray(m1, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    A = [float(c) for c in poly.A]
    B = [float(c) for c in poly.B]
    if poly.kind == "Orthotoric":
        r = np.sqrt(m1 * m1 - 4 * m2)
        x, y = (m1 + r) / 2, (m1 - r) / 2
        a, b = np.polyval(A, x), np.polyval(B, y)
        return (a + b) / r, (y * a + x * b) / r, (y * y * a + x * x * b) / r
    if poly.kind == "Calabi":
        x, y = m1, m2 / m1
        a, b = np.polyval(A, x), np.polyval(B, y)
        return a / x, y * a / x, (x * x * b + y * y * a) / x
    return np.polyval(A, m1), np.zeros_like(m1 * m2), np.polyval(B, m2)


def sigma_map(poly: ExtremalPolynomials, x, y):
    if poly.kind == "Orthotoric":
        return (x + y, x * y)
    if poly.kind == "Calabi":
        return (x, x * y)
    return (x, y)


def jacobian(poly: ExtremalPolynomials, x, y):
    """|det dσ| at (x, y)."""
    if poly.kind == "Orthotoric":
        return abs(x - y)
    if poly.kind == "Calabi":
        return abs(x)
    return 1.0 + 0 * x


def zeta_original(poly: ExtremalPolynomials) -> tuple:
    """ζ pulled back to the coordinates of the original quadrilateral."""
    z0, z1, z2 = scalar_curvature_closed_form(poly)
    m, t = poly.witness.matrix, poly.witness.shift
    return (
        z0 + z1 * t[0] + z2 * t[1],
        z1 * m[0][0] + z2 * m[1][0],
        z1 * m[0][1] + z2 * m[1][1],
    )


def symplectic_potential(poly: ExtremalPolynomials, point, tol: float = 1e-10) -> float:
    """G at a chart point μ, by adaptive quadrature (see :mod:`quadrex.potential`)."""
    from .potential import ABPotential

    pot = ABPotential.from_polynomials(poly, tol=tol)
    x, y = to_params(poly, tuple(float(c) for c in point))
    return float(pot.value(x, y))
