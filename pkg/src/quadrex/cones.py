"""The cone of labelings of a quadrilateral and its sub-cones.

A labeling is described by a positive 4-vector r relative to the base
normals of the ansatz chart, ordered by facet (α1, α2, β1, β2):
u(r)_j = u_j / r_j with C_α1 = 1/r1, C_α2 = −1/r2, C_β1 = −1/r3,
C_β2 = 1/r4.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ConstructionFailed, EmptyCone, IsParallelogram, NotGeneric
from .exact import fmt, frac, nullspace, solve
from .moments import facet_matrix, moment_matrix
from .polytope import (
    FACETS,
    CharacteristicPair,
    Chart,
    Kind,
    LabeledQuadrilateral,
    ansatz_chart,
    chart_of,
    classify,
    orthotoric_chart,
)
from .solver import (
    StabilityVerdict,
    calabi_coefficients,
    orthotoric_coefficients,
    solve_calabi,
    solve_orthotoric,
)

ZERO = Fraction(0)
MAX_DRAWS = 10_000


@dataclass(frozen=True)
class NormalRay:
    r: tuple
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(frac(x) for x in self.r))
        if len(self.r) != 4 or any(x <= 0 for x in self.r):
            raise EmptyCone(f"ray entries must be positive, got {self.r}")

    def to_json(self) -> dict:
        out = {"r": [fmt(x) for x in self.r]}
        if self.seed is not None:
            out["seed"] = self.seed
        return out


@functools.lru_cache(maxsize=512)
def _chart(quad: LabeledQuadrilateral) -> Chart:
    # quadrilaterals are immutable; the chart search is the costly part of every call
    if classify(quad).kind is Kind.PARALLELOGRAM:
        raise IsParallelogram("every labeling of a parallelogram is equipoised")
    return ansatz_chart(quad)


def base_chart(quad: LabeledQuadrilateral) -> Chart:
    """Ansatz chart of ``quad`` relabeled with the base normals (r = 1)."""
    chart = _chart(quad)
    params = chart.params.with_r((1, 1, 1, 1))
    normals = [None] * 4
    for name, k in chart.facet_edge.items():
        normals[k] = params.normal(name)
    return Chart(params, chart.quad.with_normals(tuple(normals)), chart.witness,
                 chart.facet_edge, chart.source_edge)


def labeled(quad: LabeledQuadrilateral, r: Sequence) -> LabeledQuadrilateral:
    """The quadrilateral ``quad`` (original coordinates) with labeling u(r)."""
    chart = _chart(quad)
    params = chart.params.with_r(r)
    back = chart.witness.inverse()
    normals = [None] * 4
    for name, k in chart.source_edge.items():
        normals[k] = back.push_normal(params.normal(name))
    return quad.with_normals(tuple(normals))


def solve_ray(quad: LabeledQuadrilateral, r: Sequence) -> StabilityVerdict:
    chart = _chart(quad)
    params = chart.params.with_r(r)
    solver = solve_orthotoric if chart.kind == "Orthotoric" else solve_calabi
    image = chart_of(params)
    return solver(params, Chart(params, image.quad, chart.witness, image.facet_edge, chart.source_edge))


# ----------------------------------------------------------------- constraints

def e_coefficients(quad: LabeledQuadrilateral) -> list[Fraction]:
    """E_j with Σ E_j r_j = det(W)·ζ2, in facet order (α1, α2, β1, β2)."""
    chart = base_chart(quad)
    W = moment_matrix(chart.quad)
    A = facet_matrix(chart.quad)
    g = W[0][0] * W[1][1] - W[0][1] ** 2
    h0 = W[0][2] * W[1][1] - W[1][2] * W[0][1]
    h1 = W[1][2] * W[0][0] - W[0][2] * W[0][1]
    out = []
    for name in FACETS:
        j = chart.facet_edge[name]
        out.append(A[2][j] * g - A[0][j] * h0 - A[1][j] * h1)
    return out


def d_coefficients(pair: CharacteristicPair | Sequence) -> tuple:
    al, be = (frac(x) for x in pair)
    if not (0 < be < 1 < al and al - be >= 1):
        raise NotGeneric("characteristic pair must satisfy 0 < beta < 1 < alpha, alpha - beta >= 1")
    d1 = (1 + al) ** 2 + 2 * al ** 2 + be ** 2 - 2 * (2 * al + 1) * be
    d2 = (1 + al) ** 2 + 2 + be ** 2 - 2 * (2 + al) * be
    d3 = 3 * be ** 2 + (1 + al) ** 2 + 2 * al - 4 * be * (1 + al)
    d4 = be ** 2 + (1 + al) ** 2 + 2 * al - 2 * be * (1 + al)
    # D1 - D4 = 2α(α - 1 - β) and D3 - D2 = 2(1 - β)(α - 1 - β) vanish when α - β = 1
    assert d1 >= d4 > d3 >= d2 > 0
    return d1, d2, d3, d4


def _inv_c(r) -> tuple:
    return (r[0], -r[1], -r[2], r[3])


def _linear_form(fn, key: str) -> list[Fraction]:
    """Row vector of a coefficient that is linear in r."""
    row = []
    for j in range(4):
        e = [ZERO] * 4
        e[j] = Fraction(1)
        row.append(fn(_inv_c(e))[key])
    return row


def _ortho_extras(alphas, betas):
    def fn(inv):
        c = orthotoric_coefficients(alphas, betas, inv)
        a1, a2 = alphas
        b1, b2 = betas
        a3 = a1 * a2 * c["R1"] - (a1 + a2) * c["R2"]
        b3 = b1 * b2 * c["S1"] - (b1 + b2) * c["S2"]
        return dict(c, A3plusB3=a3 + b3)
    return fn


def _calabi_extras(alphas, betas):
    def fn(inv):
        c = calabi_coefficients(alphas, betas, inv)
        a1, a2 = alphas
        return dict(c, A3=a1 * a2 * c["R1"] - (a1 + a2) * c["R2"])
    return fn


@dataclass(frozen=True)
class ConeConstraints:
    E: list
    b_row: list
    csc_row: list
    ke_row: list
    D: tuple | None = None

    def rows(self, cone: str) -> list:
        return {"B": [self.b_row], "C": [self.b_row, self.csc_row],
                "K": [self.b_row, self.csc_row, self.ke_row]}[cone]


def constraints(quad: LabeledQuadrilateral) -> ConeConstraints:
    chart = _chart(quad)
    p = chart.params
    E = e_coefficients(quad)
    if chart.kind == "Orthotoric":
        fn = _ortho_extras(p.alphas, p.betas)
        d = d_coefficients((p.alpha2, p.beta2)) if (p.alpha1, p.beta1) == (1, 0) else None
        return ConeConstraints(E, _linear_form(fn, "residual"), _linear_form(fn, "A0"),
                               _linear_form(fn, "A3plusB3"), d)
    fn = _calabi_extras(p.alphas, p.betas)
    b_row = [ZERO, ZERO, Fraction(1), Fraction(-1)]
    return ConeConstraints(E, b_row, _linear_form(fn, "A0"), _linear_form(fn, "A3"))


# -------------------------------------------------------------------- sampling

def _rand_pos(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 1000), rng.randint(1, 100))


def _project(basis: list, v: list) -> list:
    m = len(basis)
    gram = [[sum(a * b for a, b in zip(basis[i], basis[j])) for j in range(m)] for i in range(m)]
    rhs = [sum(a * b for a, b in zip(basis[i], v)) for i in range(m)]
    c = solve(gram, rhs)
    return [sum(c[i] * basis[i][k] for i in range(m)) for k in range(4)]


def sample(quad: LabeledQuadrilateral, cone: str, seed: int = 0) -> NormalRay:
    rows = constraints(quad).rows(cone)
    basis = nullspace(rows, 4)
    rng = random.Random(seed)
    if len(basis) == 1:
        k = basis[0]
        if all(x < 0 for x in k):
            k = [-x for x in k]
        if not all(x > 0 for x in k):
            raise EmptyCone(f"cone {cone} has no positive ray")
        s = _rand_pos(rng)
        return NormalRay(tuple(s * x for x in k), seed)
    for draw in range(MAX_DRAWS):
        if draw % 2 == 0:
            v = _project(basis, [_rand_pos(rng) for _ in range(4)])
        else:
            coef = [Fraction(rng.randint(-1000, 1000), 100) for _ in basis]
            v = [sum(c * b[k] for c, b in zip(coef, basis)) for k in range(4)]
        if all(x > 0 for x in v):
            assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in rows)
            return NormalRay(tuple(v), seed)
    raise EmptyCone(f"no positive point of cone {cone} after {MAX_DRAWS} draws")


# ---------------------------------------------------------------- destabilizer

@dataclass(frozen=True)
class Destabilizer:
    ray: NormalRay
    a: Fraction
    b: Fraction
    doublings: int
    verdict: StabilityVerdict
    A0: Fraction
    discriminant: Fraction  # S1^2 + 4 A0 S2 of Q_B
    root: Fraction | None  # S1 / (2 A0)
    checks: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return (self.verdict.status == "Unstable" and self.A0 > 0 and self.discriminant == 0
                and self.root is not None and 0 < self.root < self.checks["beta"])

    def to_json(self) -> dict:
        return {
            "r": [fmt(x) for x in self.ray.r],
            "a": fmt(self.a), "b": fmt(self.b), "doublings": self.doublings,
            "A0": fmt(self.A0), "discriminant": fmt(self.discriminant),
            "root": fmt(self.root) if self.root is not None else None,
            "status": self.verdict.status, "verified": self.verified,
        }


def destabilizer(quad: LabeledQuadrilateral, b=-1, strict: bool = True) -> Destabilizer:
    """Run the double-root construction for a generic quadrilateral.

    The ray is built in the characteristic-pair chart: a is doubled until the
    claim inequality and the double-root window hold, r3 takes the equality
    case of the imaginary-root bound, r4 = bβ² + r3, r1 comes from the
    equipoised constraint and r2 = a(α−1)² + r1.  The result is then handed
    to the solver; with ``strict`` a ray the solver does not confirm as
    destabilizing raises ConstructionFailed.
    """
    if classify(quad).kind is not Kind.GENERIC:
        raise NotGeneric("destabilizer needs a generic quadrilateral")
    b = frac(b)
    if b >= 0:
        raise ValueError("b must be negative")
    chart = orthotoric_chart(quad)
    al, be = chart.params.alpha2, chart.params.beta2
    d1, d2, d3, d4 = d_coefficients((al, be))
    g = al + 1 - be
    a = Fraction(1)
    for doublings in range(61):
        bound = b * b * g / (2 * (a - b) * be) + (a - b) * be / (8 * g) - b
        claim = (a * d2 - b * d4) / (d4 - d3) > bound
        window = -be * (a - b) / (2 * g) < 2 * b < be * (a - b) / (2 * g)
        if claim and window:
            break
        a *= 2
    else:
        raise ConstructionFailed("claim inequality not reached after 60 doublings")
    r3 = be * be * bound
    r4 = b * be * be + r3
    r1 = (al - 1) ** 2 * (-r3 / be ** 2 * (d4 - d3) + a * d2 - b * d4) / (d1 - d2)
    r2 = a * (al - 1) ** 2 + r1
    ray = NormalRay((r1, r2, r3, r4))
    params = chart.params.with_r(ray.r)
    c = orthotoric_coefficients(params.alphas, params.betas, _inv_c(ray.r))
    verdict = solve_orthotoric(params)
    disc = c["S1"] ** 2 + 4 * c["A0"] * c["S2"]
    root = c["S1"] / (2 * c["A0"]) if c["A0"] != 0 else None
    out = Destabilizer(ray, a, b, doublings, verdict, c["A0"], disc, root,
                       {"beta": be, "claim": claim, "window": window, "residual": c["residual"]})
    if strict and not out.verified:
        err = ConstructionFailed(
            f"solver does not confirm the construction: status {verdict.status}, "
            f"A0 = {c['A0']}, discriminant = {disc}")
        err.result = out
        raise err
    return out
