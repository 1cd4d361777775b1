"""Labeled convex quadrilaterals, their affine normal forms and the two
separable ansatz charts (orthotoric and Calabi).

Everything here is exact: vertices, normals and affine witnesses are
:class:`fractions.Fraction` valued.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import (
    DegenerateQuadrilateral,
    InvalidParams,
    NotGeneric,
    NotTrapezoid,
    ParseError,
)
from .exact import AffineMap, Vec2, cross, dot, fmt, frac, inv2, sub, vec

ZERO = Fraction(0)
ONE = Fraction(1)


class Kind(str, Enum):
    GENERIC = "Generic"
    TRAPEZOID = "Trapezoid"
    PARALLELOGRAM = "Parallelogram"


@dataclass(frozen=True)
class QuadClass:
    kind: Kind
    parallel_pairs: int

    @property
    def hamiltonian_form_order(self) -> int:
        return 2 - self.parallel_pairs


def _signed_area2(pts: Sequence[Vec2]) -> Fraction:
    n = len(pts)
    return sum((cross(pts[i], pts[(i + 1) % n]) for i in range(n)), ZERO)


@dataclass(frozen=True)
class LabeledQuadrilateral:
    """Convex quadrilateral with one inward normal per edge.

    ``normals[i]`` labels the edge from ``vertices[i]`` to ``vertices[i+1]``.
    Clockwise input is reversed (and the labels carried along).
    """

    vertices: tuple
    normals: tuple

    def __post_init__(self):
        verts = tuple(vec(p) for p in self.vertices)
        norms = tuple(vec(u) for u in self.normals)
        if len(verts) != 4 or len(norms) != 4:
            raise DegenerateQuadrilateral("need exactly four vertices and four normals")
        if len(set(verts)) != 4:
            raise DegenerateQuadrilateral("vertices are not pairwise distinct")
        area2 = _signed_area2(verts)
        if area2 == 0:
            raise DegenerateQuadrilateral("zero area")
        if area2 < 0:
            verts = verts[::-1]
            norms = tuple(norms[(2 - j) % 4] for j in range(4))
        for i in range(4):
            e1 = sub(verts[(i + 1) % 4], verts[i])
            e2 = sub(verts[(i + 2) % 4], verts[(i + 1) % 4])
            if cross(e1, e2) <= 0:
                raise DegenerateQuadrilateral("vertices are not in strictly convex position")
        for i, u in enumerate(norms):
            if u == (ZERO, ZERO):
                raise DegenerateQuadrilateral(f"normal {i} is zero")
            edge = sub(verts[(i + 1) % 4], verts[i])
            if dot(edge, u) != 0:
                raise DegenerateQuadrilateral(f"normal {i} is not orthogonal to its edge")
            if dot(sub(verts[(i + 2) % 4], verts[i]), u) <= 0:
                raise DegenerateQuadrilateral(f"normal {i} does not point inward")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "normals", norms)

    @property
    def support(self) -> tuple:
        return tuple(dot(s, u) for s, u in zip(self.vertices, self.normals))

    def edge(self, i: int) -> tuple[Vec2, Vec2]:
        return self.vertices[i % 4], self.vertices[(i + 1) % 4]

    def area(self) -> Fraction:
        return _signed_area2(self.vertices) / 2

    def contains(self, p, strict: bool = False) -> bool:
        for lam, u in zip(self.support, self.normals):
            v = dot(p, u) - lam
            if v < 0 or (strict and v == 0):
                return False
        return True

    def transform(self, phi: AffineMap) -> "LabeledQuadrilateral":
        return LabeledQuadrilateral(
            tuple(phi(p) for p in self.vertices),
            tuple(phi.push_normal(u) for u in self.normals),
        )

    def with_normals(self, normals) -> "LabeledQuadrilateral":
        return LabeledQuadrilateral(self.vertices, normals)

    def scaled(self, r: Sequence) -> "LabeledQuadrilateral":
        """Normals ``u_j / r_j``."""
        return self.with_normals(tuple((u[0] / rj, u[1] / rj) for u, rj in zip(self.normals, r)))

    @classmethod
    def from_vertices(cls, vertices, normals=None) -> "LabeledQuadrilateral":
        """Build a quadrilateral; missing normals default to the rotated edge vectors."""
        verts = [vec(p) for p in vertices]
        if normals is None:
            if _signed_area2(verts) < 0:
                verts = verts[::-1]
            normals = []
            for i in range(4):
                e = sub(verts[(i + 1) % 4], verts[i])
                normals.append((-e[1], e[0]))
        return cls(tuple(verts), tuple(normals))

    @classmethod
    def from_json(cls, data) -> "LabeledQuadrilateral":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            verts = data["vertices"]
            norms = data["normals"]
        except (KeyError, TypeError) as exc:
            raise ParseError("quadrilateral JSON needs 'vertices' and 'normals'") from exc
        if len(verts) != 4 or len(norms) != 4:
            raise ParseError("quadrilateral JSON needs four vertices and four normals")
        return cls(tuple(vec(p) for p in verts), tuple(vec(u) for u in norms))

    def to_json(self) -> dict:
        return {
            "vertices": [[fmt(x), fmt(y)] for x, y in self.vertices],
            "normals": [[fmt(x), fmt(y)] for x, y in self.normals],
        }


def classify(quad: LabeledQuadrilateral) -> QuadClass:
    e = [sub(*reversed(quad.edge(i))) for i in range(4)]
    p = int(cross(e[0], e[2]) == 0) + int(cross(e[1], e[3]) == 0)
    return QuadClass({0: Kind.GENERIC, 1: Kind.TRAPEZOID, 2: Kind.PARALLELOGRAM}[p], p)


# ---------------------------------------------------------------- normal forms

def _frame_map(s1: Vec2, s2: Vec2, s4: Vec2) -> AffineMap:
    """Affine map with s1 -> 0, s2 -> e1, s4 -> e2."""
    m = inv2(((s2[0] - s1[0], s4[0] - s1[0]), (s2[1] - s1[1], s4[1] - s1[1])))
    t = (-(m[0][0] * s1[0] + m[0][1] * s1[1]), -(m[1][0] * s1[0] + m[1][1] * s1[1]))
    return AffineMap(m, t)


def relabelings(quad: LabeledQuadrilateral):
    """All eight dihedral choices of (s1, orientation) with their normal forms.

    Yields ``((a, b), witness)`` where the witness maps quad onto the hull of
    (0,0), (1,0), (a,b), (0,1).
    """
    v = quad.vertices
    for start in range(4):
        for step in (1, -1):
            w = [v[(start + step * j) % 4] for j in range(4)]
            phi = _frame_map(w[0], w[1], w[3])
            yield phi(w[2]), phi


def normal_form(quad: LabeledQuadrilateral) -> tuple[Vec2, AffineMap]:
    """Normal form taking s1 to be the lexicographically smallest vertex."""
    v = quad.vertices
    k = min(range(4), key=lambda i: v[i])
    phi = _frame_map(v[k], v[(k + 1) % 4], v[(k - 1) % 4])
    return phi(v[(k + 2) % 4]), phi


def orbit(a, b) -> list[Vec2]:
    """The eight normal forms equivalent to (a, b), one per dihedral relabeling.

    The vertex (a,b) is opposite the origin in each case; ``s`` below is
    a + b - 1, the denominator that shows up when the far vertex becomes s1.
    """
    a, b = frac(a), frac(b)
    s = a + b - 1
    return [
        (a, b),
        (b, a),
        (s / b, 1 / b),
        (1 / b, s / b),
        (s / a, 1 / a),
        (1 / a, s / a),
        (a / s, b / s),
        (b / s, a / s),
    ]


def is_canonical(a, b) -> bool:
    return b <= 1 <= a and a + b >= 2


@dataclass(frozen=True)
class CharacteristicPair:
    alpha: Fraction
    beta: Fraction

    def __iter__(self):
        return iter((self.alpha, self.beta))


def _canonical(quad: LabeledQuadrilateral) -> tuple[Vec2, AffineMap]:
    hits = [(ab, phi) for ab, phi in relabelings(quad) if is_canonical(*ab)]
    if not hits:  # pragma: no cover - excluded by the orbit argument
        raise DegenerateQuadrilateral("no canonical normal form found")
    return min(hits, key=lambda h: h[0])


def characteristic_pair(quad: LabeledQuadrilateral) -> CharacteristicPair:
    (a, b), _ = _canonical(quad)
    return CharacteristicPair(a, 1 - b)


# --------------------------------------------------------------- ansatz charts

@dataclass(frozen=True)
class AnsatzParams:
    """(α1, α2, β1, β2, C_α1, C_α2, C_β1, C_β2), shared by both ansatz kinds."""

    alpha1: Fraction
    alpha2: Fraction
    beta1: Fraction
    beta2: Fraction
    c_alpha1: Fraction
    c_alpha2: Fraction
    c_beta1: Fraction
    c_beta2: Fraction

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            object.__setattr__(self, name, frac(getattr(self, name)))
        if not (self.c_alpha1 > 0 and self.c_beta2 > 0 and self.c_alpha2 < 0 and self.c_beta1 < 0):
            raise InvalidParams("sign pattern C_a1 > 0, C_a2 < 0, C_b1 < 0, C_b2 > 0 violated")
        if not (self.alpha1 < self.alpha2 and self.beta1 < self.beta2):
            raise InvalidParams("need alpha1 < alpha2 and beta1 < beta2")

    @property
    def alphas(self) -> tuple[Fraction, Fraction]:
        return self.alpha1, self.alpha2

    @property
    def betas(self) -> tuple[Fraction, Fraction]:
        return self.beta1, self.beta2

    @property
    def cs(self) -> tuple[Fraction, ...]:
        return self.c_alpha1, self.c_alpha2, self.c_beta1, self.c_beta2

    @property
    def r(self) -> tuple[Fraction, ...]:
        """Scaling vector (1/C_α1, −1/C_α2, −1/C_β1, 1/C_β2); all entries positive."""
        return 1 / self.c_alpha1, -1 / self.c_alpha2, -1 / self.c_beta1, 1 / self.c_beta2

    def with_r(self, r: Sequence) -> "AnsatzParams":
        r = [frac(x) for x in r]
        return type(self)(
            self.alpha1, self.alpha2, self.beta1, self.beta2,
            1 / r[0], -1 / r[1], -1 / r[2], 1 / r[3],
        )

    def as_tuple(self) -> tuple:
        return (self.alpha1, self.alpha2, self.beta1, self.beta2) + self.cs

    def to_json(self) -> dict:
        return {name: fmt(getattr(self, name)) for name in self.__dataclass_fields__}


class OrthotoricParams(AnsatzParams):
    def __post_init__(self):
        super().__post_init__()
        if not self.beta2 < self.alpha1:
            raise InvalidParams("orthotoric parameters need beta2 < alpha1")

    @staticmethod
    def sigma(x, y) -> Vec2:
        return (x + y, x * y)

    def normal(self, facet: str) -> Vec2:
        c = dict(zip(FACETS, self.cs))[facet]
        t = dict(zip(FACETS, self.alphas + self.betas))[facet]
        return (c * t, -c)


class CalabiParams(AnsatzParams):
    def __post_init__(self):
        super().__post_init__()
        if not (self.alpha1 > 0 and self.beta1 >= 0):
            raise InvalidParams("Calabi parameters need alpha1 > 0 and beta1 >= 0")

    @staticmethod
    def sigma(x, y) -> Vec2:
        return (x, x * y)

    def normal(self, facet: str) -> Vec2:
        c = dict(zip(FACETS, self.cs))[facet]
        if facet in ("a1", "a2"):
            return (c * dict(zip(FACETS, self.alphas))[facet], ZERO)
        t = dict(zip(FACETS, self.betas + self.betas))[facet]
        return (c * t, -c)


FACETS = ("a1", "a2", "b1", "b2")


@dataclass(frozen=True)
class Chart:
    """An ansatz chart of a quadrilateral.

    ``witness`` maps the original quad onto ``quad`` (the ansatz image);
    ``facet_edge[name]`` is the edge index of ``quad`` carrying facet
    ``name`` (one of a1, a2, b1, b2) and ``source_edge[name]`` the index of
    the same facet in the original quadrilateral.
    """

    params: AnsatzParams
    quad: LabeledQuadrilateral
    witness: AffineMap
    facet_edge: dict
    source_edge: dict

    @property
    def kind(self) -> str:
        return "Orthotoric" if isinstance(self.params, OrthotoricParams) else "Calabi"


def _corner_facets(params: AnsatzParams) -> dict:
    """Image vertex -> (alpha index, beta index)."""
    out = {}
    for i, x in enumerate(params.alphas):
        for j, y in enumerate(params.betas):
            out[params.sigma(x, y)] = (i, j)
    return out


def _facet_edges(quad: LabeledQuadrilateral, params: AnsatzParams) -> dict:
    corners = _corner_facets(params)
    facet_edge = {}
    for k in range(4):
        p, q = quad.edge(k)
        (ip, jp), (iq, jq) = corners[p], corners[q]
        name = f"a{ip + 1}" if ip == iq else f"b{jp + 1}"
        facet_edge[name] = k
    return facet_edge


def _build(params: AnsatzParams) -> tuple[LabeledQuadrilateral, dict]:
    a1, a2 = params.alphas
    b1, b2 = params.betas
    corners = [(a1, b1), (a2, b1), (a2, b2), (a1, b2)]
    verts = [params.sigma(x, y) for x, y in corners]
    names = ["b1", "a2", "b2", "a1"]
    quad = LabeledQuadrilateral(tuple(verts), tuple(params.normal(n) for n in names))
    return quad, _facet_edges(quad, params)


def from_orthotoric(params: OrthotoricParams) -> LabeledQuadrilateral:
    return _build(params)[0]


def from_calabi(params: CalabiParams) -> LabeledQuadrilateral:
    return _build(params)[0]


def chart_of(params: AnsatzParams) -> Chart:
    quad, facet_edge = _build(params)
    return Chart(params, quad, AffineMap.identity(), facet_edge, dict(facet_edge))


def _source_edges(quad: LabeledQuadrilateral, image: LabeledQuadrilateral,
                  witness: AffineMap, facet_edge: dict) -> dict:
    pushed = [frozenset(witness(p) for p in quad.edge(k)) for k in range(4)]
    return {name: pushed.index(frozenset(image.edge(k))) for name, k in facet_edge.items()}


def _read_params(image: LabeledQuadrilateral, cls, alphas, betas):
    skeleton = cls(alphas[0], alphas[1], betas[0], betas[1], 1, -1, -1, 1)
    facet_edge = _facet_edges(image, skeleton)
    cs = []
    for name in FACETS:
        u = image.normals[facet_edge[name]]
        base = skeleton.normal(name)
        # u must be a multiple of the C = 1 normal
        if cross(u, base) != 0:
            raise InvalidParams(f"normal on facet {name} is not of ansatz form")
        c = u[0] / base[0] if base[0] != 0 else u[1] / base[1]
        cs.append(c * skeleton.cs[FACETS.index(name)])
    return cls(alphas[0], alphas[1], betas[0], betas[1], *cs), facet_edge


def orthotoric_chart(quad: LabeledQuadrilateral) -> Chart:
    if classify(quad).kind is not Kind.GENERIC:
        raise NotGeneric("orthotoric chart needs a quadrilateral without parallel edges")
    (a, b), phi = _canonical(quad)
    lift = AffineMap(((1 - b, a - 1), (1 - b, ZERO)), (ONE, ZERO))
    witness = phi.then(lift)
    image = quad.transform(witness)
    params, facet_edge = _read_params(image, OrthotoricParams, (ONE, a), (ZERO, 1 - b))
    return Chart(params, image, witness, facet_edge, _source_edges(quad, image, witness, facet_edge))


def calabi_chart(quad: LabeledQuadrilateral) -> Chart:
    if classify(quad).kind is not Kind.TRAPEZOID:
        raise NotTrapezoid("Calabi chart needs exactly one pair of parallel edges")
    (a, b), phi = _canonical(quad)
    assert b == 1
    # hull{(0,0),(1,0),(a,1),(0,1)} -> sigma([1,a] x [0,1]) with sigma(x,y) = (x, xy)
    lift = AffineMap(((ZERO, a - 1), (ONE, ZERO)), (ONE, ZERO))
    witness = phi.then(lift)
    image = quad.transform(witness)
    params, facet_edge = _read_params(image, CalabiParams, (ONE, a), (ZERO, ONE))
    return Chart(params, image, witness, facet_edge, _source_edges(quad, image, witness, facet_edge))


def to_orthotoric(quad: LabeledQuadrilateral) -> OrthotoricParams:
    return orthotoric_chart(quad).params


def to_calabi(quad: LabeledQuadrilateral) -> CalabiParams:
    return calabi_chart(quad).params


def ansatz_chart(quad: LabeledQuadrilateral) -> Chart:
    kind = classify(quad).kind
    if kind is Kind.GENERIC:
        return orthotoric_chart(quad)
    if kind is Kind.TRAPEZOID:
        return calabi_chart(quad)
    raise NotTrapezoid("parallelograms have no orthotoric or Calabi chart")


def product_chart(quad: LabeledQuadrilateral) -> tuple[LabeledQuadrilateral, AffineMap]:
    """Map a parallelogram onto the unit square, s1 at the origin."""
    v = quad.vertices
    k = min(range(4), key=lambda i: v[i])
    phi = _frame_map(v[k], v[(k + 1) % 4], v[(k - 1) % 4])
    return quad.transform(phi), phi
