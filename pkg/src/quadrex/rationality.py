"""Rationality of quadrilaterals and of their labelings.

Normal lines are points of the projective line; four distinct ones have a
cross-ratio, and a polygon is of rational type exactly when that number is
rational (or infinite).  Exact rational input always gives a rational answer,
so an "interval mode" is provided for lines with irrational slopes: slopes may
be exact quadratic surds a + b√d (decided exactly) or real intervals
(answered Yes only when the interval pins down a rational, else Unknown).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import CoincidentPoints, IrrationalInput, NotStronglyRational, ParseError
from .exact import fmt, frac, inv2, mat_vec, nullspace
from .polytope import (
    CalabiParams,
    Kind,
    LabeledQuadrilateral,
    OrthotoricParams,
    ansatz_chart,
    characteristic_pair,
    classify,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class Infinite:
    """Cross-ratio value when the denominator vanishes."""

    def __repr__(self):
        return "Infinite"

    def __eq__(self, other):
        return isinstance(other, Infinite)

    def __hash__(self):
        return hash("Infinite")


INFINITE = Infinite()


@dataclass(frozen=True)
class ProjectiveLine:
    """[x : y] normalized to coprime integers with the first nonzero entry positive."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        x, y = frac(self.x), frac(self.y)
        if x == 0 and y == 0:
            raise CoincidentPoints("[0:0] is not a point of the projective line")
        den = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
        xi, yi = int(x * den), int(y * den)
        g = math.gcd(xi, yi)
        xi, yi = xi // g, yi // g
        if xi < 0 or (xi == 0 and yi < 0):
            xi, yi = -xi, -yi
        object.__setattr__(self, "x", Fraction(xi))
        object.__setattr__(self, "y", Fraction(yi))

    @classmethod
    def of(cls, v) -> "ProjectiveLine":
        return v if isinstance(v, cls) else cls(v[0], v[1])

    @property
    def slope(self):
        return INFINITE if self.x == 0 else self.y / self.x

    def to_json(self) -> list:
        return [fmt(self.x), fmt(self.y)]


def _det(p, q):
    return p[0] * q[1] - p[1] * q[0]


def cross_ratio(p1, p2, p3, p4):
    """r(P1,P2;P3,P4) = (x1y3−y1x3)(x2y4−y2x4) / ((x1y4−y1x4)(x2y3−y2x3)).

    Works for any field-like coordinates (Fraction, QuadSurd); returns
    INFINITE when the denominator vanishes.
    """
    pts = [(p.x, p.y) if isinstance(p, ProjectiveLine) else tuple(p) for p in (p1, p2, p3, p4)]
    pts = [tuple(c if isinstance(c, QuadSurd) else frac(c) for c in p) for p in pts]
    for a, b in combinations(pts, 2):
        if _det(a, b) == 0:
            raise CoincidentPoints("cross-ratio needs four pairwise distinct points")
    num = _det(pts[0], pts[2]) * _det(pts[1], pts[3])
    den = _det(pts[0], pts[3]) * _det(pts[1], pts[2])
    if den == 0:
        return INFINITE
    return num / den


def normal_lines(quad: LabeledQuadrilateral) -> list[ProjectiveLine]:
    out = []
    for u in quad.normals:
        line = ProjectiveLine.of(u)
        if line not in out:
            out.append(line)
    return out


def lattice_witness(p1, p2, p3=None) -> tuple:
    """Integer matrix A (gcd 1) with A P1 = [1:0], A P2 = [0:1], A P3 = [1:1].

    Without P3 (a parallelogram has two normal lines) only the first two
    conditions are imposed.
    """
    v1, v2 = ((frac(p.x), frac(p.y)) for p in map(ProjectiveLine.of, (p1, p2)))
    m = ((v1[0], v2[0]), (v1[1], v2[1]))
    if p3 is None:
        lam = mu = Fraction(1)
    else:
        # columns λ v1, μ v2 with λ v1 + μ v2 = v3
        p3 = ProjectiveLine.of(p3)
        lam, mu = mat_vec(inv2(m), (frac(p3.x), frac(p3.y)))
    a = inv2(((lam * v1[0], mu * v2[0]), (lam * v1[1], mu * v2[1])))
    entries = [x for row in a for x in row]
    den = math.lcm(*(x.denominator for x in entries))
    ints = [int(x * den) for x in entries]
    g = math.gcd(*ints)
    ints = [Fraction(x // g) for x in ints]
    return ((ints[0], ints[1]), (ints[2], ints[3]))


def _check_witness(a, lines) -> bool:
    """Each image line must contain a nonzero integer point."""
    for line in lines:
        img = mat_vec(a, (line.x, line.y))
        if img == (ZERO, ZERO):
            return False
        den = math.lcm(img[0].denominator, img[1].denominator)
        pt = (img[0] * den, img[1] * den)
        if any(c.denominator != 1 for c in pt):  # pragma: no cover - den clears both
            return False
    return True


@dataclass(frozen=True)
class RationalityReport:
    rational_type: bool
    cross_ratio: object  # Fraction, INFINITE or None when fewer than four lines
    lattice_witness: tuple | None
    strongly_rational: bool
    lines: tuple = ()

    def to_json(self) -> dict:
        cr = self.cross_ratio
        return {
            "rational_type": self.rational_type,
            "cross_ratio": ("Undefined" if cr is None else "Infinite" if cr == INFINITE else fmt(cr)),
            "lattice_witness": (None if self.lattice_witness is None
                                else [[fmt(x) for x in row] for row in self.lattice_witness]),
            "strongly_rational": self.strongly_rational,
            "normal_lines": [line.to_json() for line in self.lines],
        }


def is_rational_type(quad: LabeledQuadrilateral) -> RationalityReport:
    lines = normal_lines(quad)
    witness = lattice_witness(*lines[:3])
    if not _check_witness(witness, lines):  # pragma: no cover - rational lines always pass
        raise AssertionError("lattice witness failed verification")
    cr = cross_ratio(*lines) if len(lines) == 4 else None
    return RationalityReport(True, cr, witness, is_strongly_rational(quad), tuple(lines))


def is_strongly_rational(quad: LabeledQuadrilateral) -> bool:
    alpha, beta = characteristic_pair(quad)
    return isinstance(alpha, Fraction) and isinstance(beta, Fraction)


# ------------------------------------------------------------ labeled rationality

@dataclass(frozen=True)
class LabeledRationality:
    rational: bool
    p: dict  # positive rationals p_b1, p_a2, p_a1
    cross_ratio: Fraction | None = None

    def to_json(self) -> dict:
        out = {"rational_labeled": self.rational, "p": {k: fmt(v) for k, v in self.p.items()}}
        if self.cross_ratio is not None:
            out["cross_ratio"] = fmt(self.cross_ratio)
        return out


def _span_relation(u0, u1, u2) -> bool:
    """Three pairwise independent rational vectors satisfy an integer relation with nonzero coefficients."""
    ker = nullspace([[u0[0], u1[0], u2[0]], [u0[1], u1[1], u2[1]]], 3)
    return len(ker) == 1 and all(c != 0 for c in ker[0])


def is_rational_labeled(params) -> LabeledRationality:
    """Decide whether the labeled ansatz quadrilateral lies in a lattice.

    Rational inputs always give True (every normal is a rational vector);
    the p-witnesses are returned and checked to be positive.
    """
    if not isinstance(params, (OrthotoricParams, CalabiParams)):
        raise ParseError("expected orthotoric or Calabi parameters")
    if not all(isinstance(v, Fraction) for v in params.as_tuple()):
        raise IrrationalInput("parameters must be exact rationals")
    a1, a2 = params.alphas
    b1, b2 = params.betas
    ca1, ca2, cb1, cb2 = params.cs
    if isinstance(params, OrthotoricParams):
        p = {
            "b1": (b2 - a1) / (a1 - b1) * cb2 / cb1,
            "a2": -(b2 - b1) / (a2 - b1) * cb2 / ca2,
            "a1": (b2 - b1) / (a1 - b1) * cb2 / ca1,
        }
        cr = (b2 - a1) * (a2 - b1) / ((b2 - b1) * (a2 - a1))
    else:
        # the α2 relation carries a minus sign so that p_a2 > 0 under C_a2 < 0
        p = {
            "b1": -cb2 / cb1,
            "a2": -(b2 - b1) * cb2 / (a2 * ca2),
            "a1": (b2 - b1) * cb2 / (a1 * ca1),
        }
        cr = None
    us = [params.normal(f) for f in ("a1", "a2", "b1", "b2")]
    lattice = all(_span_relation(*t) for t in combinations(us, 3)
                  if all(_det(x, y) != 0 for x, y in combinations(t, 2)))
    ok = cb2 > 0 and all(v > 0 for v in p.values()) and lattice
    return LabeledRationality(ok, p, cr)


# ----------------------------------------------------------------- cone R(Δ)

def r_cone_sample(quad: LabeledQuadrilateral, q: Sequence, s=1) -> tuple:
    """A rational labeling r, built from positive rationals q and s."""
    q = [frac(x) for x in q]
    s = frac(s)
    if len(q) != 4 or any(x <= 0 for x in q) or s <= 0:
        raise ParseError("q needs four positive rationals and s must be positive")
    if not is_strongly_rational(quad):  # pragma: no cover - exact input is always strongly rational
        raise NotStronglyRational("quadrilateral is not strongly rational")
    kind = classify(quad).kind
    if kind is Kind.GENERIC:
        alpha, beta = characteristic_pair(quad)
        r = (s * q[0] / beta, alpha * s * q[1] / beta, s * q[2] / (1 - beta), s * q[3])
    elif kind is Kind.TRAPEZOID:
        r = tuple(s * x for x in q)
    else:
        raise ParseError("parallelograms have no ansatz chart")
    params = ansatz_chart(quad).params.with_r(r)
    if not is_rational_labeled(params).rational:  # pragma: no cover - rational closure
        raise AssertionError("sampled labeling is not rational")
    return r


# ----------------------------------------------------------------- interval mode

@dataclass(frozen=True)
class QuadSurd:
    """a + b√d with a, b rational and d a positive non-square integer (or b = 0)."""

    a: Fraction
    b: Fraction = ZERO
    d: int = 2

    def __post_init__(self):
        object.__setattr__(self, "a", frac(self.a))
        object.__setattr__(self, "b", frac(self.b))
        if self.b != 0 and (self.d <= 1 or math.isqrt(self.d) ** 2 == self.d):
            raise ParseError("d must be a positive non-square integer")

    def _lift(self, other) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            if other.b != 0 and self.b != 0 and other.d != self.d:
                raise ParseError("mixed square roots are not supported")
            return other
        return QuadSurd(frac(other), ZERO, self.d)

    def _d(self, other) -> int:
        return other.d if self.b == 0 else self.d

    def __add__(self, other):
        o = self._lift(other)
        return QuadSurd(self.a + o.a, self.b + o.b, self._d(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        d = self._d(o)
        return QuadSurd(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        norm = o.a * o.a - o.b * o.b * o.d
        if norm == 0:
            raise ZeroDivisionError("division by zero surd")
        return self * QuadSurd(o.a / norm, -o.b / norm, o.d)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadSurd):
            return self.a == other.a and self.b == other.b and (self.b == 0 or self.d == other.d)
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d if self.b else 0))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)


class Answer(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", frac(self.lo))
        object.__setattr__(self, "hi", frac(self.hi))
        if self.lo > self.hi:
            raise ParseError("empty interval")

    @classmethod
    def around(cls, value: float, tol: float) -> "Interval":
        """Outward-rounded rational enclosure of [value − tol, value + tol]."""
        lo = Fraction(value - tol) - Fraction(1, 10 ** 15)
        hi = Fraction(value + tol) + Fraction(1, 10 ** 15)
        return cls(lo, hi)


def _slope_vec(s):
    return (ONE, s)


def rational_type_of_slopes(slopes: Sequence) -> Answer:
    """Rational-type query for four normal lines given by slopes.

    Each slope is a Fraction, a QuadSurd or an Interval (the line's slope is
    only known to lie in it).  Exact inputs give Yes/No; intervals give Yes
    only if they are all degenerate, otherwise Unknown.
    """
    if len(slopes) < 4:
        return Answer.YES
    if any(isinstance(s, Interval) for s in slopes):
        if all((not isinstance(s, Interval)) or s.lo == s.hi for s in slopes):
            pts = [s.lo if isinstance(s, Interval) else s for s in slopes]
            return rational_type_of_slopes(pts)
        return Answer.UNKNOWN
    vals = [QuadSurd(frac(s)) if not isinstance(s, QuadSurd) else s for s in slopes]
    cr = cross_ratio(*(_slope_vec(v) for v in vals[:4]))
    if cr == INFINITE:
        return Answer.YES
    if isinstance(cr, QuadSurd):
        return Answer.YES if cr.is_rational else Answer.NO
    return Answer.YES  # pragma: no cover - cr is always a QuadSurd here


def strongly_rational_pair(alpha, beta) -> Answer:
    """Strong rationality from a characteristic pair given exactly or as intervals."""
    vals = (alpha, beta)
    if any(isinstance(v, Interval) and v.lo != v.hi for v in vals):
        return Answer.UNKNOWN
    for v in vals:
        if isinstance(v, QuadSurd) and not v.is_rational:
            return Answer.NO
    return Answer.YES
