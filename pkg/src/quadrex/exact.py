"""Small exact-arithmetic toolkit built on :class:`fractions.Fraction`.

Polynomials are coefficient lists in descending degree, matching
``numpy.polyval``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import ParseError

Vec2 = tuple[Fraction, Fraction]


def frac(value) -> Fraction:
    """Coerce an int, Fraction, decimal string or ``"p/q"`` string to Fraction.

    Floats are refused: every geometric input is meant to be exact.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse {value!r} as a rational") from exc
    raise ParseError(f"expected an exact rational, got {type(value).__name__} {value!r}")


def vec(p) -> Vec2:
    if len(p) != 2:
        raise ParseError(f"expected a pair, got {p!r}")
    return (frac(p[0]), frac(p[1]))


def fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def cross(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def sub(u: Sequence, v: Sequence) -> Vec2:
    return (u[0] - v[0], u[1] - v[1])


def mat_vec(m, v) -> tuple:
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, c) for c in cols) for row in a)


def transpose(m) -> tuple:
    return tuple(tuple(r) for r in zip(*m))


def det2(m) -> Fraction:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def inv2(m) -> tuple:
    d = det2(m)
    if d == 0:
        raise ZeroDivisionError("singular 2x2 matrix")
    return ((m[1][1] / d, -m[0][1] / d), (-m[1][0] / d, m[0][0] / d))


def solve(matrix, rhs) -> list[Fraction]:
    """Solve a square system exactly by Gauss-Jordan elimination."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def inverse(matrix) -> list[list[Fraction]]:
    n = len(matrix)
    cols = [solve(matrix, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def nullspace(rows: Sequence[Sequence], n: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}`` in Q^n (reduced row echelon form)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][free]
        basis.append(v)
    return basis


# polynomials, descending coefficients

def poly_trim(p: Sequence) -> list:
    p = list(p)
    while len(p) > 1 and p[0] == 0:
        p.pop(0)
    return p


def poly_mul(p: Sequence, q: Sequence) -> list:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_add(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    p = [0] * (n - len(p)) + list(p)
    q = [0] * (n - len(q)) + list(q)
    return [a + b for a, b in zip(p, q)]


def poly_scale(p: Sequence, c) -> list:
    return [c * a for a in p]


def poly_eval(p: Sequence, t):
    acc = 0 * t
    for a in p:
        acc = acc * t + a
    return acc


def poly_der(p: Sequence) -> list:
    n = len(p) - 1
    if n == 0:
        return [Fraction(0)]
    return [a * (n - i) for i, a in enumerate(p[:-1])]


def pad(p: Sequence, length: int) -> list:
    """Left-pad with zeros so the list has ``length`` entries."""
    p = poly_trim(p)
    if len(p) > length:
        raise ValueError(f"polynomial of degree {len(p) - 1} does not fit in {length} slots")
    return [Fraction(0)] * (length - len(p)) + list(p)


@dataclass(frozen=True)
class AffineMap:
    """``x -> matrix @ x + shift`` with exact entries."""

    matrix: tuple
    shift: Vec2

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(frac(x) for x in row) for row in self.matrix))
        object.__setattr__(self, "shift", tuple(frac(x) for x in self.shift))

    def __call__(self, p) -> Vec2:
        return tuple(a + b for a, b in zip(mat_vec(self.matrix, p), self.shift))

    def then(self, other: "AffineMap") -> "AffineMap":
        """Composition ``other o self``."""
        m = mat_mul(other.matrix, self.matrix)
        return AffineMap(m, other(self.shift))

    def inverse(self) -> "AffineMap":
        mi = inv2(self.matrix)
        s = mat_vec(mi, self.shift)
        return AffineMap(mi, (-s[0], -s[1]))

    def push_normal(self, u) -> Vec2:
        """Normals transform by the inverse transpose so that labels are preserved."""
        mi = inv2(self.matrix)
        return (mi[0][0] * u[0] + mi[1][0] * u[1], mi[0][1] * u[0] + mi[1][1] * u[1])

    @staticmethod
    def identity() -> "AffineMap":
        one, zero = Fraction(1), Fraction(0)
        return AffineMap(((one, zero), (zero, one)), (zero, zero))

    def to_json(self) -> dict:
        return {
            "matrix": [[fmt(x) for x in row] for row in self.matrix],
            "shift": [fmt(x) for x in self.shift],
        }


def as_fractions(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(frac(v) for v in values)
