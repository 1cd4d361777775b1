import random
from fractions import Fraction as F

import pytest

from quadrex.exact import AffineMap
from quadrex.polytope import LabeledQuadrilateral


def rand_frac(rng, lo=1, hi=9, den=7):
    return F(rng.randint(lo, hi), rng.randint(1, den))


def rand_affine(rng) -> AffineMap:
    while True:
        m = ((F(rng.randint(-5, 5), rng.randint(1, 4)), F(rng.randint(-5, 5), rng.randint(1, 4))),
             (F(rng.randint(-5, 5), rng.randint(1, 4)), F(rng.randint(-5, 5), rng.randint(1, 4))))
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
            return AffineMap(m, (F(rng.randint(-9, 9), 3), F(rng.randint(-9, 9), 5)))


def normal_form_quad(a, b) -> LabeledQuadrilateral:
    return LabeledQuadrilateral.from_vertices([(0, 0), (1, 0), (a, b), (0, 1)])


def rand_generic(rng) -> LabeledQuadrilateral:
    while True:
        a, b = rand_frac(rng, 1, 12, 5), rand_frac(rng, 1, 12, 5)
        if a + b > 1 and a != 1 and b != 1:
            return normal_form_quad(a, b).transform(rand_affine(rng))


def rand_trapezoid(rng) -> LabeledQuadrilateral:
    while True:
        a = rand_frac(rng, 1, 12, 5)
        if a != 1:
            return normal_form_quad(a, 1).transform(rand_affine(rng))


def rand_parallelogram(rng) -> LabeledQuadrilateral:
    return normal_form_quad(1, 1).transform(rand_affine(rng))


@pytest.fixture
def rng():
    return random.Random(20261016)


GENERIC = LabeledQuadrilateral.from_vertices([(0, 0), (1, 0), (2, F(3, 2)), (0, 1)])
TRAPEZOID = LabeledQuadrilateral.from_vertices([(0, 0), (1, 0), (2, 1), (0, 1)])
SQUARE = LabeledQuadrilateral((((0, 0)), (1, 0), (1, 1), (0, 1)), ((0, 1), (-1, 0), (0, -1), (1, 0)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
