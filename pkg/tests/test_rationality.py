import itertools
import random
from fractions import Fraction as F

import pytest

from conftest import normal_form_quad, rand_generic, rand_trapezoid
from quadrex.errors import CoincidentPoints, IrrationalInput
from quadrex.polytope import CalabiParams, OrthotoricParams, ansatz_chart, chart_of
from quadrex.rationality import (
    INFINITE, Answer, Interval, ProjectiveLine, QuadSurd, cross_ratio, is_rational_labeled,
    is_rational_type, is_strongly_rational, lattice_witness, r_cone_sample, rational_type_of_slopes,
    strongly_rational_pair,
)
from quadrex.exact import mat_vec


def orbit(r):
    return {r, 1 / r, 1 - r, 1 / (1 - r), r / (r - 1), (r - 1) / r}


def rand_lines(rng, k=4):
    out = []
    while len(out) < k:
        v = (F(rng.randint(-9, 9), rng.randint(1, 5)), F(rng.randint(-9, 9), rng.randint(1, 5)))
        if v == (0, 0):
            continue
        line = ProjectiveLine.of(v)
        if line not in out:
            out.append(line)
    return out


def test_projective_line_normalized():
    assert ProjectiveLine.of((F(2, 3), F(-4, 3))) == ProjectiveLine.of((-1, 2))
    line = ProjectiveLine.of((6, -9))
    assert (line.x, line.y) in ((2, -3), (-2, 3))


def test_cross_ratio_normalization():
    for t in (F(3), F(-2, 7), F(5, 11)):
        assert cross_ratio((1, 0), (0, 1), (1, 1), (t, 1)) == t
    assert cross_ratio((1, 0), (0, 1), (1, 1), (1, 3)) == F(1, 3)
    with pytest.raises(CoincidentPoints):
        cross_ratio((1, 0), (2, 0), (1, 1), (1, 2))


def test_cross_ratio_orthotoric_formula(rng):
    for _ in range(20):
        b1 = F(rng.randint(-9, 0))
        b2 = b1 + F(rng.randint(1, 9), 4)
        a1 = b2 + F(rng.randint(1, 9), 4)
        a2 = a1 + F(rng.randint(1, 9), 4)
        p = OrthotoricParams(a1, a2, b1, b2, 1, -1, -1, 1)
        lines = [p.normal(f) for f in ("b1", "b2", "a1", "a2")]
        printed = (b2 - a1) * (a2 - b1) / ((b2 - b1) * (a2 - a1))
        r = cross_ratio(*lines)
        assert printed in orbit(r)
        assert 1 / (1 - r) == printed


def test_cross_ratio_invariant_under_gl2(rng):
    for _ in range(100):
        lines = rand_lines(rng)
        while True:
            m = tuple(tuple(F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(2)) for _ in range(2))
            if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
                break
        moved = [mat_vec(m, (l.x, l.y)) for l in lines]
        assert cross_ratio(*lines) == cross_ratio(*moved)


def test_permutation_orbit(rng):
    for _ in range(50):
        lines = rand_lines(rng)
        r = cross_ratio(*lines)
        values = {cross_ratio(*perm) for perm in itertools.permutations(lines)}
        if r == INFINITE:
            continue
        assert values <= orbit(r) | {INFINITE}


def test_lattice_witness(rng):
    for _ in range(100):
        lines = rand_lines(rng)
        a = lattice_witness(*lines[:3])
        assert all(x.denominator == 1 for row in a for x in row)
        imgs = [mat_vec(a, (l.x, l.y)) for l in lines]
        assert imgs[0][1] == 0 and imgs[1][0] == 0 and imgs[2][0] == imgs[2][1]
        assert all(img != (0, 0) for img in imgs)
        assert rational_type_of_slopes([l.y / l.x if l.x else F(10 ** 9) for l in lines]) is Answer.YES


def test_rational_type_examples(rng):
    for _ in range(20):
        rep = is_rational_type(rand_trapezoid(rng))
        assert rep.rational_type and rep.cross_ratio is None and len(rep.lines) == 3
    rep = is_rational_type(normal_form_quad(2, F(1, 2)))
    assert rep.rational_type and F(-2) in orbit(rep.cross_ratio)
    sq = is_rational_type(normal_form_quad(1, 1))
    assert sq.rational_type and len(sq.lines) == 2 and sq.lattice_witness is not None


def test_interval_mode():
    s2 = QuadSurd(0, 1, 2)
    assert rational_type_of_slopes([F(0), F(1), F(-1), s2]) is Answer.NO
    assert rational_type_of_slopes([s2, s2 + 1, s2 + 2, s2 + 5]) is Answer.YES  # translation keeps it rational
    assert rational_type_of_slopes([F(0), F(1), F(2), Interval(F(3), F(31, 10))]) is Answer.UNKNOWN
    assert rational_type_of_slopes([F(0), F(1), F(2), Interval(F(3), F(3))]) is Answer.YES
    assert strongly_rational_pair(s2 + 1, F(1, 2)) is Answer.NO
    assert strongly_rational_pair(Interval(2, 3), F(1, 2)) is Answer.UNKNOWN
    assert strongly_rational_pair(F(2), F(1, 2)) is Answer.YES


def test_strongly_rational(rng):
    for _ in range(20):
        assert is_strongly_rational(rand_generic(rng))
    assert is_strongly_rational(normal_form_quad(1, 1))


def test_rational_labeled():
    p = OrthotoricParams(1, 2, -3, 0, 1, -1, -1, 1)
    lab = is_rational_labeled(p)
    assert lab.rational and all(v > 0 for v in lab.p.values())
    c = CalabiParams(1, 2, 0, 1, 2, -1, -1, 1)
    assert is_rational_labeled(c).rational
    bad = OrthotoricParams(1, 2, -3, 0, 1, -1, -1, 1)
    object.__setattr__(bad, "alpha2", 2.5)
    with pytest.raises(IrrationalInput):
        is_rational_labeled(bad)


def test_r_cone_sample(rng):
    for make in (rand_generic, rand_trapezoid):
        for _ in range(10):
            q = make(rng)
            qs = [F(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(4)]
            r = r_cone_sample(q, qs, F(3, 2))
            params = ansatz_chart(q).params.with_r(r)
            assert is_rational_labeled(params).rational
            if make is rand_trapezoid:
                assert r[2:] == (F(3, 2) * qs[2], F(3, 2) * qs[3])
