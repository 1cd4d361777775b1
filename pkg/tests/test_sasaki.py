from fractions import Fraction as F

import pytest

from conftest import GENERIC
from quadrex.cones import labeled, sample
from quadrex.errors import NotFourFacets, NotGood, ReebOutsideDual
from quadrex.polytope import characteristic_pair, classify
from quadrex.sasaki import (
    GoodCone3, ReebVector, cone_lift_check, csc_sasaki_check, default_basis, load_cone, transversal,
    transversal_polytope,
)

PRISM = [(1, 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, 1)]


def cone_over(quad):
    """Cone {x0 > 0, x'/x0 in quad} with normals (−λ_i, u_i)."""
    normals = [(-lam, u[0], u[1]) for lam, u in zip(quad.support, quad.normals)]
    return GoodCone3.from_normals(normals, check_good=False)


def test_prism_square():
    cone = GoodCone3.from_normals(PRISM)
    assert cone.good
    quad = transversal_polytope(cone, ReebVector((0, 0, 1)))
    assert sorted(quad.vertices) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert sorted(quad.normals) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    check = csc_sasaki_check(cone, ReebVector((0, 0, 1)))
    assert check.verdict.status == "Stable" and check.zeta == (8, 0, 0)
    assert check.zeta_constant and check.degree_bound


def test_non_constant_zeta_flag():
    cone = GoodCone3.from_normals(PRISM)
    check = csc_sasaki_check(cone, ReebVector((1, 2, 5)))
    if not check.zeta_constant:
        assert check.degree_bound is None
    assert check.verdict.status in ("Stable", "Unstable", "NotEquipoised")


def test_chart_independence():
    cone = GoodCone3.from_normals(PRISM)
    b = ReebVector((1, 1, 4))
    q1 = transversal_polytope(cone, b)
    q2 = transversal_polytope(cone, b, ((0, 1, 0), (1, 0, 0)))
    q3 = transversal_polytope(cone, b, ((1, -1, 0), (0, 1, -1)))
    assert classify(q1).kind == classify(q2).kind == classify(q3).kind
    assert characteristic_pair(q1) == characteristic_pair(q2) == characteristic_pair(q3)


def test_gl3z_equivariance():
    # normals and the Reeb vector live in the same lattice, so both move by N
    n = ((1, 1, 0), (0, 1, 0), (2, 0, 1))  # det 1
    act = lambda v: tuple(sum(n[i][k] * v[k] for k in range(3)) for i in range(3))
    b = (1, 1, 4)
    c1 = GoodCone3.from_normals(PRISM)
    c2 = GoodCone3.from_normals([act(u) for u in PRISM])
    assert c2.good
    q1 = transversal_polytope(c1, ReebVector(b))
    q2 = transversal_polytope(c2, ReebVector(act(b)))
    assert characteristic_pair(q1) == characteristic_pair(q2)
    v1 = csc_sasaki_check(c1, ReebVector(b)).verdict.status
    assert v1 == csc_sasaki_check(c2, ReebVector(act(b))).verdict.status


def test_goodness_counterexample():
    with pytest.raises(NotGood, match="gcd 2"):
        GoodCone3.from_normals([(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)])
    cone = GoodCone3.from_normals([(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)], check_good=False)
    assert not cone.good
    with pytest.raises(NotGood):
        GoodCone3.from_normals([(F(1, 2), 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, 1)])


def test_cone_errors():
    cone = GoodCone3.from_normals(PRISM)
    with pytest.raises(ReebOutsideDual):
        transversal(cone, ReebVector((0, 0, -1)))
    with pytest.raises(NotFourFacets):
        GoodCone3.from_normals(PRISM[:3])
    with pytest.raises(NotFourFacets):
        GoodCone3.from_normals([(1, 0, 0), (2, 0, 0), (-1, 0, 1), (0, -1, 1)])


def test_load_cone():
    cone, b = load_cone({"normals": PRISM, "reeb": [0, 0, 1]})
    assert b.b == (0, 0, 1) and len(cone.rays) == 4


def test_default_basis_unimodular():
    for b in ((0, 0, 1), (1, 1, 4), (3, 1, 2), (2, 5, 7)):
        e1, e2 = default_basis(b)
        from quadrex.sasaki import _det3
        assert _det3(tuple(F(x) for x in b), e1, e2) > 0


def test_transversal_roundtrip_generic():
    quad = labeled(GENERIC, sample(GENERIC, "C", seed=0).r)
    tr = transversal(cone_over(quad), ReebVector((1, 0, 0)))
    assert set(tr.quad.vertices) == set(quad.vertices)
    for p in tr.quad.vertices:
        x = tr.lift(p)
        assert x[0] == 1


def test_cone_lift_structure():
    cone = GoodCone3.from_normals(PRISM)
    tr = transversal(cone, ReebVector((0, 0, 1)))
    res = cone_lift_check(tr, csc_sasaki_check(cone, ReebVector((0, 0, 1))).verdict.polynomials, n=8)
    assert res.b_row_defect < 1e-12
    assert res.homogeneity_defect < 1e-12
    # the lifted operator differs from the transversal one by the constant −6 (see the acceptance notes)
    assert res.offset == pytest.approx(-6, abs=1e-9)
    assert res.offset_spread < 1e-9
