import random
from fractions import Fraction

import pytest

from quadpencil import fixtures
from quadpencil.forms import QuadraticForm, Subspace, mat_rank, rank, restrict
from quadpencil.geometry import (
    Degenerate,
    Gauche,
    GeometryError,
    ProjPoint,
    cone_section,
    conjugate_singular_lines,
    dual_quadric,
    enumerate_points_Fq,
    is_smooth,
    isotropic_subspace_Fq,
    quadrilateral_check,
    smooth_quadric_count,
    tangent_restriction_rank,
    tangent_space,
    witt_index_fq,
)
from quadpencil.pencil import Pencil, classify
from quadpencil.scalars import FiniteField
from quadpencil.verify import random_form_Fq, random_smooth_pair, tangency_mismatches


def diag(*d):
    return QuadraticForm.diagonal([Fraction(x) for x in d])


def fq_diag(K, *d):
    return QuadraticForm.diagonal([K.elem(c % K.p) for c in d], K)


# a Regular pencil with a small rational point
REG = Pencil(diag(3, -3, 3, -1, 2, 1, -3, 1), diag(-3, -5, -1, -3, 5, -3, -2, -5))
REG_POINT = ProjPoint.of((0, 0, 0, 0, 1, -1, -1, 0))


def test_projpoint_canonical():
    p = ProjPoint.of((0, 2, 4))
    assert p.coords == (0, 1, 2) and all(isinstance(c, Fraction) for c in p.coords)
    with pytest.raises(GeometryError):
        ProjPoint.of((0, 0))


def test_tangent_space_smooth_point():
    assert classify(REG).tag == "Regular"
    T = tangent_space(REG, REG_POINT)
    assert T.projective_dim == 5
    assert T.contains(list(REG_POINT.coords))


def test_tangent_space_errors():
    P = fixtures.four_rank6()
    with pytest.raises(GeometryError, match="singular point"):
        tangent_space(P, ProjPoint.of((1, 0, 0, 0, 0, 0, 0, 0)))
    with pytest.raises(GeometryError, match="not on X"):
        tangent_space(P, ProjPoint.of((1, 1, 0, 0, 0, 0, 0, 0)))
    T = tangent_space(P, ProjPoint.of((1, 1, 1, -2, 1, 1, 0, 0)))
    assert T.dim == 6


def test_tangent_space_functorial():
    M = [[Fraction(int(i == j) + (1 if j == i + 1 else 0)) for j in range(8)] for i in range(8)]
    Q = REG.change_variables(M)
    # x on Q  <=>  M x on REG; solve M x = p by back substitution (M is unipotent upper)
    p = list(REG_POINT.coords)
    x = [Fraction(0)] * 8
    for i in range(7, -1, -1):
        x[i] = p[i] - (x[i + 1] if i < 7 else 0)
    Minv_pt = ProjPoint.of(x)
    T1 = tangent_space(Q, Minv_pt)
    T0 = tangent_space(REG, REG_POINT)
    image = Subspace.span(8, [[sum(M[r][c] * v[c] for c in range(8)) for r in range(8)] for v in T1.basis])
    assert image == T0


def test_dual_quadric_examples():
    B = diag(1, 1, 1, 2)
    D = dual_quadric(diag(1, 1, 1, 1), B)
    assert D == diag(1, 1, 1, Fraction(1, 2))
    with pytest.raises(GeometryError):
        dual_quadric(diag(1, 1), diag(1, 1))
    with pytest.raises(GeometryError):
        dual_quadric(diag(2), diag(1))
    with pytest.raises(GeometryError, match="degenerate"):
        dual_quadric(diag(1, 1), diag(1, 0))


def test_tangency_correspondence_F5_P3():
    rng = random.Random(4)
    K = FiniteField(5)
    A, B = random_smooth_pair(rng, K, 4)
    assert tangency_mismatches(A, B) == []


def test_dual_not_proportional():
    rng = random.Random(5)
    for p in (3, 5):
        K = FiniteField(p)
        for _ in range(10):
            A, B = random_smooth_pair(rng, K, 3)
            D = dual_quadric(A, B)
            if any(A.scale(K.elem(c)) == B for c in range(1, p)):
                continue
            assert not any(A.scale(K.elem(c)) == D for c in range(1, p))


def test_tangent_rank_rank8_member():
    for lam, mu in ((1, 0), (0, 1), (1, 1), (2, -1)):
        q = REG.member(lam, mu)
        if rank(q) == 8:
            assert tangent_restriction_rank(REG, REG_POINT, (lam, mu)) >= 4


def smooth_sample(F, G, k, rng):
    pts = enumerate_points_Fq([F, G])
    rng.shuffle(pts)
    out = [x for x in pts[:50 * k] if is_smooth((F, G), x)][:k]
    assert len(out) == k
    return out


def test_tangent_rank_regular_over_F7():
    K = FiniteField(7)
    P = fixtures.regular()
    F, G = P.F.reduce_mod(K), P.G.reduce_mod(K)
    for x in smooth_sample(F, G, 5, random.Random(3)):
        best = max(tangent_restriction_rank((F, G), x, (K.one(), K.elem(c))) for c in range(7))
        assert best >= 5


def test_tangent_rank_degree_two_relation():
    # G = B with B^2 = 1 relative to F = identity: every smooth point gives rank <= 4
    K = FiniteField(5)
    F = fq_diag(K, *[1] * 8)
    G = fq_diag(K, 1, 1, 1, 1, -1, -1, -1, -1)
    for x in smooth_sample(F, G, 10, random.Random(1)):
        assert tangent_restriction_rank((F, G), x, (K.zero(), K.one())) <= 4


def test_cone_section_regular():
    C = cone_section(REG, REG_POINT)
    assert max(C.ranks) >= 5
    f, g = C.base_forms
    assert (rank(f), rank(g)) == C.ranks
    assert f.dim == 5
    # P kills the tangent space for both forms: the cone vertex
    x = list(REG_POINT.coords)
    for q in (REG.F, REG.G):
        assert all(q.bilinear(x, list(v)) == 0 for v in C.tangent.basis)
    assert not C.complement.contains(x)


def test_cone_section_non_generic():
    with pytest.raises(GeometryError, match="non-generic"):
        cone_section(fixtures.four_rank6(), ProjPoint.of((1, 0, 1, 0, 0, 0, 0, 0)))


def test_enumeration_examples():
    K = FiniteField(3)
    xy = QuadraticForm([[K.zero(), K.elem(2)], [K.elem(2), K.zero()]], K)  # x0 x1
    assert len(enumerate_points_Fq(xy)) == 2
    assert len(enumerate_points_Fq(fq_diag(K, 1, 1, 1))) == 4


def test_enumeration_cost_guard():
    K = FiniteField(101)
    with pytest.raises(GeometryError, match="enumeration too large"):
        enumerate_points_Fq(fq_diag(K, *[1] * 5))


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_smooth_quadric_counts(p, n):
    K = FiniteField(p)
    rng = random.Random(p * 10 + n)
    for _ in range(5):
        q = random_form_Fq(rng, K, n)
        if rank(q) < n:
            continue
        assert len(enumerate_points_Fq(q)) == smooth_quadric_count(q)


def test_isotropic_subspace_examples():
    K = FiniteField(3)
    hyper = QuadraticForm([[K.elem(c) for c in r] for r in ([0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0])], K)
    V = isotropic_subspace_Fq(hyper, 0)
    assert V is not None and hyper(list(V.basis[0])) == K.zero()
    assert isotropic_subspace_Fq(fq_diag(K, 1, 1), 0) is None


def test_isotropic_subspace_avoids_radical():
    K = FiniteField(3)
    for d in ((1, 1, 1, 1, 1, 1, 0, 0), (1, 2, 1, 2, 1, 2, 0, 0), (1, 1, 1, 1, 1, 2, 0, 0)):
        q = fq_diag(K, *d)
        V = isotropic_subspace_Fq(q, 2)
        assert (V is not None) == (witt_index_fq(q) >= 3)
        if V is not None:
            assert rank(restrict(q, V)) == 0
            for v in V.basis:
                assert any(v[i] != K.zero() for i in range(6))


def test_quadrilateral_conjugate_pair():
    P = fixtures.conjugate_rank6_pair()
    L1, L2 = conjugate_singular_lines(P)
    res = quadrilateral_check(P, L1, L2)
    assert isinstance(res, Gauche)
    assert res.to_json()["tag"] == "Gauche"


def test_quadrilateral_line_in_X():
    P = fixtures.four_rank6()
    L1 = Subspace(8, [[1, 0, 0, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0, 0, 0]])
    L2 = Subspace(8, [[0, 0, 0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0]])
    assert quadrilateral_check(P, L1, L2) == Degenerate("line contained in X")


def test_quadrilateral_double_point():
    P = Pencil(diag(1, 0, 1, -1), diag(0, 0, 1, 2))
    L1 = Subspace(4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    L2 = Subspace(4, [[0, 0, 1, 0], [0, 0, 0, 1]])
    assert quadrilateral_check(P, L1, L2) == Degenerate("coincident points")


def test_quadrilateral_intersecting_lines():
    P = fixtures.regular()
    L1 = Subspace(8, [[1, 0, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0]])
    L2 = Subspace(8, [[1, 0, 0, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0, 0, 0]])
    with pytest.raises(GeometryError, match="lines intersect"):
        quadrilateral_check(P, L1, L2)


def test_isotropic_subspace_avoids_radical():
    K = FiniteField(3)
    q = QuadraticForm.diagonal([K.elem(c) for c in (0, 1, 2, 0, 1, 2)], K)
    V = isotropic_subspace_Fq(q, 1)
    assert V is not None and V.dim == 2
    R = restrict(q, V)
    assert R.is_zero()
    # no basis vector combination lies in the radical (coords 0 and 3)
    M = [[v[i] for i in (1, 2, 4, 5)] for v in V.basis]
    assert mat_rank(M) == 2
    assert isotropic_subspace_Fq(q, 2) is None
