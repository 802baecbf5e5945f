import random
from fractions import Fraction

import pytest

from quadpencil import fixtures
from quadpencil.forms import QuadraticForm, direct_sum, mat_det, signature
from quadpencil.pencil import (
    Pencil,
    PencilError,
    char_poly,
    check_decomposition,
    classify,
    four_rank6_decompose,
    has_member_of_rank_at_most,
    mordell_sweep,
    singular_members,
)
from quadpencil.scalars import Poly, factor_over_Q
from quadpencil.verify import random_pencil, structured_pencil

t = Poly.x()


def diag(*d):
    return QuadraticForm.diagonal([Fraction(x) for x in d])


def test_proportional_forms_rejected():
    with pytest.raises(PencilError):
        Pencil(diag(*[1] * 8), diag(*[1] * 8))
    with pytest.raises(PencilError):
        Pencil(diag(1, 2), diag(2, 4))


def test_dimension_mismatch_rejected():
    with pytest.raises(PencilError):
        Pencil(diag(1, 2), diag(1, 2, 3))


def test_char_poly_regular():
    chi, rg = char_poly(fixtures.regular())
    want = Poly.from_ints([1])
    for i in range(1, 9):
        want = want * Poly.from_ints([1, i])
    assert chi == want and rg == 8


def test_char_poly_obstruction_example():
    chi, _ = char_poly(fixtures.obstruction_example())
    want = t * t
    for b in (2, 3, 4, 5, 6, 7):
        want = want * Poly.from_ints([1, b])
    assert chi == want


def test_singular_members_regular():
    ms = singular_members(fixtures.regular())
    assert len(ms) == 8
    assert all((m.multiplicity, m.rank, m.degree) == (1, 7, 1) for m in ms)


def test_singular_members_obstruction_example():
    ms = singular_members(fixtures.obstruction_example())
    at0 = [m for m in ms if m.factor == t]
    assert len(at0) == 1 and at0[0].multiplicity == 2 and at0[0].rank == 6


def test_singular_members_four_rank6():
    ms = singular_members(fixtures.four_rank6())
    assert len(ms) == 4
    assert all((m.multiplicity, m.rank) == (2, 6) for m in ms)


def test_member_at_infinity():
    P = Pencil(diag(1, 2, 3), diag(1, 1, 0))
    ms = singular_members(P)
    inf = [m for m in ms if m.at_infinity]
    assert len(inf) == 1 and inf[0].rank == 2 and inf[0].multiplicity == 1


@pytest.mark.parametrize("tag", sorted(fixtures.TAXONOMY))
def test_taxonomy_fixtures(tag):
    assert classify(fixtures.TAXONOMY[tag]()).tag == tag


def test_other_dimensions_out_of_taxonomy():
    c = classify(Pencil(diag(1, 1, 1, 1), diag(1, 2, 3, 4)))
    assert c.tag == "Regular" and c.out_of_taxonomy
    c = classify(Pencil(diag(1, 0, 0, 0, 1), diag(1, 2, 3, 4, 5)))
    assert c.tag == "LowRankMember"


def test_classify_json_roundtrip():
    from quadpencil.pencil import PencilClass
    c = classify(fixtures.obstruction_example())
    assert PencilClass.from_json(c.to_json()) == c


def test_rank_multiplicity_random():
    rng = random.Random(21)
    for i in range(30):
        n = rng.randint(4, 8)
        P = structured_pencil(rng, n) if i % 2 else random_pencil(rng, n)
        ms = singular_members(P)
        chi, _ = char_poly(P)
        for m in ms:
            assert m.multiplicity >= n - m.rank
        assert sum(m.multiplicity * m.degree for m in ms) <= n


def test_structured_pencils_have_high_corank():
    rng = random.Random(4)
    seen = max(P.dim - m.rank for P in (structured_pencil(rng, 6) for _ in range(10)) for m in singular_members(P))
    assert seen >= 2


def test_classify_invariant_under_swap_and_reparametrization():
    rng = random.Random(8)
    mats = [(1, 1, 0, 1), (2, 1, 1, 1), (1, 0, 3, 1), (0, 1, 1, 0), (1, -1, 1, 0)]
    for make in fixtures.TAXONOMY.values():
        P = make()
        tag = classify(P).tag
        assert classify(P.swapped()).tag == tag
        for a, b, c, d in rng.sample(mats, 3):
            assert classify(P.reparametrize(a, b, c, d)).tag == tag


def test_has_member_of_rank_at_most():
    assert has_member_of_rank_at_most(fixtures.rank_at_most5(), 5)
    assert not has_member_of_rank_at_most(fixtures.obstruction_example(), 5)
    assert has_member_of_rank_at_most(fixtures.obstruction_example(), 6)
    assert not has_member_of_rank_at_most(fixtures.regular(), 6)


def test_sweep_immediate_hit():
    P = Pencil(diag(1, 1, 1, 1, -1, -1, -1, -1), diag(1, 2, 3, 4, 5, 6, 7, 8))
    r = mordell_sweep(P)
    assert (r.lam, r.mu) == (1, 0) and r.signature == (4, 4)


def test_sweep_regular():
    r = mordell_sweep(fixtures.regular())
    pos, neg = r.signature
    assert abs(pos - neg) <= 2 and pos + neg == 8
    assert signature(fixtures.regular().member(r.lam, r.mu)) == r.signature


def test_sweep_antipodal():
    P = fixtures.regular()
    Q = Pencil(P.F.scale(-1), P.G.scale(-1))
    a, b = mordell_sweep(P), mordell_sweep(Q)
    assert signature(Q.member(a.lam, a.mu)) == tuple(reversed(a.signature))
    assert abs(b.signature[0] - b.signature[1]) <= 2


def test_sweep_precondition():
    with pytest.raises(PencilError, match="rank <= 5"):
        mordell_sweep(fixtures.rank_at_most5())


def test_sweep_random_pencils():
    rng = random.Random(30)
    done = 0
    while done < 5:
        P = random_pencil(rng, 8)
        if has_member_of_rank_at_most(P, 5):
            continue
        done += 1
        pos, neg = mordell_sweep(P).signature
        assert abs(pos - neg) <= 2 and pos + neg == 8


def test_four_rank6_normal_form():
    P = fixtures.four_rank6()
    dec = four_rank6_decompose(P)
    assert check_decomposition(P, dec) == (True, "")
    coord_pairs = sorted(tuple(i for i in range(8) if any(v[i] for v in V.basis)) for V in dec.eigenspaces)
    assert coord_pairs == [(0, 1), (2, 3), (4, 5), (6, 7)]
    for phi in dec.induced_forms:
        assert phi.gram[0][0] == 0 and phi.gram[1][1] == 0 and phi.gram[0][1] != 0
    assert len(set(dec.scalars)) == 4


def test_four_rank6_conjugated():
    rng = random.Random(9)
    P0 = fixtures.four_rank6()
    while True:
        M = [[Fraction(rng.randint(-2, 2)) for _ in range(8)] for _ in range(8)]
        if mat_det(M):
            break
    P = P0.change_variables(M)
    assert classify(P).tag == "FourRank6"
    dec = four_rank6_decompose(P)
    assert check_decomposition(P, dec)[0]
    assert all(V.dim == 2 for V in dec.eigenspaces)


def test_four_rank6_irrational_roots():
    # blocks with det(f + t g) = -(1 + t^2) and 2 - t^2: rank-6 members at +-i, +-sqrt2
    f, g = [[1, 0], [0, -1]], [[0, 1], [1, 0]]
    f2 = [[1, 0], [0, 2]]
    F = direct_sum(*(QuadraticForm(m) for m in (f, f, f2, f2)))
    G = direct_sum(*(QuadraticForm(g) for _ in range(4)))
    P = Pencil(F, G)
    assert classify(P).tag == "FourRank6"
    dec = four_rank6_decompose(P)
    assert dec.field.degree == 4
    assert check_decomposition(P, dec)[0]


def test_four_rank6_guard():
    with pytest.raises(PencilError):
        four_rank6_decompose(fixtures.regular())


def test_degenerate_pencil_chi_zero():
    chi, _ = char_poly(fixtures.degenerate())
    assert chi.is_zero()
    assert factor_over_Q(Poly.from_ints([2])) == []
