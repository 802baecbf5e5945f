import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quadpencil import fixtures, kernels
from quadpencil.forms import QuadraticForm, Subspace, diagonalize, hyperbolic_form, orthogonal_complement, restrict
from quadpencil.local import (
    REAL,
    FoundSmoothLift,
    LocalError,
    LocalPlace,
    NotFoundUpTo,
    WittData,
    hasse_invariant,
    hilbert_symbol,
    isotropic_over_Q,
    local_point_search_intersection,
    rational_point_search,
    splits_m_hyperbolic_global,
    witt_index_local,
)
from quadpencil.oracles import hilbert_oracle, isotropic_oracle, padic_isotropic_vector
from quadpencil.pencil import Pencil, PencilError
from quadpencil.scalars import factor_integer, valuation

PLACES = [REAL, LocalPlace(2), LocalPlace(3), LocalPlace(5), LocalPlace(7)]
nonzero = st.integers(-10 ** 4, 10 ** 4).filter(bool)


def diag(*d):
    return QuadraticForm.diagonal([Fraction(x) for x in d])


def support(*xs):
    ps = {2}
    for x in xs:
        ps |= set(factor_integer(abs(x)))
    return [REAL] + [LocalPlace(p) for p in sorted(ps)]


def test_place_parsing():
    assert LocalPlace.parse("inf") == REAL
    assert LocalPlace.parse("7") == LocalPlace(7)
    assert str(REAL) == "inf"
    with pytest.raises(LocalError):
        LocalPlace.parse("9")


def test_hilbert_properties_seeded():
    rng = random.Random(1)
    for v in PLACES:
        for _ in range(500):
            a, b, c = (rng.choice([-1, 1]) * rng.randint(1, 10 ** 4) for _ in range(3))
            assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
            assert hilbert_symbol(a * c, b, v) == hilbert_symbol(a, b, v) * hilbert_symbol(c, b, v)
            assert hilbert_symbol(a, -a, v) == 1


@given(nonzero, nonzero)
def test_product_formula(a, b):
    out = 1
    for v in support(a, b):
        out *= hilbert_symbol(a, b, v)
    assert out == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(-40, 40).filter(bool), st.integers(-40, 40).filter(bool), st.sampled_from([0, 2, 3, 5, 7]))
def test_hilbert_matches_isotropy_oracle(a, b, p):
    v = REAL if p == 0 else LocalPlace(p)
    assert hilbert_symbol(a, b, v) == hilbert_oracle(a, b, p)


def test_hilbert_rejects_zero():
    with pytest.raises(LocalError):
        hilbert_symbol(0, 3, REAL)


def test_hasse_examples():
    for v in PLACES:
        assert hasse_invariant([1] * 6, v) == 1
    assert hasse_invariant([-1, -1], REAL) == -1


def test_hasse_product_formula_seeded():
    rng = random.Random(2)
    for _ in range(200):
        d = [rng.choice([-1, 1]) * rng.randint(1, 200) for _ in range(rng.randint(1, 6))]
        out = 1
        for v in support(*d):
            out *= hasse_invariant(d, v)
        assert out == 1


def test_witt_examples():
    for v in PLACES:
        assert witt_index_local(diag(1, -1), v).witt_index == 1
    for p in (2, 3, 5, 7, 11):
        assert witt_index_local(diag(1, 1, 1, 1, 1), LocalPlace(p)).witt_index >= 1
    w = witt_index_local(diag(1, 1, 1, 1), REAL)
    assert w.witt_index == 0 and w.signature == (4, 0)


def test_witt_degenerate_input_reports_radical():
    w = witt_index_local(diag(1, -1, 0, 0), LocalPlace(3))
    assert w.radical_dim == 2 and w.dim == 2 and w.witt_index == 1


def test_witt_data_json_roundtrip():
    w = witt_index_local(diag(1, 2, -3), LocalPlace(3))
    assert WittData.from_json(w.to_json()) == w


def test_splitting_examples():
    assert splits_m_hyperbolic_global(hyperbolic_form(4), 4)[0]
    ok, why = splits_m_hyperbolic_global(diag(*[1] * 8), 1)
    assert not ok and "inf" in why
    assert splits_m_hyperbolic_global(diag(1, 1, 1, -1, -1, -1, 2, -2), 3)[0]
    ok, why = splits_m_hyperbolic_global(diag(1, -1), 2)
    assert not ok and "exceeds" in why


def test_splitting_degenerate_rejected():
    with pytest.raises(LocalError):
        splits_m_hyperbolic_global(diag(1, 0), 1)


def test_isotropy_examples():
    assert isotropic_over_Q(diag(1, 1, -1))
    assert not isotropic_over_Q(diag(1, 1, 1))
    assert not isotropic_over_Q(diag(1, 1, -3))


def _isotropic_int_vector(d, height):
    """Small integer zero of the diagonal integer form d, or None."""
    n = len(d)
    c = [0] * (n * n)
    for i, x in enumerate(d):
        c[i * n + i] = x
    return kernels.int_point_search(n, c, c, height)


def constructive_split(q, m, height=4):
    """Build m hyperbolic planes from small isotropic vectors; True on success."""
    n = q.dim
    span = []
    for _ in range(m):
        W = orthogonal_complement(q, Subspace.span(n, span)) if span else Subspace.span(n, [[int(i == j) for j in range(n)] for i in range(n)])
        D = diagonalize(restrict(q, W))
        cols = [j for j, x in enumerate(D.diagonal) if x]
        entries = [D.diagonal[j] for j in cols]
        den = 1
        for x in entries:
            den = den * x.denominator
        x = _isotropic_int_vector([int(e * den) for e in entries], height)
        if x is None:
            return False
        # back to ambient coordinates
        B = W.basis_matrix()
        C = D.matrix()
        w = [sum(C[i][cols[k]] * x[k] for k in range(len(cols))) for i in range(len(C))]
        v = [sum(B[r][i] * w[i] for i in range(len(w))) for r in range(n)]
        assert q(v) == 0
        span.append(v)
    return True


@pytest.mark.parametrize("q,m", [
    (hyperbolic_form(4), 4),
    (diag(1, 1, 1, -1, -1, -1, 2, -2), 3),
    (diag(1, -1, 2, -2), 2),
    (diag(1, 1, -1, 3, -3), 2),
])
def test_constructive_search_agrees(q, m):
    built = constructive_split(q, m)
    ok, _ = splits_m_hyperbolic_global(q, m)
    assert built and ok


def test_constructive_failure_is_consistent():
    # positive definite: no small isotropic vector and the predicate says no
    assert not constructive_split(diag(1, 2, 3, 5), 1)
    assert not splits_m_hyperbolic_global(diag(1, 2, 3, 5), 1)[0]


def test_perturbation_stability():
    rng = random.Random(6)
    cases = [(diag(1, -1, 2, -2, 3, -3, 5, -5), p) for p in (3, 5, 7)] + [(hyperbolic_form(4), 3), (diag(1, 1, 1, -1, -1, -1, 2, -2), 5)]
    for q, p in cases:
        v = LocalPlace(p)
        base = witt_index_local(q, v).witt_index
        det_val = sum(valuation(x, p) for x in diagonalize(q).diagonal)
        N = det_val + 3
        for _ in range(10):
            n = q.dim
            E = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    E[i][j] = E[j][i] = rng.randint(-5, 5) * p ** N
            q2 = QuadraticForm([[a + b for a, b in zip(r, s)] for r, s in zip(q.gram, E)])
            assert witt_index_local(q2, v).witt_index == base


def test_padic_vector_is_nearly_isotropic():
    x = padic_isotropic_vector([1, 1, 1, 1, 1], 2)
    assert x is not None and valuation(sum(a * a for a in x), 2) >= 24
    # the quaternion norm form is anisotropic exactly at 2 and infinity
    assert padic_isotropic_vector([1, 1, 1, 1], 2) is None
    assert padic_isotropic_vector([1, 1, 1, 1], 3) is not None
    assert isotropic_oracle([1, 1, -3], 3) is False


def test_local_search_finds_smooth_lift():
    F = QuadraticForm.from_polynomial({(0, 1): 1, (2, 3): 1, (4, 5): 1, (6, 7): 1}, 8)
    G = QuadraticForm.from_polynomial({(0, 1): 1, (2, 3): -1, (4, 5): 2, (6, 7): 3}, 8)
    res = local_point_search_intersection(Pencil(F, G), 5)
    assert isinstance(res, FoundSmoothLift) and res.modulus == 625
    C = [list(r) for r in F.gram], [list(r) for r in G.gram]
    for M in C:
        val = sum(M[i][j] * res.point[i] * res.point[j] for i in range(8) for j in range(8))
        assert val % 625 == 0


def test_local_search_inconclusive():
    # F = x0^2 + x1^2, G = x2^2 + x3^2 in 8 variables: over F_3 every zero is singular
    F = diag(1, 1, 0, 0, 0, 0, 0, 0)
    G = diag(0, 0, 1, 1, 0, 0, 0, 0)
    res = local_point_search_intersection(Pencil(F, G), 3)
    assert isinstance(res, NotFoundUpTo)
    assert res.to_json()["status"] == "inconclusive"


def test_local_search_guards():
    P = fixtures.regular()
    with pytest.raises(LocalError, match="precision too large"):
        local_point_search_intersection(P, 5, 40)
    with pytest.raises(LocalError):
        local_point_search_intersection(P, 6)
    with pytest.raises(PencilError):
        Pencil(diag(1, 1), diag(1, 1))


def test_rational_search():
    x = rational_point_search(fixtures.four_rank6(), 1)
    assert x is not None
    P = fixtures.four_rank6()
    assert P.F(list(x)) == 0 and P.G(list(x)) == 0
    assert rational_point_search(fixtures.obstruction_example(), 10) is None
    with pytest.raises(LocalError):
        rational_point_search(P, 0)
