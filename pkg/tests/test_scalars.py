import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quadpencil.scalars import (
    FiniteField,
    NumberField,
    Poly,
    ScalarError,
    as_fraction,
    count_real_roots,
    factor_over_Q,
    format_rat,
    is_square,
    is_square_in_quadratic_field,
    isolate_real_roots,
    square_class,
    sturm_sequence,
)

t = Poly.x()


def P(*cs):
    return Poly.from_ints(cs)


def product(fac, lead):
    out = P(lead)
    for q, e in fac:
        out = out * q ** e
    return out


def test_rational_strings_roundtrip():
    assert format_rat(Fraction(-6, 4)) == "-3/2"
    assert format_rat(Fraction(5)) == "5"
    assert as_fraction("10/4") == Fraction(5, 2)
    with pytest.raises(ScalarError):
        as_fraction("x")
    with pytest.raises(ScalarError):
        as_fraction(True)


def test_factor_difference_of_squares():
    assert factor_over_Q(t * t - P(1)) == [(t - P(1), 1), (t + P(1), 1)]


def test_factor_irreducible_quadratic():
    assert factor_over_Q(t * t + P(1)) == [(t * t + P(1), 1)]


def test_factor_zero_rejected():
    with pytest.raises(ScalarError, match="zero polynomial"):
        factor_over_Q(Poly())


def test_factor_random_products_recompose():
    rng = random.Random(3)
    for _ in range(500):
        f = P(*[rng.randint(-9, 9) for _ in range(rng.randint(1, 17))])
        if f.is_zero():
            continue
        fac = factor_over_Q(f)
        assert product(fac, f.lead) == f
        assert all(q.lead == 1 and q.degree >= 1 for q, _ in fac)


def test_factor_multiplicities():
    f = (t - P(2)) ** 3 * (t * t + P(3)) * P(5)
    assert sorted((q.degree, e) for q, e in factor_over_Q(f)) == [(1, 3), (2, 1)]


def test_poly_json_roundtrip():
    f = P(1, -2) * Poly((Fraction(1, 3), Fraction(0), Fraction(7)))
    assert Poly.from_json(f.to_json()) == f


@pytest.mark.parametrize("x,rep", [(18, 2), (-4, -1), (Fraction(3, 8), 6), (1, 1)])
def test_square_class_over_Q(x, rep):
    assert square_class(x).rep == rep


def test_square_class_zero_rejected():
    with pytest.raises(ScalarError):
        square_class(0)


@given(st.integers(-500, 500).filter(bool), st.integers(-50, 50).filter(bool))
def test_square_class_ignores_squares(x, y):
    assert square_class(x * y * y) == square_class(x)


@given(st.integers(-500, 500).filter(bool))
def test_square_class_idempotent(x):
    c = square_class(x)
    assert square_class(c.rep) == c


def sqrt2_field():
    return NumberField(t * t - P(2))


def test_quadratic_square_examples():
    K = sqrt2_field()
    r = K.gen()
    assert is_square_in_quadratic_field(K(3) + 2 * r)
    assert is_square_in_quadratic_field(K(9))
    # 2 = (sqrt 2)^2 is a square here; 3 is not
    assert is_square_in_quadratic_field(K(2))
    assert not is_square_in_quadratic_field(K(3))
    assert square_class(K(3) + 2 * r).is_trivial()


def test_square_class_degree_guard():
    K = NumberField(t ** 3 - P(2))
    with pytest.raises(ScalarError, match="unsupported residue field degree"):
        square_class(K.gen())


@pytest.mark.parametrize("d", [-1, 2, 5, -7])
def test_squares_are_squares_in_quadratic_fields(d):
    K = NumberField(t * t - P(d))
    rng = random.Random(d)
    for _ in range(200):
        c = K(Fraction(rng.randint(-30, 30), rng.randint(1, 9))) + K(Fraction(rng.randint(-30, 30), rng.randint(1, 9))) * K.gen()
        if not c:
            continue
        assert is_square_in_quadratic_field(c * c)


def test_number_field_rejects_reducible():
    with pytest.raises(ScalarError):
        NumberField(t * t - P(4))


def test_number_field_inverse():
    K = NumberField(t ** 3 - t - P(1))
    a = K.gen() + K(2)
    assert a * a.inverse() == K.one()


def test_isolate_examples():
    two = isolate_real_roots(t * t - P(2))
    assert len(two) == 2
    (a, b), (c, d) = two
    # each interval brackets its root: -sqrt2 in [a, b], sqrt2 in [c, d]
    assert b < c
    assert a < 0 and a * a >= 2 and (b >= 0 or b * b <= 2)
    assert d > 0 and d * d >= 2 and (c <= 0 or c * c <= 2)
    assert isolate_real_roots(t * t + P(1)) == []
    three = isolate_real_roots((t - P(1)) * (t - P(2)) * (t - P(3)))
    assert len(three) == 3
    for (lo, hi), r in zip(three, (1, 2, 3)):
        assert lo <= r <= hi
    for (_, b), (a, _) in zip(three, three[1:]):
        assert b < a


def test_isolate_rejects_repeated_roots():
    with pytest.raises(ScalarError, match="squarefree"):
        isolate_real_roots((t - P(1)) ** 2)


def _grid_sign_changes(f, lo, hi, steps):
    vals = [f(lo + (hi - lo) * Fraction(i, steps)) for i in range(steps + 1)]
    vals = [v for v in vals if v]
    return sum(1 for u, v in zip(vals, vals[1:]) if (u > 0) != (v > 0))


def test_sturm_matches_grid_count():
    rng = random.Random(11)
    for _ in range(40):
        roots = sorted(rng.sample(range(-20, 21), rng.randint(3, 4)))
        f = P(1)
        for r in roots:
            f = f * (t - P(r))
        assert count_real_roots(sturm_sequence(f), Fraction(-21), Fraction(21)) == len(roots)
        assert _grid_sign_changes(f, Fraction(-21), Fraction(21), 420) == len(roots)


def test_finite_field_arithmetic():
    K = FiniteField(3, 3)
    assert K.q == 27
    for a in range(1, 27):
        assert K.mul(a, K.inv(a)) == 1
    squares = {K.mul(a, a) for a in range(1, 27)}
    assert len(squares) == 13
    assert all(K.is_square_code(s) for s in squares)
    assert is_square(K.elem(next(iter(squares))))


def test_finite_field_rejects_composite():
    with pytest.raises(ScalarError):
        FiniteField(9)


@settings(max_examples=50)
@given(st.integers(0, 24), st.integers(0, 24), st.integers(0, 24))
def test_finite_field_distributive(a, b, c):
    K = FiniteField(5, 2)
    x, y, z = K.elem(a), K.elem(b), K.elem(c)
    assert x * (y + z) == x * y + x * z
