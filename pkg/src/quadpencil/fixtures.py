"""Hand-built pencils in eight variables, one per case of the taxonomy."""
from __future__ import annotations

from fractions import Fraction

from quadpencil.forms import QuadraticForm, direct_sum, hyperbolic_form
from quadpencil.pencil import Pencil


def _diag(*xs):
    return QuadraticForm.diagonal([Fraction(x) for x in xs])


def _mat(rows):
    return QuadraticForm([[Fraction(x) for x in r] for r in rows])


def regular() -> Pencil:
    """F = identity, G = diag(1..8): eight simple members of rank 7."""
    return Pencil(_diag(*[1] * 8), _diag(*range(1, 9)))


def degenerate() -> Pencil:
    """F and G share the kernel vector e_7."""
    return Pencil(_diag(1, 1, 1, 1, 1, 1, 1, 0), _diag(1, 2, 3, 4, 5, 6, 7, 0))


def rank_at_most5() -> Pencil:
    return Pencil(_diag(1, 1, 1, 1, 1, 0, 0, 0), _diag(*range(1, 9)))


def obstruction_example(a=(1, 1, 1, 1, 1, 1), b=(1, 1, 2, 3, 4, 5, 6, 7)) -> Pencil:
    """F = sum_{i>=2} a_i x_i^2, G = sum_{j>=0} b_j x_j^2."""
    return Pencil(_diag(0, 0, *a), _diag(*b))


def rank6_over_base() -> Pencil:
    return obstruction_example()


def conjugate_rank6_pair() -> Pencil:
    """Two 2x2 blocks with det(f + t g) = -(1 + t^2), plus a regular 4x4 block.

    At t = +-i each block drops rank by one, giving a conjugate pair of
    rank-6 members defined over Q(i).
    """
    f = _mat([[1, 0], [0, -1]])
    g = _mat([[0, 1], [1, 0]])
    return Pencil(direct_sum(f, f, _diag(1, 1, 1, 1)), direct_sum(g, g, _diag(1, 2, 3, 5)))


CUBIC_S = [[0, 1, 0], [1, 0, 1], [0, 1, 1]]


def three_rank6_cubic() -> Pencil:
    """Two copies of (I, S) with det(I + tS) an irreducible cubic, plus a regular 2x2 block."""
    f = _diag(1, 1, 1)
    g = _mat(CUBIC_S)
    return Pencil(direct_sum(f, f, _diag(1, 1)), direct_sum(g, g, _diag(2, 3)))


def four_rank6(alphas=(1, 2, 3, 4)) -> Pencil:
    """Normal form F = x0x1 + x2x3 + x4x5 + x6x7, G = sum alpha_i x_{2i} x_{2i+1}."""
    F = hyperbolic_form(4)
    G = QuadraticForm.from_polynomial({(2 * i, 2 * i + 1): a for i, a in enumerate(alphas)}, 8)
    return Pencil(F, G)


TAXONOMY = {
    "DegeneratePencil": degenerate,
    "RankAtMost5": rank_at_most5,
    "Rank6OverBase": rank6_over_base,
    "ConjugateRank6Pair": conjugate_rank6_pair,
    "ThreeRank6Cubic": three_rank6_cubic,
    "FourRank6": four_rank6,
    "Regular": regular,
}


def regular_fixtures() -> list[Pencil]:
    """Pencils whose members all have rank >= 7."""
    return [
        regular(),
        Pencil(_diag(1, 1, 1, 1, -1, -1, -1, -1), _diag(1, 2, 3, 4, 5, 6, 7, 8)),
        Pencil(_diag(1, 2, 3, 5, 7, 11, 13, 17), _diag(1, -1, 2, -2, 3, -3, 5, -5)),
    ]
