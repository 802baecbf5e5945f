"""Geometry of X = {F = G = 0}: tangent spaces, dual quadrics, cone sections,
finite-field point counts and isotropic subspaces, skew quadrilaterals.

Functions taking ``X`` accept either a :class:`Pencil` or a pair of forms over
a common field (so the same code runs over Q, number fields and F_q).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from quadpencil import kernels
from quadpencil.forms import (
    FormError,
    QuadraticForm,
    Subspace,
    determinant,
    diagonalize,
    mat_inverse,
    mat_mul,
    mat_rank,
    mat_vec,
    nondegenerate_part,
    nullspace,
    rank,
    restrict,
    rref,
)
from quadpencil.pencil import Pencil, char_poly, singular_members
from quadpencil.scalars import FiniteField, NumberField, Poly, as_fraction, format_rat


class GeometryError(ValueError):
    pass


def _pair(X):
    if isinstance(X, Pencil):
        return X.F, X.G
    F, G = X
    if F.dim != G.dim or F.field != G.field:
        raise GeometryError("forms must share dimension and field")
    return F, G


def _fmt(x):
    if hasattr(x, "code"):
        return x.code
    if hasattr(x, "to_json") and not isinstance(x, int):
        return x.to_json()
    return format_rat(as_fraction(x))


@dataclass(frozen=True)
class ProjPoint:
    """A projective point with first nonzero coordinate equal to 1."""

    coords: tuple

    @classmethod
    def of(cls, v) -> "ProjPoint":
        v = [Fraction(c) if isinstance(c, int) else c for c in v]
        lead = next((c for c in v if c), None)
        if lead is None:
            raise GeometryError("the zero vector is not a projective point")
        inv = 1 / lead
        return cls(tuple(c * inv for c in v))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def to_json(self):
        return [_fmt(c) for c in self.coords]


def jacobian(X, P: ProjPoint):
    F, G = _pair(X)
    return [mat_vec(F.gram, list(P.coords)), mat_vec(G.gram, list(P.coords))]


def on_X(X, P: ProjPoint) -> bool:
    F, G = _pair(X)
    x = list(P.coords)
    return not F(x) and not G(x)


def is_smooth(X, P: ProjPoint) -> bool:
    return on_X(X, P) and mat_rank(jacobian(X, P)) == 2


def tangent_space(X, P: ProjPoint) -> Subspace:
    """The linear span of T_{X,P}: common kernel of the two gradients at P."""
    F, G = _pair(X)
    if P.dim != F.dim:
        raise GeometryError("point has the wrong number of coordinates")
    if not on_X(X, P):
        raise GeometryError("point not on X")
    J = jacobian(X, P)
    if mat_rank(J) < 2:
        raise GeometryError("singular point")
    return Subspace(F.dim, nullspace(J, F.dim), F.field)


def dual_quadric(A: QuadraticForm, B: QuadraticForm) -> QuadraticForm:
    """The quadric A B^{-1} A, whose points are those of Q_A with tangent
    hyperplane tangent to Q_B."""
    if A.dim != B.dim:
        raise GeometryError("dimension mismatch")
    if A.dim < 2:
        raise GeometryError("need at least two variables")
    if A == B:
        raise GeometryError("A and B must be distinct")
    if rank(B) < B.dim:
        raise GeometryError("B is degenerate")
    M = mat_mul(mat_mul(A.matrix(), mat_inverse(B.matrix())), A.matrix())
    return QuadraticForm(M, A.field)


def tangent_restriction_rank(X, P: ProjPoint, member) -> int:
    F, G = _pair(X)
    lam, mu = member
    q = F.scale(lam) + G.scale(mu)
    return rank(restrict(q, tangent_space(X, P)))


@dataclass(frozen=True)
class ConeSection:
    vertex: ProjPoint
    tangent: Subspace
    complement: Subspace
    base_forms: tuple
    ranks: tuple

    def to_json(self):
        return {
            "vertex": self.vertex.to_json(),
            "tangent_basis": [[_fmt(c) for c in v] for v in self.tangent.basis],
            "complement_basis": [[_fmt(c) for c in v] for v in self.complement.basis],
            "base_ranks": list(self.ranks),
        }


def cone_section(X, P: ProjPoint) -> ConeSection:
    """X ∩ T_{X,P} as a cone with vertex P over the base cut out on a
    complement of P inside T_{X,P}."""
    F, G = _pair(X)
    T = tangent_space(X, P)
    # P = sum c_k t_k in the echelon basis; drop the first t_k with c_k != 0
    x = list(P.coords)
    basis = [list(v) for v in T.basis]
    pivots = [next(i for i, c in enumerate(v) if c) for v in basis]
    drop = next(k for k, pc in enumerate(pivots) if x[pc])
    W = Subspace(F.dim, [v for k, v in enumerate(basis) if k != drop], F.field)
    for q in (F, G):
        if any(q.bilinear(x, v) for v in T.basis):
            raise GeometryError("tangent space is not tangent")  # cannot happen
    f, g = restrict(F, W), restrict(G, W)
    chi = _det_pencil_nonzero(f, g)
    if not chi:
        raise GeometryError("non-generic point")
    return ConeSection(P, T, W, (f, g), (rank(f), rank(g)))


def _det_pencil_nonzero(f: QuadraticForm, g: QuadraticForm) -> bool:
    """det(f + t g) not identically zero; tested at dim+1 parameter values."""
    n = f.dim
    K = f.field
    vals = list(range(n + 1))
    if isinstance(K, FiniteField):
        if K.q <= n:
            raise GeometryError("field too small to test the pencil determinant")
        vals = [K.elem(c) for c in range(n + 1)]
    for t in vals:
        if determinant(f + g.scale(t)):
            return True
    # also the member g itself, so a pencil with only g nondegenerate counts
    return bool(determinant(g))


# --------------------------------------------------------------------------
# finite fields

def upper_codes(q: QuadraticForm) -> list[int]:
    """Coefficients of sum_{i<=j} c_ij x_i x_j as field codes, row-major."""
    n = q.dim
    out = []
    for i in range(n):
        for j in range(i, n):
            c = q.gram[i][i] if i == j else q.gram[i][j] + q.gram[i][j]
            out.append(c.code)
    return out


def _check_cost(n: int, K: FiniteField):
    if K.q ** n > 10 ** 9:
        raise GeometryError("enumeration too large")


def _kernel_field_args(K: FiniteField):
    if K.k == 1:
        return (K.q, K.p, 1, None, None, None, None)
    add, mul, neg, inv = K.tables()
    return (K.q, K.p, K.k, add, mul, neg, inv)


def enumerate_points_Fq(forms, K: FiniteField | None = None) -> list[ProjPoint]:
    """All F_q points of the common zero locus of the given forms.

    ``forms`` is a Pencil (then ``K`` is a prime field to reduce into), a
    single form, or a sequence of forms over ``K``.
    """
    if isinstance(forms, Pencil):
        if K is None:
            raise GeometryError("a finite field is required")
        forms = [forms.F.reduce_mod(K), forms.G.reduce_mod(K)]
    elif isinstance(forms, QuadraticForm):
        forms = [forms]
    forms = list(forms)
    K = forms[0].field
    if not isinstance(K, FiniteField):
        raise GeometryError("forms must be over a finite field")
    if K.p == 2:
        raise GeometryError("characteristic 2 is not supported")
    n = forms[0].dim
    _check_cost(n, K)
    q, p, k, add, mul, _, _ = _kernel_field_args(K)
    pts = kernels.zero_points(n, [upper_codes(f) for f in forms], q, p, k, add, mul)
    return [ProjPoint(tuple(K.elem(c) for c in x)) for x in pts]


def projective_count(n: int, q: int) -> int:
    return sum(q ** i for i in range(n))


def smooth_quadric_count(q: QuadraticForm) -> int:
    """Classical number of F_q points of a nondegenerate quadric in P^{n-1}."""
    K = q.field
    n = q.dim
    qq = K.q
    if n % 2:
        return projective_count(n - 1, qq)
    k = n // 2
    disc = determinant(q) * (-1) ** k
    eps = 1 if K.is_square_code(disc.code) else -1
    return (qq ** k - eps) * (qq ** (k - 1) + eps) // (qq - 1)


def witt_index_fq(q: QuadraticForm) -> int:
    """Witt index over F_q of the nondegenerate part (classification by dim and disc)."""
    core, _ = nondegenerate_part(q)
    if core is None:
        return 0
    r = core.dim
    if r % 2:
        return r // 2
    d = determinant(core) * (-1) ** (r // 2)
    return r // 2 if core.field.is_square_code(d.code) else r // 2 - 1


def isotropic_subspace_Fq(q: QuadraticForm, m: int) -> Subspace | None:
    """A totally isotropic subspace of projective dimension m meeting the
    radical only in 0, or None if there is none (exhaustive)."""
    K = q.field
    if not isinstance(K, FiniteField):
        raise GeometryError("form must be over a finite field")
    if m < -1:
        raise GeometryError("m must be at least -1")
    n = q.dim
    _check_cost(n, K)
    # A subspace meeting the radical only in 0 projects isomorphically onto
    # any complement of the radical, so search the complement spanned by the
    # non-pivot coordinates.
    keep = list(range(n))
    if rank(q) < n:
        pivots = set(rref(nullspace(q.matrix(), n))[1])
        keep = [i for i in range(n) if i not in pivots]
    r = len(keep)
    if m + 1 > r:
        return None
    gram = [q.gram[i][j].code for i in keep for j in keep]
    found = kernels.isotropic_subspace(r, gram, [], m + 1, *_kernel_field_args(K))
    if found is None:
        return None
    basis = []
    for v in found:
        w = [K.zero()] * n
        for i, c in zip(keep, v):
            w[i] = K.elem(c)
        basis.append(w)
    return Subspace(n, basis, K)


def splits_hyperbolic_Fq(q: QuadraticForm, count: int) -> bool:
    return witt_index_fq(q) >= count


# --------------------------------------------------------------------------
# skew quadrilaterals

@dataclass(frozen=True)
class Gauche:
    det_squared: object

    tag = "Gauche"

    def to_json(self):
        return {"tag": "Gauche", "det_squared": _fmt(self.det_squared)}


@dataclass(frozen=True)
class Degenerate:
    reason: str

    tag = "Degenerate"

    def to_json(self):
        return {"tag": "Degenerate", "reason": self.reason}


def _binary(q: QuadraticForm, L: Subspace):
    r = restrict(q, L)
    return r.gram[0][0], 2 * r.gram[0][1], r.gram[1][1]


def quadrilateral_check(X, L1: Subspace, L2: Subspace):
    """Whether X ∩ span(L1, L2) is four distinct points spanning it.

    On each line the two restricted binary forms must be proportional (the
    line is the vertex of a singular member) and cut two distinct points.
    In the basis (a1, b1, a2, b2) of the span the coordinate determinant of
    the four points is block-diagonal, and its square is the product of the
    two binary discriminants over the squared leading coefficients, which
    stays in the base field.
    """
    F, G = _pair(X)
    for L in (L1, L2):
        if L.dim != 2:
            raise GeometryError("L1 and L2 must be projective lines")
    if L1.field != L2.field:
        raise GeometryError("lines over different fields")
    if L1.field != F.field:
        F, G = F.extend_to(L1.field), G.extend_to(L1.field)
    if Subspace.span(F.dim, list(L1.basis) + list(L2.basis), F.field).dim != 4:
        raise GeometryError("lines intersect")
    det2 = F.field.one()
    for L in (L1, L2):
        f, g = _binary(F, L), _binary(G, L)
        if not any(f) and not any(g):
            return Degenerate("line contained in X")
        if mat_rank([list(f), list(g)]) == 2:
            return Degenerate("restrictions not proportional")
        h = f if any(f) else g
        a, b, c = h
        disc = b * b - 4 * a * c
        if not disc:
            return Degenerate("coincident points")
        lead = a if a else b
        det2 = det2 * disc / (lead * lead)
    return Gauche(det2)


def conjugate_singular_lines(P: Pencil) -> tuple[Subspace, Subspace]:
    """Vertices of the two conjugate rank-6 members (degree-2 factor of chi),
    as lines over the quadratic field."""
    for m in singular_members(P):
        if m.degree == 2 and m.rank == P.dim - 2:
            K = NumberField(m.factor)
            theta = K.gen()
            conj = -m.factor.coeffs[1] - theta
            lines = []
            for t in (theta, conj):
                M = [[K(a) + t * K(b) for a, b in zip(r, s)] for r, s in zip(P.F.gram, P.G.gram)]
                lines.append(Subspace(P.dim, nullspace(M, P.dim), K))
            return lines[0], lines[1]
    raise GeometryError("no conjugate pair of corank-2 members")
