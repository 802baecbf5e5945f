"""Quadratic forms as symmetric Gram matrices over an exact field."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from quadpencil.scalars import QQ, FiniteField, NumberField, Rationals, as_fraction, format_rat


class FormError(ValueError):
    pass


Matrix = list  # list of rows


# --------------------------------------------------------------------------
# generic dense linear algebra over any exact field

def mat_transpose(A):
    return [list(r) for r in zip(*A)] if A else []


def mat_mul(A, B):
    if not A or not B:
        return []
    Bt = mat_transpose(B)
    zero = A[0][0] * 0
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            acc = zero
            for a, b in zip(row, col):
                if a and b:
                    acc = acc + a * b
            out_row.append(acc)
        out.append(out_row)
    return out


def mat_vec(A, v):
    zero = v[0] * 0
    out = []
    for row in A:
        acc = zero
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def dot(u, v):
    acc = u[0] * 0
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def identity(n: int, field=QQ):
    one, zero = field.one(), field.zero()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def rref(A):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    M = [list(r) for r in A]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def mat_rank(A) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def nullspace(A, ncols: int | None = None):
    """Basis of {x : A x = 0} as a list of vectors."""
    if ncols is None:
        ncols = len(A[0])
    if not A:
        raise FormError("nullspace of an empty matrix needs an explicit field")
    R, pivots = rref(A)
    zero, one = A[0][0] * 0, A[0][0] * 0 + 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def mat_det(A):
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [list(r) for r in A]
    det = M[0][0] * 0 + 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return M[0][0] * 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return det


def mat_inverse(A):
    n = len(A)
    zero, one = A[0][0] * 0, A[0][0] * 0 + 1
    aug = [list(A[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise FormError("matrix is singular")
    return [row[n:] for row in R]


# --------------------------------------------------------------------------
# domain types

def _field_of(entry):
    from quadpencil.scalars import GFElem, NFElem
    if isinstance(entry, NFElem):
        return entry.field
    if isinstance(entry, GFElem):
        return entry.field
    return QQ


class QuadraticForm:
    """A quadratic form x -> x^T gram x, with an exactly symmetric Gram matrix."""

    __slots__ = ("gram", "field", "dim")

    def __init__(self, gram: Sequence[Sequence], field=None):
        rows = [list(r) for r in gram]
        n = len(rows)
        if n == 0:
            raise FormError("a form needs positive dimension")
        if any(len(r) != n for r in rows):
            raise FormError("Gram matrix must be square")
        if field is None:
            field = _field_of(rows[0][0])
        if isinstance(field, Rationals):
            rows = [[as_fraction(x) for x in r] for r in rows]
        else:
            rows = [[field(x) for x in r] for r in rows]
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise FormError(f"Gram matrix not symmetric at ({i},{j})")
        self.gram = tuple(tuple(r) for r in rows)
        self.field = field
        self.dim = n

    @classmethod
    def diagonal(cls, entries, field=None) -> "QuadraticForm":
        entries = list(entries)
        if field is None:
            field = _field_of(entries[0]) if not isinstance(entries[0], int) else QQ
        zero = field.zero()
        n = len(entries)
        return cls([[field(entries[i]) if i == j else zero for j in range(n)] for i in range(n)], field)

    @classmethod
    def from_polynomial(cls, coeffs: dict, n: int, field=QQ) -> "QuadraticForm":
        """Form from monomial coefficients {(i, j): c} meaning c*x_i*x_j."""
        half = field(Fraction(1, 2)) if not isinstance(field, FiniteField) else field(1) / field(2)
        G = [[field.zero()] * n for _ in range(n)]
        for (i, j), c in coeffs.items():
            c = field(c)
            if i == j:
                G[i][i] = G[i][i] + c
            else:
                G[i][j] = G[i][j] + c * half
                G[j][i] = G[j][i] + c * half
        return cls(G, field)

    def matrix(self):
        return [list(r) for r in self.gram]

    def __call__(self, x):
        return dot(x, mat_vec(self.gram, x))

    def bilinear(self, x, y):
        return dot(x, mat_vec(self.gram, y))

    def __add__(self, other: "QuadraticForm"):
        return QuadraticForm([[a + b for a, b in zip(r, s)] for r, s in zip(self.gram, other.gram)], self.field)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "QuadraticForm":
        c = self.field(c) if not isinstance(self.field, Rationals) else as_fraction(c)
        return QuadraticForm([[a * c for a in r] for r in self.gram], self.field)

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"QuadraticForm(dim={self.dim}, field={self.field!r})"

    def change_basis(self, M) -> "QuadraticForm":
        """The form with Gram matrix M^T gram M (columns of M are the new basis)."""
        return QuadraticForm(mat_mul(mat_mul(mat_transpose(M), self.matrix()), M), self.field)

    def is_zero(self) -> bool:
        return not any(x for r in self.gram for x in r)

    def to_json(self):
        return [[format_rat(x) for x in r] for r in self.gram]

    def map_entries(self, fn, field) -> "QuadraticForm":
        return QuadraticForm([[fn(x) for x in r] for r in self.gram], field)

    def reduce_mod(self, F: FiniteField) -> "QuadraticForm":
        """Reduce a rational form into a finite field (denominators must be units)."""
        if not isinstance(self.field, Rationals):
            raise FormError("only rational forms can be reduced")
        return self.map_entries(F, F)

    def extend_to(self, K) -> "QuadraticForm":
        return self.map_entries(K, K)

    def integral_coefficients(self) -> list[list[int]]:
        """Integer matrix C (upper triangular) with Q = s * sum_{i<=j} C_ij x_i x_j, s > 0 rational."""
        from math import lcm
        n = self.dim
        coeffs = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            coeffs[i][i] = self.gram[i][i]
            for j in range(i + 1, n):
                coeffs[i][j] = 2 * self.gram[i][j]
        den = 1
        for r in coeffs:
            for c in r:
                den = lcm(den, c.denominator)
        return [[int(c * den) for c in r] for r in coeffs]


def hyperbolic_form(m: int, field=QQ) -> QuadraticForm:
    """x0 x1 + x2 x3 + ... with m hyperbolic planes."""
    return QuadraticForm.from_polynomial({(2 * i, 2 * i + 1): 1 for i in range(m)}, 2 * m, field)


def direct_sum(*forms: QuadraticForm) -> QuadraticForm:
    field = forms[0].field
    n = sum(f.dim for f in forms)
    G = [[field.zero()] * n for _ in range(n)]
    off = 0
    for f in forms:
        for i in range(f.dim):
            for j in range(f.dim):
                G[off + i][off + j] = f.gram[i][j]
        off += f.dim
    return QuadraticForm(G, field)


class Subspace:
    """A linear subspace of field^n, stored by its reduced row echelon basis."""

    __slots__ = ("ambient_dim", "basis", "field")

    def __init__(self, ambient_dim: int, vectors, field=QQ):
        vectors = [[field(x) for x in v] for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise FormError("basis vector has the wrong length")
        if vectors:
            R, _ = rref(vectors)
            if len(R) != len(vectors):
                raise FormError("basis vectors are linearly dependent")
            vectors = R
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(v) for v in vectors)
        self.field = field

    @classmethod
    def span(cls, ambient_dim: int, vectors, field=QQ) -> "Subspace":
        vectors = [[field(x) for x in v] for v in vectors if any(v)]
        if not vectors:
            return cls(ambient_dim, [], field)
        R, _ = rref(vectors)
        return cls(ambient_dim, R, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def projective_dim(self) -> int:
        return len(self.basis) - 1

    def basis_matrix(self):
        """n x d matrix whose columns are the basis vectors."""
        return mat_transpose([list(v) for v in self.basis])

    def contains(self, v) -> bool:
        if not self.basis:
            return not any(v)
        return mat_rank([list(b) for b in self.basis] + [list(v)]) == self.dim

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


@dataclass(frozen=True)
class Diagonalization:
    diagonal: tuple
    change_of_basis: tuple  # rows of the invertible matrix P with P^T G P = diag

    def matrix(self):
        return [list(r) for r in self.change_of_basis]


# --------------------------------------------------------------------------
# operations

def rank(q: QuadraticForm) -> int:
    return mat_rank(q.matrix())


def kernel(q: QuadraticForm) -> Subspace:
    if rank(q) == q.dim:
        return Subspace(q.dim, [], q.field)
    return Subspace(q.dim, nullspace(q.matrix()), q.field)


def determinant(q: QuadraticForm):
    return mat_det(q.matrix())


def diagonalize(q: QuadraticForm) -> Diagonalization:
    """Congruence diagonalization P^T G P = D by symmetric Gaussian elimination.

    Pivots are chosen by smallest index.  When every remaining diagonal
    entry vanishes, the first nonzero off-diagonal entry (i, j) is brought
    to the diagonal by e_i <- e_i + e_j (needs characteristic != 2).
    """
    if getattr(q.field, "characteristic", 0) == 2:
        raise FormError("characteristic 2 is not supported")
    n = q.dim
    A = q.matrix()
    P = identity(n, q.field)  # columns are basis vectors

    def add_into(i, j, c):
        # e_i <- e_i + c e_j
        for r in range(n):
            P[r][i] = P[r][i] + c * P[r][j]
        for r in range(n):
            A[r][i] = A[r][i] + c * A[r][j]
        for r in range(n):
            A[i][r] = A[i][r] + c * A[j][r]

    def swap(i, j):
        for r in range(n):
            P[r][i], P[r][j] = P[r][j], P[r][i]
        A[i], A[j] = A[j], A[i]
        for r in range(n):
            A[r][i], A[r][j] = A[r][j], A[r][i]

    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j]), None)
            if pair is None:
                break
            i, j = pair
            add_into(i, j, q.field.one())
            piv = i
        if piv != k:
            swap(piv, k)
        inv = 1 / A[k][k]
        for j in range(k + 1, n):
            if A[k][j]:
                add_into(j, k, -A[k][j] * inv)
    diag = tuple(A[i][i] for i in range(n))
    return Diagonalization(diag, tuple(tuple(r) for r in P))


def check_diagonalization(q: QuadraticForm, d: Diagonalization) -> bool:
    P = d.matrix()
    D = mat_mul(mat_mul(mat_transpose(P), q.matrix()), P)
    n = q.dim
    return all(D[i][j] == (d.diagonal[i] if i == j else 0) for i in range(n) for j in range(n)) and mat_rank(P) == n


def restrict(q: QuadraticForm, V: Subspace) -> QuadraticForm:
    if V.ambient_dim != q.dim:
        raise FormError("dimension mismatch between form and subspace")
    if V.dim == 0:
        raise FormError("cannot restrict to the zero subspace")
    return q.change_basis(V.basis_matrix())


def signature(q: QuadraticForm) -> tuple[int, int]:
    if not isinstance(q.field, Rationals):
        raise FormError("signature needs a rational form")
    d = diagonalize(q).diagonal
    return sum(1 for x in d if x > 0), sum(1 for x in d if x < 0)


def nondegenerate_part(q: QuadraticForm) -> tuple[QuadraticForm | None, int]:
    """The nonzero diagonal part of a diagonalization, and the radical dimension."""
    d = [x for x in diagonalize(q).diagonal if x]
    if not d:
        return None, q.dim
    return QuadraticForm.diagonal(d, q.field), q.dim - len(d)


def orthogonal_complement(q: QuadraticForm, V: Subspace) -> Subspace:
    B = [mat_vec(q.matrix(), list(v)) for v in V.basis]
    if not B:
        return Subspace(q.dim, identity(q.dim, q.field), q.field)
    ns = nullspace(B, q.dim)
    return Subspace(q.dim, ns, q.field) if ns else Subspace(q.dim, [], q.field)


def form_from_json(data, field=QQ) -> QuadraticForm:
    return QuadraticForm([[as_fraction(x) for x in r] for r in data], field)


def is_number_field(field) -> bool:
    return isinstance(field, NumberField)
