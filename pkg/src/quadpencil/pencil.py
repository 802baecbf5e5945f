"""The pencil lambda*F + mu*G of two rational quadratic forms."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from quadpencil import forms
from quadpencil.forms import QuadraticForm, Subspace, mat_det, mat_rank, nullspace
from quadpencil.scalars import (
    QQ,
    NumberField,
    Poly,
    Rationals,
    ScalarError,
    factor_over_Q,
    format_rat,
    isolate_real_roots,
    rational_sqrt,
    rational_squarefree,
    simplest_between,
    squarefree_part,
)

TAGS = (
    "DegeneratePencil",
    "RankAtMost5",
    "FourRank6",
    "Rank6OverBase",
    "ConjugateRank6Pair",
    "ThreeRank6Cubic",
    "Regular",
    "LowRankMember",
)


class PencilError(ValueError):
    pass


class DegeneratePencilError(PencilError):
    pass


@dataclass(frozen=True)
class Pencil:
    F: QuadraticForm
    G: QuadraticForm

    def __post_init__(self):
        if self.F.dim != self.G.dim:
            raise PencilError("F and G must have the same dimension")
        if not isinstance(self.F.field, Rationals) or not isinstance(self.G.field, Rationals):
            raise PencilError("pencil forms must be rational")
        vecs = [[x for r in self.F.gram for x in r], [x for r in self.G.gram for x in r]]
        if mat_rank(vecs) < 2:
            raise PencilError("F and G are proportional")

    @property
    def dim(self) -> int:
        return self.F.dim

    def member(self, lam, mu) -> QuadraticForm:
        return self.F.scale(lam) + self.G.scale(mu)

    def member_matrix(self, lam, mu):
        return [[lam * a + mu * b for a, b in zip(r, s)] for r, s in zip(self.F.gram, self.G.gram)]

    def swapped(self) -> "Pencil":
        return Pencil(self.G, self.F)

    def reparametrize(self, a, b, c, d) -> "Pencil":
        """Pencil with basis (aF + bG, cF + dG)."""
        return Pencil(self.member(a, b), self.member(c, d))

    def change_variables(self, M) -> "Pencil":
        return Pencil(self.F.change_basis(M), self.G.change_basis(M))

    def to_json(self):
        return {"n": self.dim, "F": self.F.to_json(), "G": self.G.to_json()}

    @classmethod
    def from_json(cls, data) -> "Pencil":
        n = int(data["n"])
        F, G = forms.form_from_json(data["F"]), forms.form_from_json(data["G"])
        if F.dim != n or G.dim != n:
            raise PencilError("declared n does not match the Gram matrices")
        return cls(F, G)


@dataclass(frozen=True)
class SingularMember:
    """One Galois orbit of singular members.

    ``factor`` is the monic irreducible factor q(t) of det(F + tG) whose
    roots t give the members F + tG, or None for the member G at (0:1).
    """

    factor: Poly | None
    multiplicity: int
    rank: int
    degree: int

    @property
    def at_infinity(self) -> bool:
        return self.factor is None

    def point(self):
        """(lambda, mu) for a rational member, else None."""
        if self.factor is None:
            return (Fraction(0), Fraction(1))
        if self.degree == 1:
            return (Fraction(1), -self.factor.coeffs[0])
        return None

    def label(self) -> str:
        if self.factor is None:
            return "infinity"
        return self.factor.pretty("t")

    def to_json(self):
        return {
            "factor": None if self.factor is None else self.factor.to_json(),
            "multiplicity": self.multiplicity,
            "rank": self.rank,
            "degree": self.degree,
        }

    @classmethod
    def from_json(cls, d):
        f = None if d["factor"] is None else Poly.from_json(d["factor"])
        return cls(f, int(d["multiplicity"]), int(d["rank"]), int(d["degree"]))


@dataclass(frozen=True)
class PencilClass:
    tag: str
    members: tuple
    dim: int
    out_of_taxonomy: bool = False
    evidence: str = ""

    def to_json(self):
        return {
            "tag": self.tag,
            "members": [m.to_json() for m in self.members],
            "dim": self.dim,
            "out_of_taxonomy": self.out_of_taxonomy,
            "evidence": self.evidence,
        }

    @classmethod
    def from_json(cls, d):
        return cls(d["tag"], tuple(SingularMember.from_json(m) for m in d["members"]), int(d["dim"]),
                   bool(d["out_of_taxonomy"]), d["evidence"])


def interpolate(xs, ys) -> Poly:
    """Lagrange interpolation over Q."""
    out = Poly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        term = Poly((Fraction(yi),))
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                term = term * Poly((Fraction(-xj), Fraction(1)))
                den *= xi - xj
        out = out + term * (1 / den)
    return out


def det_poly(A: QuadraticForm, B: QuadraticForm) -> Poly:
    """det(A + tB) as an exact polynomial in t."""
    n = A.dim
    xs = list(range(n + 1))
    ys = [mat_det([[a + t * b for a, b in zip(r, s)] for r, s in zip(A.gram, B.gram)]) for t in xs]
    return interpolate(xs, ys)


def char_poly(P: Pencil) -> tuple[Poly, int]:
    """chi(t) = det(F + tG) and rank(G), which governs the member at infinity."""
    return det_poly(P.F, P.G), forms.rank(P.G)


def rank_at_factor(P: Pencil, q: Poly) -> int:
    if q.degree == 1:
        c = -q.coeffs[0] / q.coeffs[1]
        return mat_rank(P.member_matrix(Fraction(1), c))
    K = NumberField(q, check=False)
    th = K.gen()
    M = [[K(a) + th * b for a, b in zip(r, s)] for r, s in zip(P.F.gram, P.G.gram)]
    return mat_rank(M)


def singular_members(P: Pencil) -> list[SingularMember]:
    chi, rank_g = char_poly(P)
    if not chi:
        raise DegeneratePencilError("det(F + tG) vanishes identically")
    n = P.dim
    out = [SingularMember(q, e, rank_at_factor(P, q), q.degree) for q, e in factor_over_Q(chi)]
    if rank_g < n:
        out.append(SingularMember(None, n - chi.degree, rank_g, 1))
    return out


def has_member_of_rank_at_most(P: Pencil, r: int) -> bool:
    """Whether some member has rank <= r.

    A root of multiplicity e has corank at most e, so only factors with
    e >= n - r need an exact rank computation.
    """
    chi, rank_g = char_poly(P)
    if not chi:
        raise DegeneratePencilError("det(F + tG) vanishes identically")
    n = P.dim
    if rank_g < n and rank_g <= r:
        return True
    return any(e >= n - r and rank_at_factor(P, q) <= r for q, e in factor_over_Q(chi))


def classify(P: Pencil) -> PencilClass:
    """Assign the case tag, in the order the irregular cases are eliminated.

    Priority: DegeneratePencil > RankAtMost5 > rank-6 census > Regular.
    For other than 8 variables only the degenerate / low-rank (rank at most
    n - 3) / regular split is made.
    """
    n = P.dim
    try:
        members = singular_members(P)
    except DegeneratePencilError:
        return PencilClass("DegeneratePencil", (), n, n != 8, "det(F + tG) is identically zero")
    low = [m for m in members if m.rank <= n - 3]
    if n != 8:
        if low:
            return PencilClass("LowRankMember", tuple(members), n, True,
                               f"member of rank {min(m.rank for m in low)} <= n - 3")
        return PencilClass("Regular", tuple(members), n, True, "no member of rank <= n - 3")
    if low:
        return PencilClass("RankAtMost5", tuple(members), n, False,
                           f"member {low[0].label()} has rank {low[0].rank}")
    six = [m for m in members if m.rank == 6]
    count = sum(m.degree for m in six)
    if count == 4:
        tag = "FourRank6"
    elif any(m.degree == 1 for m in six):
        tag = "Rank6OverBase"
    elif any(m.degree == 2 for m in six):
        tag = "ConjugateRank6Pair"
    elif any(m.degree == 3 for m in six):
        tag = "ThreeRank6Cubic"
    elif six:
        raise PencilError("rank-6 census does not fit the taxonomy")
    else:
        tag = "Regular"
    ev = f"{count} geometric rank-6 member(s)" if six else "all members of rank >= 7"
    return PencilClass(tag, tuple(members), n, False, ev)


# --------------------------------------------------------------------------
# real place

@dataclass(frozen=True)
class SweepResult:
    lam: Fraction
    mu: Fraction
    signature: tuple
    samples_tried: int

    def to_json(self):
        return {"point": [format_rat(self.lam), format_rat(self.mu)], "signature": list(self.signature),
                "samples_tried": self.samples_tried}

    @classmethod
    def from_json(cls, d):
        return cls(Fraction(d["point"][0]), Fraction(d["point"][1]), tuple(d["signature"]), int(d["samples_tried"]))


def sweep_samples(P: Pencil) -> list[tuple[Fraction, Fraction]]:
    """One rational member per arc of P^1(R) minus the real singular members."""
    chi, rank_g = char_poly(P)
    if not chi:
        raise DegeneratePencilError("degenerate pencil")
    roots = isolate_real_roots(squarefree_part(chi)) if chi.degree > 0 else []
    ts: list[Fraction] = []
    if not roots:
        ts.append(Fraction(0))
    else:
        lo0 = roots[0][0]
        hi_last = roots[-1][1]
        ts.append(simplest_between(lo0 - 1, lo0))
        for (_, b), (a, _) in zip(roots, roots[1:]):
            ts.append(simplest_between(b, a))
        ts.append(simplest_between(hi_last, hi_last + 1))
    samples = []
    if chi(Fraction(0)) != 0:
        samples.append((Fraction(1), Fraction(0)))
    if rank_g == P.dim:
        samples.append((Fraction(0), Fraction(1)))
    for t in ts:
        if (Fraction(1), t) not in samples:
            samples.append((Fraction(1), t))
    return samples


def mordell_sweep(P: Pencil) -> SweepResult:
    """A rational member with |n+ - n-| <= 2, found by sampling each arc.

    The signature is odd under (lambda, mu) -> -(lambda, mu) and jumps by at
    most 4 across a member of corank <= 2, so some arc has |sgn| <= 2.
    """
    n = P.dim
    if has_member_of_rank_at_most(P, n - 3):
        raise PencilError("rank <= 5 member present" if n == 8 else "member of rank <= n - 3 present")
    samples = sweep_samples(P)
    for k, (lam, mu) in enumerate(samples, 1):
        sig = forms.signature(P.member(lam, mu))
        if sum(sig) != n:
            raise PencilError("sample hit a singular member")
        if abs(sig[0] - sig[1]) <= 2:
            return SweepResult(lam, mu, sig, k)
    raise PencilError("sweep exhausted")


# --------------------------------------------------------------------------
# four rank-6 members

@dataclass(frozen=True)
class FourRank6Decomposition:
    field: object
    chosen: tuple  # ((lam_A, mu_A), (lam_B, mu_B)) members playing F and G
    eigenvalues: tuple  # lambda_i with A - lambda_i B singular
    eigenspaces: tuple  # Subspace V_i over the splitting field
    induced_forms: tuple  # phi_i = A restricted to V_i
    scalars: tuple  # alpha_i with B|V_i = alpha_i phi_i

    def basis_matrix(self):
        cols = []
        for V in self.eigenspaces:
            cols.extend(V.basis)
        return forms.mat_transpose([list(c) for c in cols])

    def to_json(self):
        def el(x):
            return format_rat(x) if isinstance(x, Fraction) else x.to_json()
        return {
            "field": self.field.to_json(),
            "chosen": [[format_rat(a), format_rat(b)] for a, b in self.chosen],
            "eigenvalues": [el(x) for x in self.eigenvalues],
            "eigenspaces": [[[el(x) for x in v] for v in V.basis] for V in self.eigenspaces],
            "induced_forms": [[[el(x) for x in r] for r in phi.gram] for phi in self.induced_forms],
            "scalars": [el(x) for x in self.scalars],
        }


def _small_height_points(bound: int):
    """Each point of P^1(Q) of height <= bound once, by increasing height."""
    yield (Fraction(1), Fraction(0))
    yield (Fraction(0), Fraction(1))
    for h in range(1, bound + 1):
        for a in range(-h, h + 1):
            for b in range(-h, h + 1):
                if max(abs(a), abs(b)) != h or a < 0 or (a == 0 and b <= 0):
                    continue
                if gcd(a, b) != 1 or (a, b) in ((1, 0), (0, 1)):
                    continue
                yield (Fraction(a), Fraction(b))


def _splitting_field(factors: list[Poly]):
    """Field containing all roots of linear/quadratic factors, with root lists."""
    classes = []
    for q in factors:
        if q.degree > 2:
            raise PencilError("splitting field too large")
        if q.degree == 2:
            b, c = q.coeffs[1], q.coeffs[0]
            d = rational_squarefree(b * b - 4 * c)
            if d not in classes:
                classes.append(d)
    basis = []  # independent square classes
    for d in classes:
        span = {1}
        for e in basis:
            span |= {rational_squarefree(x * e) for x in span}
        if d not in span:
            basis.append(d)
    if len(basis) > 2:
        raise PencilError("splitting field too large")
    if not basis:
        K = QQ
        sqrt_of = {1: Fraction(1)}
    elif len(basis) == 1:
        d = basis[0]
        K = NumberField(Poly.from_ints([-d, 0, 1]), check=False)
        sqrt_of = {1: K(1), d: K.gen()}
    else:
        d1, d2 = basis
        K = NumberField(Poly.from_ints([(d1 - d2) ** 2, 0, -2 * (d1 + d2), 0, 1]), check=False)
        th = K.gen()
        r1 = (th ** 3 - th * (3 * d1 + d2)) / (2 * (d2 - d1))
        r2 = th - r1
        d12 = rational_squarefree(d1 * d2)
        s = rational_sqrt(Fraction(d1 * d2, d12))
        sqrt_of = {1: K(1), d1: r1, d2: r2, d12: r1 * r2 / s}

    def coerce(x):
        return x if isinstance(K, Rationals) else K(x)

    roots = []
    for q in factors:
        if q.degree == 1:
            roots.append(coerce(-q.coeffs[0] / q.coeffs[1]))
            continue
        b, c = q.coeffs[1], q.coeffs[0]
        D = b * b - 4 * c
        d = rational_squarefree(D)
        s = rational_sqrt(D / d)
        sq = sqrt_of[d] * s
        roots.append((coerce(-b) + sq) / 2)
        roots.append((coerce(-b) - sq) / 2)
    return K, roots


def four_rank6_decompose(P: Pencil, height: int = 20) -> FourRank6Decomposition:
    """Orthogonal splitting V = V_1 + ... + V_4 into kernels of the rank-6 members.

    Two nondegenerate rational members A, B of small height are chosen; the
    V_i are the eigenspaces of B^{-1}A, computed over the splitting field.
    """
    cls = classify(P)
    if cls.tag != "FourRank6":
        raise PencilError(f"pencil is {cls.tag}, not FourRank6")
    n = P.dim
    chosen = []
    for lam, mu in _small_height_points(height):
        if mat_det(P.member_matrix(lam, mu)) != 0:
            chosen.append((lam, mu))
            if len(chosen) == 2:
                break
    if len(chosen) < 2:
        raise PencilError("no two nondegenerate members of small height")
    (la, ma), (lb, mb) = chosen
    A, B = P.member(la, ma), P.member(lb, mb)
    # det(A - x B) with roots x_i
    chi = det_poly(A, B.scale(-1))
    facs = factor_over_Q(chi)
    if any(e != 2 for _, e in facs):
        raise PencilError("expected four double roots")
    K, roots = _splitting_field([q for q, _ in facs])
    if len(roots) != 4:
        raise PencilError("expected four rank-6 members")
    if isinstance(K, Rationals):
        Ak, Bk, Fk, Gk = A, B, P.F, P.G
    else:
        Ak, Bk, Fk, Gk = (f.extend_to(K) for f in (A, B, P.F, P.G))
    spaces, phis, alphas = [], [], []
    for x in roots:
        M = [[a - x * b for a, b in zip(r, s)] for r, s in zip(Ak.gram, Bk.gram)]
        ns = nullspace(M, n)
        if len(ns) != 2:
            raise PencilError("eigenspace is not 2-dimensional")
        V = Subspace(n, ns, K)
        phi = forms.restrict(Ak, V)
        if forms.rank(phi) != 2:
            raise PencilError("induced binary form is degenerate")
        spaces.append(V)
        phis.append(phi)
        alphas.append(1 / x)
    dec = FourRank6Decomposition(K, tuple(chosen), tuple(roots), tuple(spaces), tuple(phis), tuple(alphas))
    ok, why = verify_decomposition(P, dec, Ak, Bk, Fk, Gk)
    if not ok:
        raise PencilError(f"decomposition check failed: {why}")
    return dec


def verify_decomposition(P, dec, A, B, F, G) -> tuple[bool, str]:
    n = P.dim
    M = dec.basis_matrix()
    if mat_rank(M) != n:
        return False, "eigenspaces do not span"
    for form, name in ((F, "F"), (G, "G")):
        for i, Vi in enumerate(dec.eigenspaces):
            for j, Vj in enumerate(dec.eigenspaces):
                if i < j and any(form.bilinear(list(u), list(v)) for u in Vi.basis for v in Vj.basis):
                    return False, f"V_{i} and V_{j} not orthogonal for {name}"
    blockA = A.change_basis(M)
    blockB = B.change_basis(M)
    for i in range(4):
        for r in range(2):
            for c in range(2):
                if blockA.gram[2 * i + r][2 * i + c] != dec.induced_forms[i].gram[r][c]:
                    return False, "A does not recompose"
                if blockB.gram[2 * i + r][2 * i + c] != dec.scalars[i] * dec.induced_forms[i].gram[r][c]:
                    return False, "B does not recompose"
    for i in range(n):
        for j in range(n):
            if i // 2 != j // 2 and (blockA.gram[i][j] or blockB.gram[i][j]):
                return False, "off-block entries"
    return True, ""


def taxonomy_is_defined(P: Pencil) -> bool:
    return P.dim == 8


__all__ = [
    "Pencil", "SingularMember", "PencilClass", "SweepResult", "FourRank6Decomposition",
    "PencilError", "DegeneratePencilError", "char_poly", "singular_members", "classify",
    "mordell_sweep", "four_rank6_decompose", "det_poly", "TAGS", "ScalarError",
]


def check_decomposition(P: Pencil, dec: FourRank6Decomposition) -> tuple[bool, str]:
    """Re-derive the chosen members over the decomposition field and check."""
    (la, ma), (lb, mb) = dec.chosen
    A, B = P.member(la, ma), P.member(lb, mb)
    if not isinstance(dec.field, Rationals):
        A, B, F, G = (f.extend_to(dec.field) for f in (A, B, P.F, P.G))
    else:
        F, G = P.F, P.G
    return verify_decomposition(P, dec, A, B, F, G)
