"""Residues of Psi = F + tG at closed points of the projective line.

Psi is diagonalized over the local ring Q[t]_(pi) as units plus pi times
units; the residue class of its Clifford invariant at the point is the
signed discriminant of the pi-part reduced to the residue field.  On the
double cover C : y^2 = disc(Psi) the residue is tested for squareness in the
residue field of each point above.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from quadpencil.pencil import Pencil, PencilError, char_poly, factor_over_Q, has_member_of_rank_at_most
from quadpencil.scalars import (
    NumberField,
    Poly,
    ScalarError,
    SquareClass,
    format_rat,
    is_square,
    poly_gcd,
    square_class,
)


class ResidueError(ValueError):
    pass


ONE = Poly((Fraction(1),))
T = Poly.x()


class RatFunc:
    """num/den in Q(t), den monic, gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = ONE):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        else:
            den = ONE
        lead = den.lead
        if lead != 1:
            num, den = num * (1 / lead), den * (1 / lead)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(Poly((Fraction(c),)))

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.const(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, o):
        if not isinstance(o, RatFunc):
            o = RatFunc.const(o)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, o):
        return self + (-o if isinstance(o, RatFunc) else RatFunc.const(-Fraction(o)))

    def __mul__(self, o):
        if not isinstance(o, RatFunc):
            o = RatFunc.const(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, RatFunc):
            o = RatFunc.const(o)
        if not o:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        return RatFunc.const(o) / self

    def valuation(self, pi: Poly) -> int:
        if not self.num:
            raise ResidueError("valuation of zero")
        return _pvaluation(self.num, pi) - _pvaluation(self.den, pi)

    def at(self, x):
        """Value at a point where the denominator does not vanish."""
        return self.num(x) / self.den(x)

    def __repr__(self):
        if self.den == ONE:
            return self.num.pretty()
        return f"({self.num.pretty()})/({self.den.pretty()})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def _pvaluation(f: Poly, pi: Poly) -> int:
    v = 0
    while True:
        q, r = f.divmod(pi)
        if r:
            return v
        f = q
        v += 1


@dataclass(frozen=True)
class ResidueContext:
    pencil: Pencil

    def __post_init__(self):
        chi, _ = char_poly(self.pencil)
        if not chi:
            raise ResidueError("degenerate pencil: Psi is degenerate over Q(t)")

    def psi(self, at_infinity: bool = False):
        """Gram matrix of F + tG (or G + uF at infinity) over Q(t)."""
        A, B = (self.pencil.G, self.pencil.F) if at_infinity else (self.pencil.F, self.pencil.G)
        return [[RatFunc(Poly((a, b))) for a, b in zip(r, s)] for r, s in zip(A.gram, B.gram)]


INFINITY = None


@dataclass(frozen=True)
class DvrDiagonal:
    """Psi ≅ <u_1, ..., u_r> ⊥ pi<v_1, ..., v_m> over the local ring."""

    point: Poly | None  # monic generator pi, None for infinity
    entries: tuple  # exact diagonal entries (RatFunc), units first
    valuations: tuple
    change_of_basis: tuple  # columns are the new basis vectors
    unit_residues: tuple  # residues of the u_i
    pi_residues: tuple  # residues of the v_i

    @property
    def residue_field(self):
        return _residue_field(_pi(self.point))

    def to_json(self):
        return {
            "point": _point_label(self.point),
            "units": [_fmt(x) for x in self.unit_residues],
            "uniformizers": [_fmt(x) for x in self.pi_residues],
            "valuations": list(self.valuations),
        }


def _fmt(x):
    if isinstance(x, Fraction):
        return format_rat(x)
    return x.to_json()


def _class_json(x):
    try:
        return square_class(x).to_json()
    except ScalarError:
        return _fmt(x)


def _point_label(point: Poly | None) -> str:
    if point is None:
        return "infinity"
    if point.degree == 1:
        return f"t={format_rat(-point.coeffs[0])}"
    return point.pretty("t") + "=0"


def _pi(point: Poly | None) -> Poly:
    return T if point is None else point


def _residue_field(pi: Poly):
    if pi.degree == 1:
        return None  # Q
    return NumberField(pi, check=False)


def _root(pi: Poly):
    if pi.degree == 1:
        return -pi.coeffs[0] / pi.coeffs[1]
    return NumberField(pi, check=False).gen()


def dvr_diagonalize_matrix(M, pi: Poly):
    """Diagonalize the symmetric matrix M over Q[t]_(pi).

    Returns (diagonal, P, valuations) with P^T M P = diag(diagonal), the
    columns of P being the new basis; valuations end up in {0, 1}.
    """
    n = len(M)
    A = [list(r) for r in M]
    zero, one = RatFunc.const(0), RatFunc.const(1)
    P = [[one if i == j else zero for j in range(n)] for i in range(n)]

    def val(x):
        return x.valuation(pi) if x else None

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
        best = None
        for i in range(k, n):
            for j in range(i, n):
                v = val(A[i][j])
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            raise ResidueError("form is degenerate over Q(t)")
        v = best[0]
        piv = next((i for i in range(k, n) if A[i][i] and val(A[i][i]) == v), None)
        if piv is None:
            # only off-diagonal entries reach the minimum; 2 A_ij has valuation v
            _, i, j = best
            add_into(i, j, one)
            piv = i
        if piv != k:
            swap(piv, k)
        inv = 1 / A[k][k]
        for j in range(k + 1, n):
            if A[k][j]:
                add_into(j, k, -(A[k][j] * inv))
    diag = [A[i][i] for i in range(n)]
    # strip even powers of pi
    vals = []
    for i, d in enumerate(diag):
        v = d.valuation(pi)
        h = v // 2
        if h:
            s = RatFunc(ONE, pi ** h) if h > 0 else RatFunc(pi ** (-h))
            for r in range(n):
                P[r][i] = P[r][i] * s
            diag[i] = d * s * s
        vals.append(v - 2 * h)
    return diag, P, vals


def dvr_diagonalize(ctx: ResidueContext, point: Poly | None) -> DvrDiagonal:
    at_inf = point is None
    pi = _pi(point)
    if pi.degree < 1 or pi.lead != 1:
        raise ResidueError("point must be a monic polynomial of positive degree")
    diag, P, vals = dvr_diagonalize_matrix(ctx.psi(at_inf), pi)
    order = sorted(range(len(diag)), key=lambda i: (vals[i], i))
    diag = [diag[i] for i in order]
    vals = [vals[i] for i in order]
    P = [[row[i] for i in order] for row in P]
    x = _root(pi)
    units, pis = [], []
    for d, v in zip(diag, vals):
        if v == 0:
            units.append(d.at(x))
        else:
            pis.append((d / RatFunc(pi)).at(x))
    return DvrDiagonal(point, tuple(diag), tuple(vals), tuple(tuple(r) for r in P), tuple(units), tuple(pis))


def check_dvr_diagonal(ctx: ResidueContext, D: DvrDiagonal) -> bool:
    """P^T Psi P = diag exactly over Q(t)."""
    M = ctx.psi(D.point is None)
    P = [list(r) for r in D.change_of_basis]
    n = len(M)
    MP = [[sum((M[i][k] * P[k][j] for k in range(n)), RatFunc.const(0)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            e = sum((P[k][i] * MP[k][j] for k in range(n)), RatFunc.const(0))
            if e != (D.entries[i] if i == j else 0):
                return False
    return True


def residue_element(D: DvrDiagonal):
    """(-1)^(m(m-1)/2) * prod v_i in the residue field (1 when m = 0)."""
    m = len(D.pi_residues)
    out = Fraction(1) if D.point is None or D.point.degree == 1 else NumberField(D.point, check=False).one()
    for v in D.pi_residues:
        out = out * v
    if (m * (m - 1) // 2) % 2:
        out = -out
    return out


def residue_of_clifford(ctx: ResidueContext, point: Poly | None) -> SquareClass:
    return square_class(residue_element(dvr_diagonalize(ctx, point)))


# --------------------------------------------------------------------------
# the double cover C

@dataclass(frozen=True)
class CurveC:
    disc: Poly
    constant: Fraction
    square_part: Poly
    squarefree_part: Poly  # monic

    @property
    def geometrically_reducible(self) -> bool:
        return self.squarefree_part.degree == 0

    @property
    def constant_class(self) -> SquareClass:
        return square_class(self.constant)

    def to_json(self):
        return {
            "disc": self.disc.to_json(),
            "constant": format_rat(self.constant),
            "square_part": self.square_part.to_json(),
            "squarefree_part": self.squarefree_part.to_json(),
            "geometrically_reducible": self.geometrically_reducible,
            "constant_class": self.constant_class.to_json(),
        }


def signed_disc(chi: Poly, n: int) -> Poly:
    return chi * (-1) ** (n * (n - 1) // 2)


def build_curve_C(ctx: ResidueContext, at_infinity: bool = False) -> CurveC:
    """disc(Psi) = c * H^2 * s with H, s monic and s squarefree.

    With ``at_infinity`` the chart u = 1/t is used (disc of G + uF).
    """
    P = ctx.pencil.swapped() if at_infinity else ctx.pencil
    chi, _ = char_poly(P)
    disc = signed_disc(chi, P.dim)
    c = disc.lead
    H, s = ONE, ONE
    for q, e in factor_over_Q(disc):
        H = H * q ** (e // 2)
        if e % 2:
            s = s * q
    assert H * H * s * c == disc
    return CurveC(disc, c, H, s)


# --------------------------------------------------------------------------
# plane criterion

@dataclass(frozen=True)
class PointResidue:
    point: Poly | None
    units: tuple
    uniformizers: tuple
    residue: object  # residue field element
    ramified: bool
    trivial: bool | None  # None: unsupported

    def to_json(self):
        return {
            "point": _point_label(self.point),
            "units": [_fmt(x) for x in self.units],
            "uniformizers": [_fmt(x) for x in self.uniformizers],
            "residueClass": _class_json(self.residue),
            "ramifiedOnC": self.ramified,
            "verdictContribution": "unsupported" if self.trivial is None else ("trivial" if self.trivial else "obstruction"),
        }


@dataclass(frozen=True)
class PlaneCriterionVerdict:
    tag: str  # ResiduesAllTrivial | ObstructionAt | Unsupported
    point: Poly | None = None
    residue: SquareClass | None = None
    reason: str = ""
    table: tuple = ()

    def to_json(self):
        out = {"tag": self.tag, "points": [r.to_json() for r in self.table]}
        if self.tag == "ObstructionAt":
            out["point"] = _point_label(self.point)
            out["residue"] = self.residue.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out


def _closed_points(ctx: ResidueContext) -> list[Poly | None]:
    chi, rank_g = char_poly(ctx.pencil)
    pts: list[Poly | None] = [q for q, _ in factor_over_Q(chi)]
    if chi.degree < ctx.pencil.dim:
        pts.append(INFINITY)
    return pts


def point_residue(ctx: ResidueContext, point: Poly | None) -> PointResidue:
    D = dvr_diagonalize(ctx, point)
    r = residue_element(D)
    pi = _pi(point)
    C = build_curve_C(ctx, at_infinity=point is None)
    x = _root(pi)
    s0 = C.squarefree_part(x)
    if not s0:
        # the cover ramifies here; e = 2 kills a 2-torsion residue
        return PointResidue(point, D.unit_residues, D.pi_residues, r, True, True)
    if not D.pi_residues:
        return PointResidue(point, D.unit_residues, D.pi_residues, r, False, True)
    a = C.constant * s0  # residue field on C is kappa(sqrt(a))
    try:
        trivial = is_square(r) or is_square(r * a)
    except ScalarError:
        trivial = None
    return PointResidue(point, D.unit_residues, D.pi_residues, r, False, trivial)


def plane_criterion(ctx: ResidueContext) -> PlaneCriterionVerdict:
    n = ctx.pencil.dim
    if has_member_of_rank_at_most(ctx.pencil, n - 3):
        raise PencilError("rank <= 5 member present" if n == 8 else "member of rank <= n - 3 present")
    table = tuple(point_residue(ctx, pt) for pt in _closed_points(ctx))
    for row in table:
        if row.trivial is None:
            return PlaneCriterionVerdict("Unsupported", row.point, None,
                                         "unsupported residue field degree", table)
    for row in table:
        if row.trivial is False:
            return PlaneCriterionVerdict("ObstructionAt", row.point, square_class(row.residue), "", table)
    return PlaneCriterionVerdict("ResiduesAllTrivial", None, None, "", table)
