"""Local and global invariants of rational quadratic forms.

Places of Q are ``REAL`` or ``LocalPlace(p)``.  Everything here is decided
by closed-form rules on a diagonalization; the brute-force counterparts used
for testing live in :mod:`quadpencil.oracles`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from quadpencil import kernels
from quadpencil.forms import QuadraticForm, diagonalize, nondegenerate_part, signature
from quadpencil.pencil import Pencil
from quadpencil.scalars import (
    as_fraction,
    factor_integer,
    is_prime,
    is_rational_square,
    rational_squarefree,
    valuation,
)


class LocalError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class LocalPlace:
    """A place of Q; ``p = 0`` stands for the real place."""

    p: int = 0

    @property
    def is_real(self) -> bool:
        return self.p == 0

    def __str__(self):
        return "inf" if self.is_real else str(self.p)

    @classmethod
    def parse(cls, s: str) -> "LocalPlace":
        s = str(s).strip().lower()
        if s in ("inf", "real", "r", "oo"):
            return REAL
        try:
            p = int(s)
        except ValueError as exc:
            raise LocalError(f"not a place: {s!r}") from exc
        if not is_prime(p):
            raise LocalError(f"{p} is not prime")
        return cls(p)


REAL = LocalPlace(0)


def _split(x: Fraction, p: int) -> tuple[int, int]:
    """x = p^v * u with u a p-adic unit; returns (v, integer congruent to u's class).

    The integer is num * den with p-parts removed, which has the same square
    class as the unit part.
    """
    x = as_fraction(x)
    v = valuation(x, p)
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
    while d % p == 0:
        d //= p
    return v, n * d


def _legendre(u: int, p: int) -> int:
    return 1 if pow(u % p, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a, b, v: LocalPlace) -> int:
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise LocalError("Hilbert symbol needs nonzero arguments")
    if v.is_real:
        return -1 if (a < 0 and b < 0) else 1
    p = v.p
    alpha, u = _split(a, p)
    beta, w = _split(b, p)
    if p != 2:
        sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        return sign * _legendre(u, p) ** (beta % 2) * _legendre(w, p) ** (alpha % 2)

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
    return -1 if e % 2 else 1


def hasse_invariant(d, v: LocalPlace) -> int:
    d = [as_fraction(x) for x in d]
    if any(x == 0 for x in d):
        raise LocalError("diagonal entries must be nonzero")
    out = 1
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            out *= hilbert_symbol(d[i], d[j], v)
    return out


def is_local_square(x, v: LocalPlace) -> bool:
    x = as_fraction(x)
    if x == 0:
        return True
    if v.is_real:
        return x > 0
    k, u = _split(x, v.p)
    if k % 2:
        return False
    if v.p == 2:
        return u % 8 == 1
    return _legendre(u, v.p) == 1


def _isotropic_invariants(n: int, d: Fraction, eps: int, v: LocalPlace) -> bool:
    if n <= 1:
        return False
    if n == 2:
        return is_local_square(-d, v)
    if n == 3:
        return eps == hilbert_symbol(-1, -d, v)
    if n == 4:
        return not is_local_square(d, v) or eps == hilbert_symbol(-1, -1, v)
    return True


def witt_index_invariants(n: int, d, eps: int, v: LocalPlace) -> int:
    """Witt index at a finite place of the nondegenerate form with the given
    dimension, determinant and Hasse invariant."""
    d = as_fraction(d)
    idx = 0
    while _isotropic_invariants(n, d, eps, v):
        # q = H + q' with disc(q') = -d and eps(q') = eps * (-1, -d)
        eps = eps * hilbert_symbol(-1, -d, v)
        d = -d
        n -= 2
        idx += 1
    return idx


@dataclass(frozen=True)
class WittData:
    place: LocalPlace
    dim: int
    disc: int
    hasse: int
    witt_index: int
    signature: tuple[int, int] | None = None
    radical_dim: int = 0

    @property
    def anisotropic_dim(self) -> int:
        return self.dim - 2 * self.witt_index

    def to_json(self):
        return {
            "place": str(self.place),
            "dim": self.dim,
            "disc": self.disc,
            "hasse": self.hasse,
            "witt_index": self.witt_index,
            "signature": None if self.signature is None else list(self.signature),
            "radical_dim": self.radical_dim,
        }

    @classmethod
    def from_json(cls, d):
        sig = d["signature"]
        return cls(LocalPlace.parse(d["place"]), int(d["dim"]), int(d["disc"]), int(d["hasse"]),
                   int(d["witt_index"]), None if sig is None else tuple(sig), int(d["radical_dim"]))


def _diagonal_entries(q: QuadraticForm) -> tuple[list[Fraction], int]:
    core, rad = nondegenerate_part(q)
    if core is None:
        return [], rad
    return [core.gram[i][i] for i in range(core.dim)], rad


def witt_data_diagonal(d, v: LocalPlace, radical_dim: int = 0) -> WittData:
    d = [as_fraction(x) for x in d]
    n = len(d)
    if n == 0:
        return WittData(v, 0, 1, 1, 0, (0, 0) if v.is_real else None, radical_dim)
    det = prod(d, start=Fraction(1))
    eps = hasse_invariant(d, v)
    if v.is_real:
        sig = (sum(1 for x in d if x > 0), sum(1 for x in d if x < 0))
        return WittData(v, n, rational_squarefree(det), eps, min(sig), sig, radical_dim)
    return WittData(v, n, rational_squarefree(det), eps, witt_index_invariants(n, det, eps, v), None, radical_dim)


def witt_index_local(q: QuadraticForm, v: LocalPlace) -> WittData:
    """Witt data of q at v, computed on q modulo its radical."""
    d, rad = _diagonal_entries(q)
    return witt_data_diagonal(d, v, rad)


def checking_places(d) -> list[LocalPlace]:
    """Real place plus the primes dividing 2 and any numerator or denominator."""
    primes = {2}
    for x in d:
        x = as_fraction(x)
        for m in (x.numerator, x.denominator):
            if abs(m) > 1:
                primes.update(factor_integer(m))
    return [REAL] + [LocalPlace(p) for p in sorted(primes)]


def _unimodular_outside(d, places) -> bool:
    ps = {v.p for v in places}
    return all(valuation(x, p) == 0 for x in d for p in _support(x) if p not in ps)


def _support(x: Fraction) -> set[int]:
    s = set()
    for m in (x.numerator, x.denominator):
        if abs(m) > 1:
            s.update(factor_integer(m))
    return s


def global_witt_index(d) -> tuple[int, dict[LocalPlace, WittData]]:
    """Witt index over Q of the nondegenerate diagonal form d.

    The index over Q is the minimum of the local indices (iterate
    Hasse-Minkowski and cancel).  Off the checking set the form is
    unimodular at an odd prime, where the index is floor(n/2) except for even
    n with (-1)^(n/2) det a non-square unit; that happens at infinitely many
    primes unless (-1)^(n/2) det is a rational square.
    """
    d = [as_fraction(x) for x in d]
    places = checking_places(d)
    assert _unimodular_outside(d, places)
    data = {v: witt_data_diagonal(d, v) for v in places}
    n = len(d)
    idx = min((w.witt_index for w in data.values()), default=0)
    if n % 2 == 0 and n > 0:
        det = prod(d, start=Fraction(1))
        generic = n // 2 if is_rational_square((-1) ** (n // 2) * det) else n // 2 - 1
        idx = min(idx, generic)
    else:
        idx = min(idx, n // 2)
    return idx, data


def splits_m_hyperbolic_global(q: QuadraticForm, m: int) -> tuple[bool, str]:
    """Whether q contains m hyperbolic planes over Q, with a short reason."""
    if q.field.__class__.__name__ != "Rationals":
        raise LocalError("form must be rational")
    d, rad = _diagonal_entries(q)
    if rad:
        raise LocalError("form must be nondegenerate")
    if 2 * m > q.dim:
        return False, f"m = {m} exceeds dim/2"
    if m <= 0:
        return True, "nothing to split"
    idx, data = global_witt_index(d)
    if idx >= m:
        return True, f"global Witt index {idx}"
    bad = [str(v) for v, w in data.items() if w.witt_index < m]
    if bad:
        return False, "local Witt index below m at " + ",".join(bad)
    return False, "discriminant obstruction at infinitely many primes"


def isotropic_over_Q(q: QuadraticForm) -> bool:
    if q.is_zero():
        raise LocalError("zero form")
    d, rad = _diagonal_entries(q)
    if rad:
        return True
    if len(d) == 1:
        return False
    return global_witt_index(d)[0] >= 1


# --------------------------------------------------------------------------
# bounded point searches

@dataclass(frozen=True)
class FoundSmoothLift:
    point: tuple[int, ...]
    modulus: int

    def to_json(self):
        return {"status": "found", "point": list(self.point), "modulus": self.modulus}


@dataclass(frozen=True)
class NotFoundUpTo:
    precision: int
    reason: str = "no smooth point mod p"

    def to_json(self):
        return {"status": "inconclusive", "precision": self.precision, "reason": self.reason}


def _primitive(C: list[list[int]]) -> list[list[int]]:
    g = 0
    for r in C:
        for c in r:
            g = gcd(g, c)
    return [[c // g for c in r] for r in C] if g > 1 else C


def _upper_flat(C: list[list[int]], p: int) -> list[int]:
    n = len(C)
    return [C[i][j] % p for i in range(n) for j in range(i, n)]


def _eval_int(C, x) -> int:
    n = len(C)
    return sum(C[i][j] * x[i] * x[j] for i in range(n) for j in range(i, n) if C[i][j])


def _grad_int(C, x) -> list[int]:
    n = len(C)
    g = [0] * n
    for i in range(n):
        for j in range(i, n):
            c = C[i][j]
            if not c:
                continue
            if i == j:
                g[i] += 2 * c * x[i]
            else:
                g[i] += c * x[j]
                g[j] += c * x[i]
    return g


def _unit_minor(g1, g2, p) -> tuple[int, int] | None:
    n = len(g1)
    for i in range(n):
        for j in range(i + 1, n):
            if (g1[i] * g2[j] - g1[j] * g2[i]) % p:
                return i, j
    return None


def local_point_search_intersection(X: Pencil, p: int, precision: int | None = None):
    """Smooth point of X mod p lifted to X mod p^precision, or an inconclusive verdict."""
    if not is_prime(p):
        raise LocalError(f"{p} is not prime")
    if precision is None:
        precision = 8 if p == 2 else 4
    if precision < 1:
        raise LocalError("precision must be positive")
    if p ** precision > 10 ** 18:
        raise LocalError("precision too large")
    n = X.dim
    if p ** n > 10 ** 9:
        raise LocalError("enumeration too large")
    CF = _primitive(X.F.integral_coefficients())
    CG = _primitive(X.G.integral_coefficients())
    pts = kernels.zero_points(n, [_upper_flat(CF, p), _upper_flat(CG, p)], p, p, 1)
    mod = p ** precision
    for x in pts:
        x = list(x)
        g1, g2 = _grad_int(CF, x), _grad_int(CG, x)
        ij = _unit_minor(g1, g2, p)
        if ij is None:
            continue
        i, j = ij
        # Newton on coordinates i, j; each step gains at least one digit
        for _ in range(4 * precision + 4):
            f, g = _eval_int(CF, x) % mod, _eval_int(CG, x) % mod
            if f == 0 and g == 0:
                return FoundSmoothLift(tuple(c % mod for c in x), mod)
            g1, g2 = _grad_int(CF, x), _grad_int(CG, x)
            det = g1[i] * g2[j] - g1[j] * g2[i]
            dinv = pow(det, -1, mod)
            di = (-(g2[j] * f - g1[j] * g) * dinv) % mod
            dj = (-(-g2[i] * f + g1[i] * g) * dinv) % mod
            x[i] = (x[i] + di) % mod
            x[j] = (x[j] + dj) % mod
        raise LocalError("Hensel iteration failed to converge")
    return NotFoundUpTo(precision)


def rational_point_search(X: Pencil, height: int) -> tuple[int, ...] | None:
    """First primitive integer point with |x_i| <= height on F = G = 0."""
    if height < 1:
        raise LocalError("height bound must be at least 1")
    n = X.dim
    CF = X.F.integral_coefficients()
    CG = X.G.integral_coefficients()
    found = kernels.int_point_search(n, [c for r in CF for c in r], [c for r in CG for c in r], height)
    if found is not None:
        assert X.F(list(found)) == 0 and X.G(list(found)) == 0
    return found
