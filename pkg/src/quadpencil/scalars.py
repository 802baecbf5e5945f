"""Exact scalars: rationals, univariate polynomials, number fields, finite fields.

Rationals are plain :class:`fractions.Fraction` values.  Number-field and
finite-field elements are small immutable classes that support the usual
arithmetic operators, so the matrix code in :mod:`quadpencil.forms` runs
unchanged over any of these fields.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.factortools import dup_factor_list


class ScalarError(ValueError):
    pass


# --------------------------------------------------------------------------
# rationals

def as_fraction(x) -> Fraction:
    """Coerce int, Fraction or a ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ScalarError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise ScalarError(f"not a rational: {x!r}") from exc
    raise ScalarError(f"not a rational: {x!r}")


def format_rat(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def factor_integer(n: int) -> dict[int, int]:
    n = abs(int(n))
    if n == 0:
        raise ScalarError("cannot factor 0")
    if n.bit_length() > 200:
        raise ScalarError("integer too large to factor reliably")
    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


def squarefree_int(n: int) -> int:
    """Squarefree integer in the square class of ``n`` (sign kept)."""
    if n == 0:
        raise ScalarError("zero has no square class")
    out = -1 if n < 0 else 1
    for p, e in factor_integer(n).items():
        if e % 2:
            out *= p
    return out


def rational_squarefree(x: Fraction) -> int:
    x = as_fraction(x)
    return squarefree_int(x.numerator * x.denominator)


def is_rational_square(x: Fraction) -> bool:
    x = as_fraction(x)
    if x < 0:
        return False
    if x == 0:
        return True
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    return rn * rn == n and rd * rd == d


def rational_sqrt(x: Fraction) -> Fraction | None:
    x = as_fraction(x)
    if not is_rational_square(x):
        return None
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))


def valuation(x: Fraction, p: int) -> int:
    x = as_fraction(x)
    if x == 0:
        raise ScalarError("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational of least denominator in the open interval (lo, hi).

    Walks the Stern-Brocot tree by mediants (continued fractions).
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ScalarError("empty interval")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    # lo and hi share the integer part; recurse on reciprocals of the tails
    if lo == fl:
        return fl + 1 / Fraction(math.floor(1 / (hi - fl)) + 1)
    a, b = hi - fl, lo - fl
    return fl + 1 / simplest_between(1 / a, 1 / b)


# --------------------------------------------------------------------------
# polynomials

class Poly:
    """Univariate polynomial, coefficients lowest degree first.

    Coefficients may be any field elements supporting ``+ - * /``; the
    zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, coeffs: Iterable) -> "Poly":
        return cls(Fraction(c) for c in coeffs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,)) if other else Poly()
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return x * 0
        return acc

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([a[i] + b[i] if i < len(b) else a[i] for i in range(len(a))])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Poly((self.coeffs[0] ** 0,)) if self.coeffs else Poly((Fraction(1),))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = other.degree
        inv = 1 / other.lead
        if len(r) - 1 < dq:
            return Poly(), self
        q = [inv * 0] * (len(r) - dq)
        for k in range(len(r) - 1 - dq, -1, -1):
            c = r[k + dq] * inv
            q[k] = c
            if c:
                for j, oc in enumerate(other.coeffs):
                    r[k + j] = r[k + j] - c * oc
        return Poly(q), Poly(r[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if not self:
            return self
        inv = 1 / self.lead
        return Poly(c * inv for c in self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(c * i for i, c in enumerate(self.coeffs) if i)

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def reverse(self, n: int | None = None) -> "Poly":
        """``t^n f(1/t)`` with ``n`` defaulting to the degree."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        cs = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return Poly(reversed(cs))

    def to_json(self) -> list[str]:
        return [format_rat(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Poly":
        return cls(as_fraction(c) for c in data)

    def pretty(self, var: str = "t") -> str:
        if not self:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = format_rat(c) if isinstance(c, Fraction) else str(c)
            if i == 0:
                terms.append(cs)
            else:
                mon = var if i == 1 else f"{var}^{i}"
                terms.append(mon if cs == "1" else ("-" + mon if cs == "-1" else f"{cs}*{mon}"))
        return " + ".join(terms).replace("+ -", "- ")


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = Poly((Fraction(1),)), Poly()
    t0, t1 = Poly(), Poly((Fraction(1),))
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = 1 / r0.lead
    return r0 * inv, s0 * inv, t0 * inv


def squarefree_part(f: Poly) -> Poly:
    g = poly_gcd(f, f.derivative())
    return (f // g).monic()


def is_squarefree(f: Poly) -> bool:
    return poly_gcd(f, f.derivative()).degree == 0


def _to_primitive_int(f: Poly) -> list[int]:
    den = reduce(math.lcm, (Fraction(c).denominator for c in f.coeffs), 1)
    return [int(Fraction(c) * den) for c in f.coeffs]


def factor_over_Q(f: Poly) -> list[tuple[Poly, int]]:
    """Factor a rational polynomial into monic irreducibles with multiplicities.

    The leading coefficient of ``f`` is the omitted constant.  Factors come
    back sorted by degree, then by coefficients.
    """
    if not f:
        raise ScalarError("zero polynomial has no factorization")
    if f.degree == 0:
        return []
    ints = _to_primitive_int(f)
    _, facs = dup_factor_list(list(reversed(ints)), ZZ)
    out = []
    for g, e in facs:
        p = Poly(Fraction(int(c)) for c in reversed(g)).monic()
        out.append((p, int(e)))
    out.sort(key=lambda pe: (pe[0].degree, pe[0].coeffs))
    return out


# --------------------------------------------------------------------------
# fields

class Rationals:
    """The field Q; elements are Fractions."""

    kind = "Rationals"
    characteristic = 0
    degree = 1

    def __call__(self, x) -> Fraction:
        if isinstance(x, (NFElem, GFElem)):
            raise ScalarError("cannot coerce into Q")
        return as_fraction(x)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def to_json(self):
        return {"kind": "Rationals"}


QQ = Rationals()


class NumberField:
    """Q[t]/(minpoly) for an irreducible monic rational polynomial."""

    kind = "NumberField"
    characteristic = 0

    def __init__(self, minpoly: Poly, check: bool = True):
        minpoly = Poly(Fraction(c) for c in minpoly.coeffs).monic()
        if minpoly.degree < 1:
            raise ScalarError("minimal polynomial must have positive degree")
        if check:
            facs = factor_over_Q(minpoly)
            if len(facs) != 1 or facs[0][1] != 1:
                raise ScalarError("minimal polynomial is not irreducible over Q")
        self.minpoly = minpoly
        self.degree = minpoly.degree

    def __call__(self, x) -> "NFElem":
        if isinstance(x, NFElem):
            if x.field != self:
                raise ScalarError("element of a different number field")
            return x
        if isinstance(x, Poly):
            return NFElem(self, x % self.minpoly)
        return NFElem(self, Poly((as_fraction(x),)))

    def gen(self) -> "NFElem":
        return self(Poly.x())

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.minpoly == self.minpoly

    def __hash__(self):
        return hash(("NF", self.minpoly.coeffs))

    def __repr__(self):
        return f"NumberField({self.minpoly.pretty()})"

    def to_json(self):
        return {"kind": "NumberField", "minpoly": self.minpoly.to_json()}


class NFElem:
    __slots__ = ("field", "rep")

    def __init__(self, field: NumberField, rep: Poly):
        self.field = field
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, NFElem):
            return other
        return self.field(other)

    def __add__(self, other):
        return NFElem(self.field, self.rep + self._coerce(other).rep)

    __radd__ = __add__

    def __sub__(self, other):
        return NFElem(self.field, self.rep - self._coerce(other).rep)

    def __rsub__(self, other):
        return NFElem(self.field, self._coerce(other).rep - self.rep)

    def __neg__(self):
        return NFElem(self.field, -self.rep)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, self.rep * Fraction(other))
        return NFElem(self.field, (self.rep * self._coerce(other).rep) % self.field.minpoly)

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if not self.rep:
            raise ZeroDivisionError("inverse of zero in a number field")
        g, s, _ = poly_xgcd(self.rep, self.field.minpoly)
        if g.degree != 0:
            raise ZeroDivisionError("non-invertible element (reducible modulus?)")
        return NFElem(self.field, s % self.field.minpoly)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, self.rep * (1 / Fraction(other)))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.field.one(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self):
        return bool(self.rep)

    def __eq__(self, other):
        if isinstance(other, NFElem):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, (int, Fraction)):
            return self.rep == Poly((Fraction(other),))
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.rep))

    def is_rational(self) -> bool:
        return self.rep.degree <= 0

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ScalarError("element is not rational")
        return self.rep.coeffs[0] if self.rep else Fraction(0)

    def coeffs(self) -> list[Fraction]:
        cs = list(self.rep.coeffs)
        return cs + [Fraction(0)] * (self.field.degree - len(cs))

    def norm(self) -> Fraction:
        """Field norm, as det of the multiplication matrix."""
        from quadpencil.forms import mat_det  # local: forms imports scalars
        d = self.field.degree
        basis = [self.field(Poly([Fraction(0)] * i + [Fraction(1)])) for i in range(d)]
        cols = [(self * b).coeffs() for b in basis]
        return mat_det([[cols[j][i] for j in range(d)] for i in range(d)])

    def __repr__(self):
        return f"[{self.rep.pretty('a')}]"

    def to_json(self):
        return {"minpoly": self.field.minpoly.to_json(), "rep": self.rep.to_json()}


def nf_from_json(data: dict) -> NFElem:
    K = NumberField(Poly.from_json(data["minpoly"]))
    return K(Poly.from_json(data["rep"]))


def is_prime(n: int) -> bool:
    return n >= 2 and bool(sympy.isprime(n))


class FiniteField:
    """F_q with q = p^k, elements encoded as integers 0..q-1.

    The code of ``a_0 + a_1 x + ... `` is ``a_0 + a_1 p + ...``, so the
    prime field is encoded by its residues.  For k > 1 a monic irreducible
    modulus is chosen (the lexicographically first Conway-free one) unless
    given.
    """

    kind = "FiniteField"
    TABLE_LIMIT = 2048

    def __init__(self, p: int, k: int = 1, minpoly: Sequence[int] | None = None):
        if not is_prime(p):
            raise ScalarError(f"{p} is not prime")
        if k < 1:
            raise ScalarError("extension degree must be positive")
        self.p = p
        self.k = k
        self.q = p ** k
        self.characteristic = p
        self.degree = k
        if k == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = tuple(minpoly) if minpoly is not None else self._find_irreducible()
            if len(self.modulus) != k + 1 or self.modulus[-1] % p != 1:
                raise ScalarError("modulus must be monic of degree k")
        self._tables = None

    # polynomial helpers over F_p, coefficient lists lowest first
    def _digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(code % self.p)
            code //= self.p
        return out

    def _code(self, digits: Sequence[int]) -> int:
        c = 0
        for d in reversed(digits):
            c = c * self.p + d % self.p
        return c

    def _find_irreducible(self) -> tuple[int, ...]:
        p, k = self.p, self.k
        for tail in range(p ** k):
            cs = []
            t = tail
            for _ in range(k):
                cs.append(t % p)
                t //= p
            cs.append(1)
            if cs[0] == 0:
                continue
            poly = sympy.Poly(list(reversed(cs)), sympy.Symbol("x"), modulus=p)
            if poly.is_irreducible:
                return tuple(cs)
        raise ScalarError("no irreducible polynomial found")

    def _mul_codes(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        m = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                for j in range(k + 1):
                    prod[d - k + j] = (prod[d - k + j] - c * m[j]) % p
        return self._code(prod[:k])

    def _add_codes(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self._code([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def tables(self):
        """Addition/multiplication/negation/inverse tables (cached)."""
        if self._tables is None:
            if self.q > self.TABLE_LIMIT:
                raise ScalarError("field too large for table arithmetic")
            q = self.q
            add = [self._add_codes(a, b) for a in range(q) for b in range(q)]
            mul = [self._mul_codes(a, b) for a in range(q) for b in range(q)]
            neg = [0] * q
            inv = [0] * q
            for a in range(q):
                for b in range(q):
                    if add[a * q + b] == 0:
                        neg[a] = b
                    if mul[a * q + b] == 1:
                        inv[a] = b
            self._tables = (add, mul, neg, inv)
        return self._tables

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.q <= self.TABLE_LIMIT:
            return self.tables()[0][a * self.q + b]
        return self._add_codes(a, b)

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if self.q <= self.TABLE_LIMIT:
            return self.tables()[1][a * self.q + b]
        return self._mul_codes(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self._code([-x for x in self._digits(a)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self.pow_code(a, self.q - 2)

    def pow_code(self, a: int, e: int) -> int:
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def __call__(self, x) -> "GFElem":
        if isinstance(x, GFElem):
            if x.field != self:
                raise ScalarError("element of a different finite field")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ScalarError(f"denominator divisible by {self.p}")
            num = x.numerator % self.p
            return GFElem(self, self.mul(num, self.inv(x.denominator % self.p)))
        if isinstance(x, int):
            return GFElem(self, x % self.p)
        raise ScalarError(f"cannot coerce {x!r} into F_{self.q}")

    def elem(self, code: int) -> "GFElem":
        return GFElem(self, code)

    def elements(self):
        return [GFElem(self, c) for c in range(self.q)]

    def zero(self):
        return GFElem(self, 0)

    def one(self):
        return GFElem(self, 1)

    def is_square_code(self, a: int) -> bool:
        if a == 0:
            return True
        return self.pow_code(a, (self.q - 1) // 2) == 1

    def frobenius_code(self, a: int) -> int:
        return self.pow_code(a, self.p)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self):
        return hash(("GF", self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def to_json(self):
        return {"kind": "FiniteField", "p": self.p, "k": self.k, "minpoly": list(self.modulus)}


class GFElem:
    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = code

    def _c(self, other) -> int:
        if isinstance(other, GFElem):
            return other.code
        return self.field(other).code

    def __add__(self, other):
        return GFElem(self.field, self.field.add(self.code, self._c(other)))

    __radd__ = __add__

    def __neg__(self):
        return GFElem(self.field, self.field.neg(self.code))

    def __sub__(self, other):
        return GFElem(self.field, self.field.add(self.code, self.field.neg(self._c(other))))

    def __rsub__(self, other):
        return GFElem(self.field, self.field.add(self._c(other), self.field.neg(self.code)))

    def __mul__(self, other):
        return GFElem(self.field, self.field.mul(self.code, self._c(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return GFElem(self.field, self.field.mul(self.code, self.field.inv(self._c(other))))

    def __rtruediv__(self, other):
        return GFElem(self.field, self.field.mul(self._c(other), self.field.inv(self.code)))

    def __pow__(self, e: int):
        if e < 0:
            return GFElem(self.field, self.field.pow_code(self.field.inv(self.code), -e))
        return GFElem(self.field, self.field.pow_code(self.code, e))

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, GFElem):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field(other).code
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.code))

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"{self.code}"


def field_from_json(data: dict):
    kind = data.get("kind")
    if kind == "Rationals":
        return QQ
    if kind == "NumberField":
        return NumberField(Poly.from_json(data["minpoly"]))
    if kind == "FiniteField":
        return FiniteField(int(data["p"]), int(data.get("k", 1)), data.get("minpoly"))
    raise ScalarError(f"unknown field kind {kind!r}")


# --------------------------------------------------------------------------
# square classes

def _quadratic_parts(c: NFElem) -> tuple[Fraction, Fraction, Fraction]:
    """Write c = u + v*sqrt(D) for the quadratic field of c."""
    K = c.field
    if K.degree != 2:
        raise ScalarError("unsupported residue field degree")
    c0, b = K.minpoly.coeffs[0], K.minpoly.coeffs[1]
    D = b * b - 4 * c0
    x0, x1 = c.coeffs()
    # generator a = (-b + sqrt(D)) / 2
    return x0 - x1 * b / 2, x1 / 2, D


def is_square_in_quadratic_field(c: NFElem) -> bool:
    """Exact squareness test in a quadratic number field.

    With c = u + v*sqrt(d): for v = 0, c is a square iff u or u/d is a
    rational square; otherwise u^2 - d v^2 must be a rational square w^2
    and (u + w)/2 a rational square x^2 for one choice of sign of w.
    """
    if not isinstance(c, NFElem):
        raise ScalarError("expected a number-field element")
    if not c:
        raise ScalarError("zero has no square class")
    u, v, d = _quadratic_parts(c)
    if is_rational_square(d):
        raise ScalarError("field is not quadratic over Q")
    if v == 0:
        return is_rational_square(u) or is_rational_square(u / d)
    w = rational_sqrt(u * u - d * v * v)
    if w is None:
        return False
    for ws in (w, -w):
        x = rational_sqrt((u + ws) / 2)
        if x:
            y = v / (2 * x)
            if x * x + d * y * y == u and 2 * x * y == v:
                return True
    return False


def is_square(x) -> bool:
    """Squareness over Q, a quadratic field, or a finite field."""
    if isinstance(x, (int, Fraction)):
        return is_rational_square(Fraction(x))
    if isinstance(x, GFElem):
        return x.field.is_square_code(x.code)
    if isinstance(x, NFElem):
        if x.field.degree == 1:
            return is_rational_square(x.rational())
        return is_square_in_quadratic_field(x)
    raise ScalarError(f"unsupported element {x!r}")


class SquareClass:
    """An element of K*/(K*)^2 for K = Q or a quadratic field.

    Over Q the representative is a squarefree integer.  In a quadratic
    field a rational representative is reduced to a squarefree integer
    (choosing the smaller of r and r*d in absolute value, since d is a
    square there); non-rational representatives are kept as given and
    compared by a squareness test of the quotient.
    """

    __slots__ = ("field", "rep")

    def __init__(self, field, rep):
        self.field = field
        self.rep = rep

    def is_trivial(self) -> bool:
        if isinstance(self.rep, NFElem):
            return is_square(self.rep)
        return self.rep == 1

    def __eq__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        if self.field != other.field:
            return False
        a, b = self.rep, other.rep
        if isinstance(a, NFElem) or isinstance(b, NFElem):
            K = self.field
            return is_square(K(a) / K(b))
        return a == b

    def __hash__(self):
        if isinstance(self.rep, NFElem):
            return hash(self.field)
        return hash(self.rep)

    def __mul__(self, other):
        if isinstance(self.field, Rationals):
            return square_class(Fraction(self.rep) * Fraction(other.rep))
        K = self.field
        return square_class(K(self.rep) * K(other.rep))

    def __repr__(self):
        return f"SquareClass({self.rep!r})"

    def to_json(self):
        if isinstance(self.rep, NFElem):
            return self.rep.to_json()
        if isinstance(self.field, NumberField):
            return {"minpoly": self.field.minpoly.to_json(), "rep": [str(self.rep)]}
        return str(self.rep)


def square_class(x) -> SquareClass:
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        if x == 0:
            raise ScalarError("zero has no square class")
        return SquareClass(QQ, rational_squarefree(x))
    if isinstance(x, NFElem):
        K = x.field
        if not x:
            raise ScalarError("zero has no square class")
        if K.degree == 1:
            return square_class(x.rational())
        if K.degree > 2:
            raise ScalarError("unsupported residue field degree")
        if is_square(x):
            return SquareClass(K, 1)
        if x.is_rational():
            r = rational_squarefree(x.rational())
            _, _, D = _quadratic_parts(x)
            alt = rational_squarefree(r * D)
            return SquareClass(K, min((abs(r), r), (abs(alt), alt))[1])
        return SquareClass(K, x)
    raise ScalarError(f"unsupported element {x!r}")


# --------------------------------------------------------------------------
# real roots

def sturm_sequence(f: Poly) -> list[Poly]:
    seq = [f, f.derivative()]
    while seq[-1] and seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if not r:
            break
        seq.append(r)
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(seq: list[Poly], a: Fraction, b: Fraction) -> int:
    """Number of roots in the half-open interval (a, b]."""
    return _sign_changes([p(a) for p in seq]) - _sign_changes([p(b) for p in seq])


def root_bound(f: Poly) -> Fraction:
    lead = abs(f.lead)
    return 1 + max((abs(c) / lead for c in f.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(f: Poly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, one per real root, in increasing order.

    An exact rational root r is returned as the degenerate interval (r, r);
    otherwise the root lies strictly inside (lo, hi).  Consecutive intervals
    are separated by a positive gap.
    """
    if not f:
        raise ScalarError("zero polynomial")
    f = Poly(Fraction(c) for c in f.coeffs)
    if f.degree == 0:
        return []
    if not is_squarefree(f):
        raise ScalarError("take squarefree part first")
    seq = sturm_sequence(f)
    B = root_bound(f)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = count_real_roots(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    # roots in (a, b]; make them open or exact, then separate
    refined = []
    for a, b in out:
        if f(b) == 0:
            refined.append((b, b))
        else:
            refined.append((a, b))
    refined.sort()
    return _separate(f, seq, refined)


def _separate(f: Poly, seq, ivs):
    ivs = list(ivs)
    changed = True
    while changed:
        changed = False
        for i in range(len(ivs) - 1):
            (a1, b1), (a2, b2) = ivs[i], ivs[i + 1]
            if b1 < a2:
                continue
            changed = True
            if a1 != b1:
                ivs[i] = _shrink(f, seq, a1, b1)
            if a2 != b2:
                ivs[i + 1] = _shrink(f, seq, a2, b2)
    return ivs


def _shrink(f: Poly, seq, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    m = (a + b) / 2
    if f(m) == 0:
        return (m, m)
    if count_real_roots(seq, a, m) == 1:
        return (a, m)
    return (m, b)


def refine_interval(f: Poly, a: Fraction, b: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    if a == b:
        return a, b
    seq = sturm_sequence(f)
    while b - a > width:
        a, b = _shrink(f, seq, a, b)
        if a == b:
            break
    return a, b
