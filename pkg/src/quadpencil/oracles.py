"""Brute-force oracles, kept independent of the invariant formulas.

These are slow, exhaustive, and only meant for the test harness and the
``verify`` suites.  Nothing in here calls Hilbert symbols or Hasse invariants.
"""
from __future__ import annotations

from fractions import Fraction

from quadpencil.forms import QuadraticForm, diagonalize, orthogonal_complement, restrict, Subspace
from quadpencil.scalars import as_fraction, valuation


def _padic_int(r: Fraction, p: int, N: int) -> int:
    """Integer z with v_p(r - z) >= N, for r with v_p(r) >= 0."""
    r = as_fraction(r)
    if r == 0:
        return 0
    mod = p ** N
    return r.numerator * pow(r.denominator, -1, mod) % mod


def _strip(a: Fraction, p: int) -> Fraction:
    """a / p^(2 floor(v/2)), so the valuation becomes 0 or 1."""
    v = valuation(a, p)
    return a / Fraction(p) ** (2 * (v // 2))


def _search_mod(a: list[Fraction], p: int, k: int):
    """A primitive x mod p^k with sum a_i x_i^2 = 0 mod p^k and 2e+1 <= k,
    e = min v_p(2 a_i x_i).  Such x lift to an exact p-adic zero, and every
    p-adic zero has a primitive representative of this kind.

    Dynamic programming over (sum mod p^k, e, primitive), with bitsets over
    the sum coordinate; backtracking recovers a witness.
    """
    M = p ** k
    full = (1 << M) - 1
    emax = (k - 1) // 2
    ecap = emax + 1  # "too large"
    units = [_padic_int(ai / p ** valuation(ai, p), p, k) for ai in a]
    vals = [valuation(ai, p) + (1 if p == 2 else 0) for ai in a]

    def vp(x):
        if x % M == 0:
            return k
        c = 0
        while x % p == 0:
            x //= p
            c += 1
        return c

    # per variable: map (contribution, e', primitive') -> a representative x
    moves = []
    for i, ai in enumerate(a):
        coef = (units[i] * p ** valuation(ai, p)) % M
        mv = {}
        for x in range(M):
            e = min(ecap, vals[i] + vp(x))
            key = ((coef * x * x) % M, e, x % p != 0)
            mv.setdefault(key, x)
        moves.append(mv)

    def rot(mask, c):
        if c == 0:
            return mask
        return ((mask << c) | (mask >> (M - c))) & full

    # layers[i][(e, prim)] = bitset of reachable sums after i variables
    layers = [{(ecap, False): 1}]
    for mv in moves:
        cur = layers[-1]
        nxt = {}
        for (c, e2, u2) in mv:
            for (e1, u1), mask in cur.items():
                key = (min(e1, e2), u1 or u2)
                nxt[key] = nxt.get(key, 0) | rot(mask, c)
        layers.append(nxt)
    final = layers[-1]
    goal = next(((e, True) for e in range(emax + 1) if final.get((e, True), 0) & 1), None)
    if goal is None:
        return None
    # walk back
    x = [0] * len(a)
    s, state = 0, goal
    for i in range(len(a) - 1, -1, -1):
        prev = layers[i]
        done = False
        for (c, e2, u2), rep in moves[i].items():
            for (e1, u1), mask in prev.items():
                if (min(e1, e2), u1 or u2) != state:
                    continue
                s0 = (s - c) % M
                if mask >> s0 & 1:
                    x[i] = rep
                    s, state = s0, (e1, u1)
                    done = True
                    break
            if done:
                break
        assert done
    return x


def _hensel(a: list[Fraction], x: list[int], p: int, target: int) -> list[Fraction]:
    """Refine x to v_p(Q(x)) >= target by Newton steps in one coordinate."""
    x = [Fraction(c) for c in x]
    e, i = min((valuation(2 * ai * xi, p), j) for j, (ai, xi) in enumerate(zip(a, x)) if xi)
    for _ in range(4 * target + 8):
        q = sum(ai * xi * xi for ai, xi in zip(a, x))
        if q == 0 or valuation(q, p) >= target:
            return x
        delta = -q / (2 * a[i] * x[i])
        vd = valuation(delta, p)
        # round delta to an integer multiple of p^vd, keeping enough digits
        unit = delta / Fraction(p) ** vd
        x[i] += Fraction(p) ** vd * _padic_int(unit, p, target + e + 4)
    raise AssertionError("Hensel refinement did not converge")


def padic_isotropic_vector(d: list[Fraction], p: int, precision: int = 24):
    """Rational vector x with v_p(Q(x)) >= precision and x primitive at p, or
    None if the diagonal form d is anisotropic over Q_p (decided by search)."""
    k = 5 if p == 2 else 3
    d = [as_fraction(x) for x in d]
    a = [_strip(x, p) for x in d]
    x = _search_mod(a, p, k)
    if x is None:
        return None
    x = _hensel(a, x, p, precision + 8)
    # undo the stripping: a_i = d_i / p^(2s_i)
    return [xi / Fraction(p) ** (valuation(di, p) // 2) for xi, di in zip(x, d)]


def witt_index_oracle(d: list, p: int) -> int:
    """Witt index of the diagonal form over Q_p by repeatedly splitting off a
    hyperbolic plane spanned by a near-isotropic vector x and y with b(x, y) = 1.

    The plane has Gram [[Q(x), 1], [1, Q(y)]]; it is hyperbolic over Q_p as
    soon as v_p(Q(x) Q(y)) >= 3, which the lift precision guarantees.
    """
    d = [as_fraction(x) for x in d if as_fraction(x) != 0]
    idx = 0
    while len(d) >= 2:
        x = padic_isotropic_vector(d, p)
        if x is None:
            break
        i = min((j for j in range(len(d)) if x[j]), key=lambda j: valuation(d[j] * x[j], p))
        y = [Fraction(0)] * len(d)
        y[i] = 1 / (d[i] * x[i])
        q = QuadraticForm.diagonal(d)
        qx, qy = q(x), q(y)
        assert q.bilinear(x, y) == 1
        assert qx == 0 or qy == 0 or valuation(qx, p) + valuation(qy, p) >= 3
        W = Subspace.span(len(d), [x, y])
        comp = orthogonal_complement(q, W)
        idx += 1
        if comp.dim == 0:
            break
        d = [c for c in diagonalize(restrict(q, comp)).diagonal if c != 0]
    return idx


def isotropic_oracle(d: list, p: int) -> bool:
    d = [as_fraction(x) for x in d]
    if len(d) < 2:
        return False
    return padic_isotropic_vector(d, p) is not None


def hilbert_oracle(a, b, p: int) -> int:
    """(a, b)_p by deciding isotropy of <1, -a, -b> (p = 0: the real place)."""
    a, b = as_fraction(a), as_fraction(b)
    if p == 0:
        return -1 if a < 0 and b < 0 else 1
    return 1 if isotropic_oracle([Fraction(1), -a, -b], p) else -1
