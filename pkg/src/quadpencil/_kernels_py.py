"""Pure-Python kernels; the reference behaviour for the compiled module.

Finite-field elements are integer codes.  With ``k == 1`` arithmetic is
plain modular arithmetic; otherwise it goes through flat q*q tables.
Quadratic forms are passed as upper-triangular coefficient lists
``c[(i, j)]`` in row-major order over i <= j, meaning sum c_ij x_i x_j.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt


def _ops(q, p, k, add, mul):
    if k == 1:
        return (lambda a, b: (a + b) % p), (lambda a, b: a * b % p)
    return (lambda a, b: add[a * q + b]), (lambda a, b: mul[a * q + b])


def _eval_upper(n, coeffs, x, fadd, fmul):
    acc = 0
    idx = 0
    for i in range(n):
        xi = x[i]
        for j in range(i, n):
            c = coeffs[idx]
            idx += 1
            if c and xi and x[j]:
                acc = fadd(acc, fmul(c, fmul(xi, x[j])))
    return acc


def projective_points(n, q):
    """Canonical representatives of P^{n-1}(F_q): first nonzero coordinate 1."""
    for lead in range(n):
        tail = n - lead - 1
        x = [0] * n
        x[lead] = 1
        count = q ** tail
        for m in range(count):
            v = m
            for j in range(n - 1, lead, -1):
                x[j] = v % q
                v //= q
            yield tuple(x)


def zero_points(n, forms, q, p, k, add=None, mul=None):
    """All canonical projective points where every form vanishes."""
    fadd, fmul = _ops(q, p, k, add, mul)
    out = []
    for x in projective_points(n, q):
        if all(_eval_upper(n, f, x, fadd, fmul) == 0 for f in forms):
            out.append(x)
    return out


def _bilinear(n, gram, x, y, fadd, fmul):
    acc = 0
    for i in range(n):
        if not x[i]:
            continue
        row = i * n
        for j in range(n):
            g = gram[row + j]
            if g and y[j]:
                acc = fadd(acc, fmul(x[i], fmul(g, y[j])))
    return acc


def _reduce(x, rows, fadd, fmul, neg):
    x = list(x)
    for piv, r in rows:
        f = x[piv]
        if f:
            nf = neg[f]
            for j in range(len(x)):
                if r[j]:
                    x[j] = fadd(x[j], fmul(nf, r[j]))
    return x


def _insert(x, rows, fmul, inv):
    piv = next(i for i, c in enumerate(x) if c)
    f = inv[x[piv]]
    rows.append((piv, [fmul(f, c) for c in x]))


def isotropic_subspace(n, gram, radical, target, q, p, k, add=None, mul=None, neg=None, inv=None):
    """Exhaustive search for a totally isotropic subspace of dimension ``target``
    meeting span(radical) only in 0.  Returns a list of basis vectors or None.
    """
    fadd, fmul = _ops(q, p, k, add, mul)
    if k == 1:
        neg = [(-a) % p for a in range(q)]
        inv = [0] + [pow(a, -1, p) for a in range(1, q)]
    base_rows = []
    for r in radical:
        rr = _reduce(r, base_rows, fadd, fmul, neg)
        if any(rr):
            _insert(rr, base_rows, fmul, inv)
    cands = []
    for x in projective_points(n, q):
        if _bilinear(n, gram, x, x, fadd, fmul) == 0 and any(_reduce(x, base_rows, fadd, fmul, neg)):
            cands.append(x)
    if target == 0:
        return []

    def dfs(chosen, rows, cand):
        if len(chosen) == target:
            return list(chosen)
        for idx, x in enumerate(cand):
            red = _reduce(x, rows, fadd, fmul, neg)
            if not any(red):
                continue
            new_rows = list(rows)
            _insert(red, new_rows, fmul, inv)
            nxt = [y for y in cand[idx + 1:] if _bilinear(n, gram, x, y, fadd, fmul) == 0]
            if len(nxt) < target - len(chosen) - 1:
                continue
            found = dfs(chosen + [x], new_rows, nxt)
            if found is not None:
                return found
        return None

    return dfs([], base_rows, cands)


def _definite_inverse(S):
    """(sign, S^{-1}) if S is definite, else (0, None).  Exact Gauss-Jordan."""
    m = len(S)
    A = [list(r) + [Fraction(int(i == j)) for j in range(m)] for i, r in enumerate(S)]
    pivots = []
    for k in range(m):
        piv = A[k][k]
        if piv == 0:
            return 0, None
        pivots.append(piv)
        for i in range(m):
            if i != k and A[i][k]:
                f = A[i][k] / piv
                A[i] = [a - f * b for a, b in zip(A[i], A[k])]
    # Jacobi: signs of the pivots of the unpivoted elimination give the inertia
    if all(pv > 0 for pv in pivots):
        sign = 1
    elif all((pv < 0) for pv in pivots):
        sign = -1
    else:
        return 0, None
    return sign, [[A[i][m + j] / A[i][i] for j in range(m)] for i in range(m)]


def tail_prune_data(n, cf, cg):
    """Per depth d and form: definiteness sign of the form in x_d..x_{n-1}
    and S^{-1}/4 on that block (flattened with global indices)."""
    out = []
    for c in (cf, cg):
        signs = [0] * n
        inv = [Fraction(0)] * (n * n * n)
        for d in range(n - 1):
            m = n - d
            S = [[Fraction(0)] * m for _ in range(m)]
            for i in range(m):
                for j in range(i, m):
                    v = c[(d + i) * n + d + j]
                    if i == j:
                        S[i][i] = Fraction(v)
                    else:
                        S[i][j] = S[j][i] = Fraction(v, 2)
            sign, Sinv = _definite_inverse(S)
            if sign == 0 and m == 1:
                continue
            signs[d] = sign
            if sign:
                for i in range(m):
                    for j in range(m):
                        inv[d * n * n + (d + i) * n + d + j] = Sinv[i][j] / 4
        out.extend([signs, inv])
    return tuple(out)


def _definite_miss(n, d, sign, inv, L, c):
    if not sign:
        return False
    base = d * n * n
    acc = Fraction(0)
    for i in range(d, n):
        if L[i]:
            acc += L[i] * sum(inv[base + i * n + j] * L[j] for j in range(d, n) if L[j])
    return sign * (c - acc) > 0


def int_point_search(n, cf, cg, H):
    """First primitive integer vector, |x_i| <= H, first nonzero entry positive,
    with F(x) = G(x) = 0.  cf, cg are n*n row-major upper-triangular integer
    coefficient matrices.  Enumeration: x_0..x_{n-2} lexicographic (x_0 from 0,
    the rest from -H), last coordinate solved from the quadratics.  Subtrees
    where a definite tail form cannot reach zero are skipped.
    """
    if n == 1:
        return None
    last = n - 1
    x = [0] * n
    sf, tf, sg, tg = tail_prune_data(n, cf, cg)

    def solve_last(a, b, c):
        # integer roots y of a y^2 + b y + c = 0 with |y| <= H; None = every y
        if a:
            disc = b * b - 4 * a * c
            if disc < 0:
                return []
            s = isqrt(disc)
            if s * s != disc:
                return []
            ys = set()
            for num in (-b - s, -b + s):
                if num % (2 * a) == 0:
                    ys.add(num // (2 * a))
            return sorted(y for y in ys if -H <= y <= H)
        if b:
            if c % b == 0 and -H <= -c // b <= H:
                return [-c // b]
            return []
        if c:
            return []
        return None

    def rec(depth, fc, gc, lf, lg, nz):
        if depth == last:
            yf = solve_last(cf[last * n + last], lf[last], fc)
            if yf == []:
                return None
            yg = solve_last(cg[last * n + last], lg[last], gc)
            if yf is None and yg is None:
                ys = list(range(-H, H + 1))
            elif yf is None:
                ys = yg
            elif yg is None:
                ys = yf
            else:
                ys = sorted(set(yf) & set(yg))
            for y in ys:
                if not nz and y <= 0:
                    continue
                g = y
                for v in x[:last]:
                    g = gcd(g, v)
                if g != 1:
                    continue
                x[last] = y
                return tuple(x)
            return None
        if _definite_miss(n, depth, sf[depth], tf, lf, fc) or _definite_miss(n, depth, sg[depth], tg, lg, gc):
            return None
        for v in range(-H if nz else 0, H + 1):
            x[depth] = v
            nfc = fc + (cf[depth * n + depth] * v + lf[depth]) * v
            ngc = gc + (cg[depth * n + depth] * v + lg[depth]) * v
            nlf = list(lf)
            nlg = list(lg)
            for j in range(depth + 1, n):
                nlf[j] += cf[depth * n + j] * v
                nlg[j] += cg[depth * n + j] * v
            found = rec(depth + 1, nfc, ngc, nlf, nlg, nz or v != 0)
            if found is not None:
                return found
        x[depth] = 0
        return None

    return rec(0, 0, 0, [0] * n, [0] * n, False)
