# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts and enumeration order as _kernels_py."""
from libc.stdlib cimport malloc, free
from libc.math cimport sqrtl

from quadpencil._kernels_py import tail_prune_data

ctypedef long long i64


cdef struct Field:
    int q
    int p
    int k
    int *add
    int *mul
    int *neg
    int *inv


cdef inline int fadd(Field *F, int a, int b) nogil:
    if F.k == 1:
        return (a + b) % F.p
    return F.add[a * F.q + b]


cdef inline int fmul(Field *F, int a, int b) nogil:
    if F.k == 1:
        return <int>((<i64>a * b) % F.p)
    return F.mul[a * F.q + b]


cdef int *_int_array(object xs) except NULL:
    cdef Py_ssize_t m = len(xs)
    cdef int *out = <int *>malloc((m if m > 0 else 1) * sizeof(int))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(m):
        out[i] = xs[i]
    return out


cdef int _setup_field(Field *F, int q, int p, int k, object add, object mul, object neg, object inv) except -1:
    cdef int a
    F.q = q
    F.p = p
    F.k = k
    F.add = NULL
    F.mul = NULL
    F.neg = NULL
    F.inv = NULL
    if k != 1:
        F.add = _int_array(add)
        F.mul = _int_array(mul)
        if neg is not None:
            F.neg = _int_array(neg)
            F.inv = _int_array(inv)
    else:
        F.neg = <int *>malloc(q * sizeof(int))
        F.inv = <int *>malloc(q * sizeof(int))
        for a in range(q):
            F.neg[a] = (p - a) % p
            F.inv[a] = 0 if a == 0 else pow(a, p - 2, p)
    return 0


cdef void _free_field(Field *F):
    if F.add != NULL:
        free(F.add)
    if F.mul != NULL:
        free(F.mul)
    if F.neg != NULL:
        free(F.neg)
    if F.inv != NULL:
        free(F.inv)


cdef inline int _eval_upper(Field *F, int n, int *c, int *x) nogil:
    cdef int acc = 0
    cdef int i, j, idx = 0
    for i in range(n):
        if x[i] == 0:
            idx += n - i
            continue
        for j in range(i, n):
            if c[idx] != 0 and x[j] != 0:
                acc = fadd(F, acc, fmul(F, c[idx], fmul(F, x[i], x[j])))
            idx += 1
    return acc


cdef inline void _next_point(int *x, int n, int lead, int q) nogil:
    # odometer on coordinates lead+1..n-1, last coordinate fastest
    cdef int j = n - 1
    while j > lead:
        x[j] += 1
        if x[j] < q:
            return
        x[j] = 0
        j -= 1


def zero_points(int n, list forms, int q, int p, int k, add=None, mul=None):
    cdef Field F
    _setup_field(&F, q, p, k, add, mul, None, None)
    cdef int nf = len(forms)
    cdef int m = n * (n + 1) // 2
    cdef int *coeffs = <int *>malloc((nf * m + 1) * sizeof(int))
    cdef int *x = <int *>malloc(n * sizeof(int))
    cdef int f, i, lead
    cdef i64 count, t
    cdef bint ok
    out = []
    try:
        for f in range(nf):
            for i in range(m):
                coeffs[f * m + i] = forms[f][i]
        for lead in range(n):
            for i in range(n):
                x[i] = 0
            x[lead] = 1
            count = 1
            for i in range(n - lead - 1):
                count *= q
            t = 0
            while t < count:
                ok = True
                for f in range(nf):
                    if _eval_upper(&F, n, coeffs + f * m, x) != 0:
                        ok = False
                        break
                if ok:
                    out.append(tuple([x[i] for i in range(n)]))
                _next_point(x, n, lead, q)
                t += 1
    finally:
        free(coeffs)
        free(x)
        _free_field(&F)
    return out


cdef inline int _bilinear(Field *F, int n, int *g, int *x, int *y) nogil:
    cdef int acc = 0
    cdef int i, j
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if g[i * n + j] != 0 and y[j] != 0:
                acc = fadd(F, acc, fmul(F, x[i], fmul(F, g[i * n + j], y[j])))
    return acc


cdef inline bint _reduce(Field *F, int n, int *x, int *out, int *rows, int *pivs, int nrows) nogil:
    # out = x reduced by the echelon rows; returns True if nonzero
    cdef int r, j, f, nf
    for j in range(n):
        out[j] = x[j]
    for r in range(nrows):
        f = out[pivs[r]]
        if f != 0:
            nf = F.neg[f]
            for j in range(n):
                if rows[r * n + j] != 0:
                    out[j] = fadd(F, out[j], fmul(F, nf, rows[r * n + j]))
    for j in range(n):
        if out[j] != 0:
            return True
    return False


cdef inline void _insert(Field *F, int n, int *red, int *rows, int *pivs, int nrows) nogil:
    cdef int j, piv = 0, f
    while red[piv] == 0:
        piv += 1
    f = F.inv[red[piv]]
    for j in range(n):
        rows[nrows * n + j] = fmul(F, f, red[j])
    pivs[nrows] = piv


cdef struct Search:
    int n
    int target
    int *gram
    int *pts       # candidate points, n ints each
    int *lists     # per-depth candidate index lists, each of capacity ncand
    int *lens
    int ncand
    int *rows
    int *pivs
    int *chosen
    int *red


cdef bint _dfs(Field *F, Search *S, int depth, int nrows) nogil:
    cdef int n = S.n
    cdef int *cand = S.lists + depth * S.ncand
    cdef int clen = S.lens[depth]
    cdef int *nxt
    cdef int a, b, xi, yi, nl
    if depth == S.target:
        return True
    nxt = S.lists + (depth + 1) * S.ncand
    for a in range(clen):
        xi = cand[a]
        if not _reduce(F, n, S.pts + xi * n, S.red, S.rows, S.pivs, nrows):
            continue
        nl = 0
        for b in range(a + 1, clen):
            yi = cand[b]
            if _bilinear(F, n, S.gram, S.pts + xi * n, S.pts + yi * n) == 0:
                nxt[nl] = yi
                nl += 1
        if nl < S.target - depth - 1:
            continue
        _insert(F, n, S.red, S.rows, S.pivs, nrows)
        S.lens[depth + 1] = nl
        S.chosen[depth] = xi
        if _dfs(F, S, depth + 1, nrows + 1):
            return True
    return False


def isotropic_subspace(int n, list gram, list radical, int target, int q, int p, int k,
                       add=None, mul=None, neg=None, inv=None):
    cdef Field F
    _setup_field(&F, q, p, k, add, mul, neg, inv)
    cdef Search S
    cdef int i, j, lead, nrows = 0, ncand = 0, cap = 1024
    cdef i64 count, t
    cdef int *x = <int *>malloc(n * sizeof(int))
    cdef int *newpts
    cdef int *pts = <int *>malloc(cap * n * sizeof(int))
    S.gram = _int_array(gram)
    S.rows = <int *>malloc((n + 1) * n * sizeof(int))
    S.pivs = <int *>malloc((n + 1) * sizeof(int))
    S.red = <int *>malloc(n * sizeof(int))
    S.chosen = <int *>malloc((target + 1) * sizeof(int))
    S.lists = NULL
    S.lens = NULL
    try:
        for r in radical:
            for j in range(n):
                x[j] = r[j]
            if _reduce(&F, n, x, S.red, S.rows, S.pivs, nrows):
                _insert(&F, n, S.red, S.rows, S.pivs, nrows)
                nrows += 1
        for lead in range(n):
            for i in range(n):
                x[i] = 0
            x[lead] = 1
            count = 1
            for i in range(n - lead - 1):
                count *= q
            t = 0
            while t < count:
                if _bilinear(&F, n, S.gram, x, x) == 0 and _reduce(&F, n, x, S.red, S.rows, S.pivs, nrows):
                    if ncand == cap:
                        cap *= 2
                        newpts = <int *>malloc(cap * n * sizeof(int))
                        for i in range(ncand * n):
                            newpts[i] = pts[i]
                        free(pts)
                        pts = newpts
                    for i in range(n):
                        pts[ncand * n + i] = x[i]
                    ncand += 1
                _next_point(x, n, lead, q)
                t += 1
        if target == 0:
            return []
        S.n = n
        S.target = target
        S.pts = pts
        S.ncand = ncand if ncand > 0 else 1
        S.lists = <int *>malloc((target + 1) * S.ncand * sizeof(int))
        S.lens = <int *>malloc((target + 1) * sizeof(int))
        for i in range(ncand):
            S.lists[i] = i
        S.lens[0] = ncand
        if _dfs(&F, &S, 0, nrows):
            return [tuple([pts[S.chosen[d] * n + i] for i in range(n)]) for d in range(target)]
        return None
    finally:
        free(x)
        free(pts)
        free(S.gram)
        free(S.rows)
        free(S.pivs)
        free(S.red)
        free(S.chosen)
        if S.lists != NULL:
            free(S.lists)
        if S.lens != NULL:
            free(S.lens)
        _free_field(&F)


cdef inline i64 _isqrt(i64 v) nogil:
    cdef i64 s = <i64>sqrtl(<long double>v)
    while s * s > v:
        s -= 1
    while (s + 1) * (s + 1) <= v:
        s += 1
    return s


cdef int _solve_last(i64 a, i64 b, i64 c, i64 H, i64 *ys) nogil:
    # returns number of roots written to ys (sorted), or -1 for "every y"
    cdef i64 disc, s, num, y0, y1
    cdef int m = 0
    if a != 0:
        disc = b * b - 4 * a * c
        if disc < 0:
            return 0
        s = _isqrt(disc)
        if s * s != disc:
            return 0
        num = -b - s
        if num % (2 * a) == 0:
            y0 = num / (2 * a)
            if -H <= y0 <= H:
                ys[m] = y0
                m += 1
        num = -b + s
        if s != 0 and num % (2 * a) == 0:
            y1 = num / (2 * a)
            if -H <= y1 <= H:
                ys[m] = y1
                m += 1
        if m == 2 and ys[0] > ys[1]:
            y0 = ys[0]
            ys[0] = ys[1]
            ys[1] = y0
        return m
    if b != 0:
        if c % b == 0 and -H <= -c / b <= H:
            ys[0] = -c / b
            return 1
        return 0
    if c != 0:
        return 0
    return -1


cdef i64 _gcd(i64 a, i64 b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef struct IntSearch:
    int n
    i64 H
    i64 *cf
    i64 *cg
    i64 *x
    i64 *lf        # lf[d*n + j]: coefficient of x_j from x_0..x_{d-1} in F
    i64 *lg
    int *sf        # sign of definiteness of the F tail at each depth, 0 if indefinite
    int *sg
    long double *tf   # S_tail^{-1}/4 for each depth, as an n*n block
    long double *tg


cdef bint _leaf(IntSearch *S, i64 fc, i64 gc, bint nz) nogil:
    cdef int n = S.n, last = n - 1, mf, mg, i, j
    cdef i64 yf[2]
    cdef i64 yg[2]
    cdef i64 y
    mf = _solve_last(S.cf[last * n + last], S.lf[last * n + last], fc, S.H, yf)
    if mf == 0:
        return False
    mg = _solve_last(S.cg[last * n + last], S.lg[last * n + last], gc, S.H, yg)
    if mg == 0:
        return False
    if mf == -1 and mg == -1:
        for y in range(-S.H, S.H + 1):
            if _accept(S, y, nz):
                return True
        return False
    if mf == -1:
        for i in range(mg):
            if _accept(S, yg[i], nz):
                return True
        return False
    if mg == -1:
        for i in range(mf):
            if _accept(S, yf[i], nz):
                return True
        return False
    for i in range(mf):
        for j in range(mg):
            if yf[i] == yg[j]:
                if _accept(S, yf[i], nz):
                    return True
    return False


cdef bint _accept(IntSearch *S, i64 y, bint nz) nogil:
    cdef int i
    cdef i64 g = 0
    if not nz and y <= 0:
        return False
    for i in range(S.n - 1):
        g = _gcd(g, S.x[i])
    g = _gcd(g, y)
    if g != 1:
        return False
    S.x[S.n - 1] = y
    return True


cdef bint _definite_miss(int n, int depth, int sign, long double *T, i64 *L, i64 c) nogil:
    # True if c + L.x + x^T S x (S definite on the tail) cannot vanish for real x
    cdef long double acc = 0, row
    cdef int i, j
    if sign == 0:
        return False
    for i in range(depth, n):
        if L[i] == 0:
            continue
        row = 0
        for j in range(depth, n):
            row += T[i * n + j] * L[j]
        acc += row * L[i]
    # extremum of the quadratic is c - L^T (S^{-1}/4) L
    return sign * (<long double>c - acc) > 1e-3


cdef bint _rec(IntSearch *S, int depth, i64 fc, i64 gc, bint nz) nogil:
    # nz: some earlier coordinate is nonzero (then this one may be negative)
    cdef int n = S.n, last = n - 1, j
    cdef i64 v, nfc, ngc
    cdef i64 *lf = S.lf + depth * n
    cdef i64 *lg = S.lg + depth * n
    if depth == last:
        return _leaf(S, fc, gc, nz)
    if _definite_miss(n, depth, S.sf[depth], S.tf + depth * n * n, lf, fc):
        return False
    if _definite_miss(n, depth, S.sg[depth], S.tg + depth * n * n, lg, gc):
        return False
    v = -S.H if nz else 0
    while v <= S.H:
        S.x[depth] = v
        nfc = fc + (S.cf[depth * n + depth] * v + lf[depth]) * v
        ngc = gc + (S.cg[depth * n + depth] * v + lg[depth]) * v
        for j in range(depth + 1, n):
            lf[n + j] = lf[j] + S.cf[depth * n + j] * v
            lg[n + j] = lg[j] + S.cg[depth * n + j] * v
        if _rec(S, depth + 1, nfc, ngc, nz or v != 0):
            return True
        v += 1
    S.x[depth] = 0
    return False


def int_point_search(int n, list cf, list cg, long long H):
    if n == 1:
        return None
    cdef IntSearch S
    cdef int i, d
    cdef bint found
    signs_f, inv_f, signs_g, inv_g = tail_prune_data(n, cf, cg)
    S.n = n
    S.H = H
    S.cf = <i64 *>malloc(n * n * sizeof(i64))
    S.cg = <i64 *>malloc(n * n * sizeof(i64))
    S.x = <i64 *>malloc(n * sizeof(i64))
    S.lf = <i64 *>malloc((n + 1) * n * sizeof(i64))
    S.lg = <i64 *>malloc((n + 1) * n * sizeof(i64))
    S.sf = <int *>malloc(n * sizeof(int))
    S.sg = <int *>malloc(n * sizeof(int))
    S.tf = <long double *>malloc(n * n * n * sizeof(long double))
    S.tg = <long double *>malloc(n * n * n * sizeof(long double))
    try:
        for i in range(n * n):
            S.cf[i] = cf[i]
            S.cg[i] = cg[i]
        for i in range((n + 1) * n):
            S.lf[i] = 0
            S.lg[i] = 0
        for i in range(n):
            S.x[i] = 0
        for d in range(n):
            S.sf[d] = signs_f[d]
            S.sg[d] = signs_g[d]
        for i in range(n * n * n):
            S.tf[i] = float(inv_f[i])
            S.tg[i] = float(inv_g[i])
        with nogil:
            found = _rec(&S, 0, 0, 0, False)
        if found:
            return tuple([S.x[i] for i in range(n)])
        return None
    finally:
        free(S.cf)
        free(S.cg)
        free(S.x)
        free(S.lf)
        free(S.lg)
        free(S.sf)
        free(S.sg)
        free(S.tf)
        free(S.tg)
