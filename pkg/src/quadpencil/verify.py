"""Seeded verification suites pitting the exact decision procedures against
brute force.

Every suite draws its randomness from ``substream(seed, name)`` so suites
are reproducible one at a time, and output contains no timings.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from quadpencil import fixtures, kernels
from quadpencil import _kernels_py as pykernels
from quadpencil.forms import QuadraticForm, Subspace, rank, restrict, signature
from quadpencil.geometry import (
    dual_quadric,
    enumerate_points_Fq,
    isotropic_subspace_Fq,
    witt_index_fq,
)
from quadpencil.local import (
    REAL,
    LocalPlace,
    hilbert_symbol,
    witt_data_diagonal,
)
from quadpencil.oracles import hilbert_oracle, witt_index_oracle
from quadpencil.pencil import (
    Pencil,
    PencilError,
    char_poly,
    classify,
    four_rank6_decompose,
    check_decomposition,
    has_member_of_rank_at_most,
    mordell_sweep,
    singular_members,
)
from quadpencil.residues import ResidueContext, plane_criterion
from quadpencil.scalars import FiniteField, Poly, factor_integer, factor_over_Q


@dataclass(frozen=True)
class SuiteConfig:
    seed: int
    suite: str
    size: int = 1


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: list  # replayable counterexamples (JSON-ready dicts)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {"cases": self.cases, "failures": len(self.failures), "passed": self.passed}


def substream(seed: int, name: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


# --------------------------------------------------------------------------
# random inputs shared with the test-suite

def random_symmetric(rng: random.Random, n: int, bound: int) -> list[list[int]]:
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = rng.randint(-bound, bound)
    return M


def random_pencil(rng: random.Random, n: int, bound: int = 10) -> Pencil:
    while True:
        try:
            return Pencil(QuadraticForm(random_symmetric(rng, n, bound)), QuadraticForm(random_symmetric(rng, n, bound)))
        except PencilError:
            continue


def structured_pencil(rng: random.Random, n: int, bound: int = 3) -> Pencil:
    """M^T D M, M^T E M with repeated ratios d_i/e_i, so members of high corank occur."""
    while True:
        M = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        ratios = [rng.randint(-2, 2) for _ in range(n)]
        e = [rng.choice([-2, -1, 1, 2]) for _ in range(n)]
        d = [r * x for r, x in zip(ratios, e)]
        D = QuadraticForm.diagonal(d)
        E = QuadraticForm.diagonal(e)
        try:
            P = Pencil(D.change_basis(M), E.change_basis(M))
        except PencilError:
            continue
        if rank(P.G) == n:
            return P


def _nonzero(rng, bound):
    while True:
        a = rng.randint(-bound, bound)
        if a:
            return a


def _support(*xs) -> list[LocalPlace]:
    primes = {2}
    for x in xs:
        primes |= set(factor_integer(abs(x)))
    return [REAL] + [LocalPlace(p) for p in sorted(primes)]


# --------------------------------------------------------------------------
# suites; each takes (rng, size) and returns (cases, failures)

def suite_hilbert_reciprocity(rng, size):
    fails, cases = [], 0
    for _ in range(500 * size):
        a, b = _nonzero(rng, 10 ** 4), _nonzero(rng, 10 ** 4)
        cases += 1
        prod = 1
        for v in _support(a, b):
            prod *= hilbert_symbol(a, b, v)
        if prod != 1:
            fails.append({"a": a, "b": b, "product": prod})
    return cases, fails


def suite_hilbert_oracle(rng, size):
    fails, cases = [], 0
    for _ in range(60 * size):
        a, b = _nonzero(rng, 60), _nonzero(rng, 60)
        for p in (0, 2, 3, 5, 7):
            cases += 1
            v = REAL if p == 0 else LocalPlace(p)
            got, want = hilbert_symbol(a, b, v), hilbert_oracle(a, b, p)
            if got != want:
                fails.append({"a": a, "b": b, "place": str(v), "formula": got, "oracle": want})
    return cases, fails


WITT_ENTRIES = (1, -1, 2, -2, 3, -3, 5, -5)


def witt_cases(dims=range(1, 6)):
    """All multisets of entries (the index is permutation invariant)."""
    for n in dims:
        yield from itertools.combinations_with_replacement(WITT_ENTRIES, n)


def witt_mismatch(d, p):
    got = witt_data_diagonal(list(d), LocalPlace(p)).witt_index
    want = witt_index_oracle(list(d), p)
    if got != want:
        return {"diagonal": list(d), "p": p, "formula": got, "oracle": want}
    return None


def suite_witt_oracle(rng, size):
    pool = list(witt_cases())
    fails, cases = [], 0
    for _ in range(60 * size):
        d = rng.choice(pool)
        p = rng.choice((2, 3, 5, 7))
        cases += 1
        bad = witt_mismatch(d, p)
        if bad:
            fails.append(bad)
    return cases, fails


def rank_multiplicity_violations(P: Pencil) -> list:
    n = P.dim
    return [
        {"pencil": P.to_json(), "member": m.to_json()}
        for m in singular_members(P)
        if m.multiplicity < n - m.rank
    ]


def suite_rank_multiplicity(rng, size):
    fails, cases = [], 0
    for i in range(16 * size):
        n = rng.randint(4, 8)
        P = structured_pencil(rng, n) if i % 2 else random_pencil(rng, n)
        cases += 1
        fails += rank_multiplicity_violations(P)
    return cases, fails


def random_form_Fq(rng, K: FiniteField, n: int) -> QuadraticForm:
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = rng.randrange(K.q)
    return QuadraticForm([[K.elem(c) for c in r] for r in M], K)


def tangency_mismatches(A: QuadraticForm, B: QuadraticForm) -> list:
    """Points of Q_A (smooth) where 'tangent hyperplane is tangent to Q_B',
    decided by restricting B to the hyperplane, versus membership in Q_{AB^-1A}."""
    K = A.field
    n = A.dim
    D = dual_quadric(A, B)
    out = []
    for P in enumerate_points_Fq(A):
        h = [sum((A.gram[i][j] * P.coords[j] for j in range(n)), K.zero()) for i in range(n)]
        if all(c == K.zero() for c in h):
            continue
        H = Subspace(n, _hyperplane_basis(h, K), K)
        tangent = rank(restrict(B, H)) < n - 1
        on_dual = D(list(P.coords)) == K.zero()
        if tangent != on_dual:
            out.append([c.code for c in P.coords])
    return out


def _hyperplane_basis(h, K):
    n = len(h)
    k = next(i for i, c in enumerate(h) if c != K.zero())
    basis = []
    for j in range(n):
        if j == k:
            continue
        v = [K.zero()] * n
        v[j] = K.one()
        v[k] = -h[j] / h[k]
        basis.append(v)
    return basis


def random_smooth_pair(rng, K, n):
    while True:
        A, B = random_form_Fq(rng, K, n), random_form_Fq(rng, K, n)
        if A != B and rank(A) == n and rank(B) == n:
            return A, B


def suite_dual_quadric(rng, size):
    fails, cases = [], 0
    for p in (3, 5):
        K = FiniteField(p)
        for n in (3, 4):
            for _ in range(3 * size):
                A, B = random_smooth_pair(rng, K, n)
                cases += 1
                bad = tangency_mismatches(A, B)
                if bad:
                    fails.append({"p": p, "A": A.to_json(), "B": B.to_json(), "points": bad})
    return cases, fails


def splitting_mismatch(diag, m, K):
    q = QuadraticForm.diagonal([K.elem(c) for c in diag], K)
    found = isotropic_subspace_Fq(q, m) is not None
    predicted = witt_index_fq(q) >= m + 1
    if found != predicted:
        return {"diagonal": list(diag), "m": m, "search": found, "witt": predicted}
    return None


def suite_hyperbolic_splitting(rng, size):
    K = FiniteField(3)
    pool = [d for n in range(1, 9) for d in itertools.combinations_with_replacement((0, 1, 2), n)]
    fails, cases = [], 0
    for _ in range(25 * size):
        d = rng.choice(pool)
        m = rng.randint(0, 2)
        cases += 1
        bad = splitting_mismatch(d, m, K)
        if bad:
            fails.append(bad)
    return cases, fails


def taxonomy_failures() -> list:
    fails = []
    for tag, make in fixtures.TAXONOMY.items():
        got = classify(make()).tag
        if got != tag:
            fails.append({"fixture": tag, "got": got})
    P = fixtures.four_rank6()
    dec = four_rank6_decompose(P)
    ok, why = check_decomposition(P, dec)
    if not ok:
        fails.append({"fixture": "FourRank6", "decomposition": why})
    return fails


def suite_taxonomy(rng, size):
    return len(fixtures.TAXONOMY) + 1, taxonomy_failures()


def obstruction_example_failures() -> list:
    fails = []
    P = fixtures.obstruction_example()
    chi, _ = char_poly(P)
    t = Poly.x()
    mult = dict((q, e) for q, e in factor_over_Q(chi)).get(t, 0)
    if mult != 2:
        fails.append({"check": "multiplicity of t in chi", "got": mult})
    v = plane_criterion(ResidueContext(P)).to_json()
    if (v["tag"], v["point"], v["residue"]) != ("ObstructionAt", "t=0", "-1"):
        fails.append({"check": "verdict", "got": v})
    for R in fixtures.regular_fixtures():
        got = plane_criterion(ResidueContext(R)).tag
        if got != "ResiduesAllTrivial":
            fails.append({"check": "regular fixture", "pencil": R.to_json(), "got": got})
    return fails


def suite_obstruction_example(rng, size):
    return 2 + len(fixtures.regular_fixtures()), obstruction_example_failures()


def sweep_failure(P: Pencil):
    res = mordell_sweep(P)
    pos, neg = res.signature
    if abs(pos - neg) > 2:
        return {"pencil": P.to_json(), "result": res.to_json()}
    return None


def suite_mordell_sweep(rng, size):
    fails, cases = [], 0
    while cases < 5 * size:
        P = random_pencil(rng, 8)
        if has_member_of_rank_at_most(P, 5):
            continue
        cases += 1
        bad = sweep_failure(P)
        if bad:
            fails.append(bad)
    return cases, fails


def det_vanishes_identically(F: QuadraticForm, G: QuadraticForm, K: FiniteField) -> bool:
    """det(lam F + mu G) == 0 on all of P^1(K); with |K| > n this means identically."""
    for lam, mu in [(K.one(), K.elem(c)) for c in range(K.q)] + [(K.zero(), K.one())]:
        if rank(F.scale(lam) + G.scale(mu)) == F.dim:
            return False
    return True


def amer_brumer_case(rng, K3: FiniteField, K27: FiniteField):
    """Random nondegenerate pencil in P^3 over F_3; returns (has F_27 point, has F_3 point)."""
    while True:
        F, G = random_form_Fq(rng, K3, 4), random_form_Fq(rng, K3, 4)
        if F == G or F.is_zero() or G.is_zero():
            continue
        F27 = QuadraticForm([[K27.elem(c.code) for c in r] for r in F.gram], K27)
        G27 = QuadraticForm([[K27.elem(c.code) for c in r] for r in G.gram], K27)
        if det_vanishes_identically(F27, G27, K27):
            continue
        odd = bool(enumerate_points_Fq([F27, G27]))
        rational = bool(enumerate_points_Fq([F, G]))
        return F, G, odd, rational


def suite_amer_brumer(rng, size):
    K3, K27 = FiniteField(3), FiniteField(3, 3)
    fails, cases = [], 0
    for _ in range(10 * size):
        F, G, odd, rational = amer_brumer_case(rng, K3, K27)
        cases += 1
        if odd and not rational:
            fails.append({"F": F.to_json(), "G": G.to_json()})
    return cases, fails


def suite_factorization(rng, size):
    fails, cases = [], 0
    for _ in range(20 * size):
        parts = [Poly.from_ints([rng.randint(-5, 5) for _ in range(rng.randint(2, 4))]) for _ in range(rng.randint(1, 3))]
        parts = [q for q in parts if q.degree >= 1]
        if not parts:
            continue
        f = Poly.from_ints([rng.randint(1, 9)])
        for q in parts:
            f = f * q ** rng.randint(1, 2)
        cases += 1
        fac = factor_over_Q(f)
        prod = Poly.from_ints([f.lead])
        for q, e in fac:
            prod = prod * q ** e
        # each factor must be monic and the factors pairwise distinct
        ok = prod == f and all(q.lead == 1 for q, _ in fac) and len({tuple(q.coeffs) for q, _ in fac}) == len(fac)
        if not ok:
            fails.append({"poly": f.to_json(), "factors": [[q.to_json(), e] for q, e in fac]})
    return cases, fails


def naive_int_point(n, cf, cg, H):
    """Existence of a nonzero x with |x_i| <= H and F(x) = G(x) = 0."""
    def ev(c, x):
        return sum(c[i * n + j] * x[i] * x[j] for i in range(n) for j in range(i, n))
    for x in itertools.product(range(-H, H + 1), repeat=n):
        if any(x) and ev(cf, x) == 0 and ev(cg, x) == 0:
            return True
    return False


def _upper_ints(rng, n, bound):
    c = [0] * (n * n)
    for i in range(n):
        for j in range(i, n):
            c[i * n + j] = rng.randint(-bound, bound)
    return c


def suite_kernels(rng, size):
    fails, cases = [], 0
    for _ in range(30 * size):
        n = rng.randint(2, 4)
        H = rng.randint(1, 3)
        cf, cg = _upper_ints(rng, n, 3), _upper_ints(rng, n, 3)
        cases += 1
        got = kernels.int_point_search(n, cf, cg, H)
        ref = pykernels.int_point_search(n, cf, cg, H)
        exists = naive_int_point(n, cf, cg, H)
        if got != ref or (got is not None) != exists:
            fails.append({"n": n, "H": H, "cf": cf, "cg": cg, "kernel": got, "fallback": ref, "exists": exists})
    for _ in range(10 * size):
        p = rng.choice((3, 5, 7))
        n = rng.randint(2, 4)
        forms = [_upper_ints(rng, n, p - 1) for _ in range(2)]
        forms = [[c % p for c in f] for f in forms]
        forms = [[f[i * n + j] for i in range(n) for j in range(i, n)] for f in forms]
        cases += 1
        got = kernels.zero_points(n, forms, p, p, 1)
        ref = pykernels.zero_points(n, forms, p, p, 1)
        if list(map(tuple, got)) != list(map(tuple, ref)):
            fails.append({"p": p, "n": n, "forms": forms})
    return cases, fails


SUITES = {
    "hilbert-reciprocity": suite_hilbert_reciprocity,
    "hilbert-oracle": suite_hilbert_oracle,
    "witt-oracle": suite_witt_oracle,
    "rank-multiplicity": suite_rank_multiplicity,
    "dual-quadric": suite_dual_quadric,
    "hyperbolic-splitting": suite_hyperbolic_splitting,
    "taxonomy": suite_taxonomy,
    "obstruction-example": suite_obstruction_example,
    "mordell-sweep": suite_mordell_sweep,
    "amer-brumer": suite_amer_brumer,
    "factorization": suite_factorization,
    "kernels": suite_kernels,
}


def run_suite(cfg: SuiteConfig) -> SuiteResult:
    if cfg.suite not in SUITES:
        raise KeyError(cfg.suite)
    cases, fails = SUITES[cfg.suite](substream(cfg.seed, cfg.suite), cfg.size)
    return SuiteResult(cfg.suite, cases, fails)


def run_suites(names, seed: int, size: int = 1, jobs: int = 1) -> list[SuiteResult]:
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise KeyError(unknown[0])
    cfgs = [SuiteConfig(seed, s, size) for s in names]
    if jobs > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_suite, cfgs))
    return [run_suite(c) for c in cfgs]


def summary_json(results: list[SuiteResult], seed: int, size: int) -> dict:
    return {
        "schema": 1,
        "seed": seed,
        "size": size,
        "passed": all(r.passed for r in results),
        "suites": {r.name: r.summary() for r in results},
    }


def dump_counterexamples(results: list[SuiteResult], directory: str) -> list[str]:
    """One JSON file per failing case; the file replays as fixture input."""
    written = []
    for r in results:
        for i, case in enumerate(r.failures):
            os.makedirs(directory, exist_ok=True)
            path = os.path.join(directory, f"{r.name}-{i:03d}.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump({"schema": 1, "suite": r.name, "case": case}, fh, indent=2, sort_keys=True, default=str)
                fh.write("\n")
            written.append(path)
    return written
