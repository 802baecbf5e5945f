import itertools
import os
import random
import subprocess
import sys
from math import gcd

import pytest

from quadpencil import _kernels_py as py
from quadpencil import kernels
from quadpencil.geometry import _kernel_field_args, upper_codes
from quadpencil.scalars import FiniteField
from quadpencil.verify import random_form_Fq

try:
    from quadpencil import _kernels as cy
except ImportError:
    cy = None

needs_cy = pytest.mark.skipif(cy is None, reason="compiled kernels not built")


def random_upper(rng, n, bound=3):
    c = [0] * (n * n)
    for i in range(n):
        for j in range(i, n):
            c[i * n + j] = rng.randint(-bound, bound)
    return c


def naive(n, cf, cg, H):
    def val(c, x):
        return sum(c[i * n + j] * x[i] * x[j] for i in range(n) for j in range(i, n))

    sols = set()
    for x in itertools.product(range(-H, H + 1), repeat=n):
        if not any(x):
            continue
        lead = next(v for v in x if v)
        if lead < 0 or gcd(*x) != 1:
            continue
        if val(cf, x) == 0 and val(cg, x) == 0:
            sols.add(x)
    return sols


def test_projective_point_count():
    assert sum(1 for _ in py.projective_points(3, 5)) == 31
    assert sum(1 for _ in py.projective_points(4, 3)) == 40


@pytest.mark.parametrize("seed", range(30))
def test_int_point_search_matches_brute_force(seed):
    rng = random.Random(seed)
    n, H = rng.choice([(3, 3), (4, 2)])
    cf, cg = random_upper(rng, n), random_upper(rng, n)
    sols = naive(n, cf, cg, H)
    got = kernels.int_point_search(n, cf, cg, H)
    if sols:
        assert got is not None and tuple(got) in sols
    else:
        assert got is None


def test_int_point_search_definite_pruning_exact():
    # x^2 + y^2 + z^2 - w^2 and x^2 - 2y^2: only (0,0,1,1) type points survive
    n = 4
    cf = [0] * 16
    cg = [0] * 16
    for i, a in enumerate((1, 1, 1, -1)):
        cf[i * 5] = a
    cg[0], cg[5] = 1, -2
    got = kernels.int_point_search(n, cf, cg, 3)
    assert got is not None and tuple(got) in naive(n, cf, cg, 3)


@needs_cy
@pytest.mark.parametrize("seed", range(20))
def test_compiled_zero_points_match(seed):
    rng = random.Random(seed)
    K = rng.choice([FiniteField(3), FiniteField(5), FiniteField(2, 2), FiniteField(3, 2)])
    n = rng.randint(2, 4)
    forms = [upper_codes(random_form_Fq(rng, K, n)) for _ in range(2)]
    args = _kernel_field_args(K)[:5]
    assert cy.zero_points(n, forms, *args) == py.zero_points(n, forms, *args)


@needs_cy
@pytest.mark.parametrize("seed", range(20))
def test_compiled_isotropic_subspace_match(seed):
    rng = random.Random(seed)
    K = rng.choice([FiniteField(3), FiniteField(5), FiniteField(2, 2)])
    n = rng.randint(2, 5)
    form = random_form_Fq(rng, K, n)
    gram = [c.code for row in form.gram for c in row] if hasattr(form, "gram") else None
    if gram is None:
        pytest.skip("form has no Gram matrix over this field")
    args = _kernel_field_args(K)
    for target in range(0, n // 2 + 1):
        a = cy.isotropic_subspace(n, gram, [], target, *args)
        b = py.isotropic_subspace(n, gram, [], target, *args)
        assert (a is None) == (b is None)
        if a is not None:
            assert a == b


@needs_cy
@pytest.mark.parametrize("seed", range(30))
def test_compiled_int_point_search_match(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(3, 5)
    cf, cg = random_upper(rng, n), random_upper(rng, n)
    H = 2
    assert cy.int_point_search(n, cf, cg, H) == py.int_point_search(n, cf, cg, H)


def test_pure_env_selects_fallback():
    env = dict(os.environ, QUADPENCIL_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from quadpencil import kernels; print(kernels.COMPILED, kernels.zero_points.__module__)"],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.split()
    assert out == ["False", "quadpencil._kernels_py"]


@needs_cy
@pytest.mark.skipif(bool(os.environ.get("QUADPENCIL_PURE")), reason="fallback forced")
def test_default_selects_compiled():
    assert kernels.COMPILED
