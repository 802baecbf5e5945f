"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

from quadpencil import _kernels_py as py
from quadpencil import fixtures, kernels
from quadpencil.geometry import _kernel_field_args, upper_codes
from quadpencil.scalars import FiniteField
from quadpencil.verify import random_form_Fq

try:
    from quadpencil import _kernels as cy
except ImportError:
    cy = None


def workloads():
    P = fixtures.regular()
    F5 = FiniteField(5)
    pencil5 = [upper_codes(P.F.reduce_mod(F5)), upper_codes(P.G.reduce_mod(F5))]
    K = FiniteField(3, 3)
    rng = random.Random(1)
    pencil27 = [upper_codes(random_form_Fq(rng, K, 4)) for _ in range(2)]
    args27 = _kernel_field_args(K)
    gram6 = [0] * 36
    for i, j in ((0, 1), (2, 3), (4, 5)):
        gram6[i * 6 + j] = gram6[j * 6 + i] = 1
    # indefinite diagonal pencil; first point sits deep in the search order
    cf = [0] * 36
    cg = [0] * 36
    for i, (a, b) in enumerate(zip((1, 1, -3, 2, -5, 7), (1, -1, 2, 3, -1, -11))):
        cf[i * 7], cg[i * 7] = a, b
    yield "zero_points P^7(F_5)", lambda m: m.zero_points(8, pencil5, 5, 5, 1)
    yield "zero_points P^3(F_27)", lambda m: m.zero_points(4, pencil27, *args27[:5])
    yield "isotropic_subspace F_3, dim 3 in 6 vars", lambda m: m.isotropic_subspace(6, gram6, [], 3, 3, 3, 1)
    yield "int_point_search diagonal 6 vars, H=5", lambda m: m.int_point_search(6, cf, cg, 5)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"compiled kernels available: {cy is not None} (in use: {kernels.COMPILED})")
    print(f"{'workload':45s} {'python (s)':>11s} {'compiled (s)':>13s} {'speedup':>8s}")
    for name, fn in workloads():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        if cy is None:
            print(f"{name:45s} {tp:11.4f} {'-':>13s} {'-':>8s}")
            continue
        assert fn(py) == fn(cy), name
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat))
        print(f"{name:45s} {tp:11.4f} {tc:13.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
