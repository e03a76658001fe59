"""Compare the compiled and pure-Python integer kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload is run through both ``vucert._ckernels`` and
``vucert._pykernels``; the table reports the best time per call and the
speedup.  The outputs of the two backends are compared before timing.
"""

import argparse
import importlib
import random
import timeit

from vucert import _pykernels
from vucert.arith import cyclo_field
from vucert.manifolds import GluingMatrix
from vucert.proof_engine import BlockPattern, build_system


def _edge_systems():
    b = GluingMatrix(2, 1, 1, 1, "edge")
    pats = ["1,2;0,3", "1,1,1;1,1,1;1,1,1", "3,0,1;2,2,0;0,1,3"]
    return [(list(s.matrix.entries), s.matrix.cols)
            for s in (build_system(b, BlockPattern.parse(p, "edge")) for p in pats)]


def workloads(rng):
    table = cyclo_field(12)._table
    vecs = [[rng.randint(-50, 50) for _ in range(4)] for _ in range(2)]
    dense = [[rng.randint(-9, 9) for _ in range(10)] for _ in range(8)]
    big = [[rng.randint(-(2**40), 2**40) for _ in range(6)] for _ in range(6)]
    p1 = [rng.randint(-9, 9) for _ in range(12)]
    p2 = [rng.randint(-9, 9) for _ in range(8)] + [1]
    return [
        ("rref edge systems", "rref_int", _edge_systems()),
        ("rref dense 8x10", "rref_int", [(dense, 10)]),
        ("rref 6x6, 2^40 entries (overflow path)", "rref_int", [(big, 6)]),
        ("poly_mul deg 11 x deg 8", "poly_mul", [(p1, p2)]),
        ("poly_divmod_monic", "poly_divmod_monic", [(p1, p2)]),
        ("cyclo_mulmod Q(zeta_12)", "cyclo_mulmod", [(vecs[0], vecs[1], table)]),
    ]


def best_time(fn, cases, repeat, number):
    def run():
        for args in cases:
            fn(*args)
    return min(timeit.repeat(run, repeat=repeat, number=number)) / (number * len(cases))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    try:
        ck = importlib.import_module("vucert._ckernels")
    except ImportError:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
        return 1
    rng = random.Random(args.seed)
    print(f"{'workload':42s} {'python us':>11s} {'cython us':>11s} {'speedup':>8s}")
    for label, name, cases in workloads(rng):
        py_fn, c_fn = getattr(_pykernels, name), getattr(ck, name)
        for case in cases:
            if py_fn(*case) != c_fn(*case):
                raise SystemExit(f"backends disagree on {label}")
        t_py = best_time(py_fn, cases, args.repeat, args.number)
        t_c = best_time(c_fn, cases, args.repeat, args.number)
        print(f"{label:42s} {t_py * 1e6:11.2f} {t_c * 1e6:11.2f} {t_py / t_c:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
