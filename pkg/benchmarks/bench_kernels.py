"""Compare the compiled and pure-Python elimination kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Times exact solves of
random rational systems and of grounded Laplacians of random graphs, with
each backend, and checks that both give identical answers.
"""
import argparse
import random
import statistics
import time
from fractions import Fraction

import metrized.linalg as linalg
from metrized import _bareiss_py
from metrized.harmonic import ResistanceKernel
from metrized.linalg import solve
from metrized.verify import GeneratorParams, random_graph

try:
    from metrized import _bareiss
except ImportError:
    _bareiss = None


def random_system(n, rng, den=12):
    A = [[Fraction(rng.randint(-20, 20), rng.randint(1, den)) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        A[i][i] += 50  # keep it comfortably nonsingular
    B = [[Fraction(rng.randint(-5, 5), rng.randint(1, den))] for _ in range(n)]
    return A, B


def timed(fn, repeat):
    runs = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        runs.append(time.perf_counter() - start)
    return statistics.median(runs), out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="10,20,40")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--graphs", type=int, default=30)
    args = parser.parse_args()
    if _bareiss is None:
        print("compiled kernel not built; only the pure-Python kernel is available")
        return
    rng = random.Random(0)
    print(f"{'case':<28}{'python (ms)':>14}{'compiled (ms)':>16}{'speed-up':>10}")
    for n in (int(s) for s in args.sizes.split(",")):
        A, B = random_system(n, rng)
        tp, xp = timed(lambda: solve(A, B, kernel=_bareiss_py), args.repeat)
        tc, xc = timed(lambda: solve(A, B, kernel=_bareiss), args.repeat)
        assert xp == xc
        print(f"{'dense n=' + str(n):<28}{tp * 1e3:>14.2f}{tc * 1e3:>16.2f}{tp / tc:>10.2f}")

    graphs = [random_graph(f"bench/{i}", GeneratorParams())[0] for i in range(args.graphs)]

    def kernels(backend):
        saved = linalg._kernel
        linalg._kernel = backend
        try:
            return [ResistanceKernel(g).R for g in graphs]
        finally:
            linalg._kernel = saved

    tp, rp = timed(lambda: kernels(_bareiss_py), args.repeat)
    tc, rc = timed(lambda: kernels(_bareiss), args.repeat)
    assert rp == rc
    print(f"{'resistance, ' + str(args.graphs) + ' graphs':<28}{tp * 1e3:>14.2f}{tc * 1e3:>16.2f}{tp / tc:>10.2f}")


if __name__ == "__main__":
    main()
