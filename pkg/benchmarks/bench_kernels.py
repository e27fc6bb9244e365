"""Time the compiled and pure-numpy kernels on the same inputs.

    python benchmarks/bench_kernels.py [--n 40] [--graphs 30] [--repeat 3]

Both back ends are imported in one process: the numpy functions are always
available, and the compiled ones are used when numba is importable.
Results are checked for agreement before any timing is reported.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from girthwright import _kernels
from girthwright.generator import random_planar_graph
from girthwright.oracle import sample_local_girth_lists


def _masks(lists):
    palette = sorted(set().union(*lists))
    code = {c: i for i, c in enumerate(palette)}
    return np.array([sum(1 << code[c] for c in l) for l in lists], dtype=np.int64)


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--graphs", type=int, default=30)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args()

    rng = random.Random(args.seed)
    cases = []
    for _ in range(args.graphs):
        g = random_planar_graph(args.n, rng, density=0.3)
        indptr, indices = g.csr
        lists = sample_local_girth_lists(g, 6, rng)
        cases.append((indptr, indices, _masks(lists), np.full(g.n, -1, dtype=np.int64)))

    def girths_np():
        return [_kernels.girths_numpy(a, b) for a, b, _, _ in cases]

    def search_np():
        return [_kernels.search_numpy(a, b, m, f.copy(), 0)[0] for a, b, m, f in cases]

    rows = [("girths", "numpy", best_of(girths_np, args.repeat))]
    rows.append(("search", "numpy", best_of(search_np, args.repeat)))

    if _kernels.HAVE_NUMBA:
        def girths_jit():
            return [_kernels._girths_jit(a, b) for a, b, _, _ in cases]

        def search_jit():
            return [int(_kernels._search_jit(a, b, m, f.copy(), np.int64(0))[0]) for a, b, m, f in cases]

        for x, y in zip(girths_np(), girths_jit()):
            assert np.array_equal(x, y), "girth kernels disagree"
        assert search_np() == search_jit(), "search kernels disagree on feasibility"
        girths_jit()  # compile outside the timed region
        search_jit()
        rows.append(("girths", "numba", best_of(girths_jit, args.repeat)))
        rows.append(("search", "numba", best_of(search_jit, args.repeat)))
    else:
        print("numba unavailable; timing the numpy path only")

    print(f"{args.graphs} graphs, n={args.n}, best of {args.repeat}")
    print(f"{'kernel':<8} {'backend':<8} {'seconds':>10}")
    for kernel, backend, secs in rows:
        print(f"{kernel:<8} {backend:<8} {secs:>10.4f}")


if __name__ == "__main__":
    main()
