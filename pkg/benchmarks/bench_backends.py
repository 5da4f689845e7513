"""Timing comparison: compiled search extension vs numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_backends.py
"""

import itertools
import math
import time

import numpy as np

from pskia import _pure, awgn_transition
from pskia.cli import random_codebook
from pskia.kernel import Kernel

try:
    from pskia import _speedups
except ImportError:
    _speedups = None


def perm_table(M):
    return np.array(list(itertools.permutations(range(M))), dtype=np.intp)


def timeit(fn, *args, repeat=5):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    rows = []

    M = 6
    r, s = rng.random(M), rng.random(M)
    draws = np.sort(rng.random(M // 2 + 1))[::-1]
    C = Kernel(M, tuple(draws)).to_dense()
    perms = perm_table(M)
    n = len(perms)
    rows.append(
        (
            f"pair_search M={M} ({n}^2 pairs)",
            timeit(_pure.pair_search, r, s, C, perms, 0, n, 1e-12),
            None
            if _speedups is None
            else timeit(_speedups.pair_search, r, s, C, perms, 0, n, 1e-12),
        )
    )

    M = 8
    q = random_codebook(rng, M).as_array()
    P = awgn_transition(M, 10.0).matrix()
    perms = perm_table(M)
    n = len(perms)
    for mmse in (False, True):
        rows.append(
            (
                f"assignment_search M={M} {'mmse' if mmse else 'ml'} ({n} perms)",
                timeit(_pure.assignment_search, q, P, perms, mmse, 0, n, 1e-9),
                None
                if _speedups is None
                else timeit(
                    _speedups.assignment_search, q, P, perms, mmse, 0, n, 1e-9
                ),
            )
        )

    width = max(len(name) for name, *_ in rows)
    print(f"{'benchmark':<{width}}  {'pure':>10}  {'compiled':>10}  speedup")
    for name, pure_t, fast_t in rows:
        if fast_t is None:
            print(f"{name:<{width}}  {pure_t * 1e3:>8.2f}ms  {'n/a':>10}")
        else:
            print(
                f"{name:<{width}}  {pure_t * 1e3:>8.2f}ms  "
                f"{fast_t * 1e3:>8.2f}ms  {pure_t / fast_t:>6.2f}x"
            )


if __name__ == "__main__":
    main()
