"""Vectorized numpy implementations of the exhaustive-search kernels.

Same contracts as the compiled module `_speedups`; used as the fallback
when the extension is unavailable (or when PSKIA_PURE is set) and as the
reference the compiled backend is tested against.
"""

from __future__ import annotations

import numpy as np


def pair_search(r, s, C, perms, start, stop, tie_tol):
    """Maximize sum_ij r[pr(i)] s[ps(j)] C[i, j] over permutation pairs.

    The outer permutation rank runs over [start, stop); the inner rank over
    the full table.  Returns (best, [(outer_rank, inner_rank), ...]) with
    ties within tie_tol relative of the maximum, in lexicographic order.
    """
    A = np.asarray(r)[perms[start:stop]]
    B = np.asarray(s)[perms]
    scores = (A @ C) @ B.T
    best = float(scores.max())
    tol = tie_tol * abs(best)
    ties = np.argwhere(scores >= best - tol)
    return best, [(int(a) + start, int(b)) for a, b in ties]


def equal_pair_search(r, s, C, perms, start, stop, tie_tol):
    """pair_search restricted to equal outer and inner permutations."""
    A = np.asarray(r)[perms[start:stop]]
    B = np.asarray(s)[perms[start:stop]]
    scores = np.einsum("ki,ij,kj->k", A, C, B)
    best = float(scores.max())
    tol = tie_tol * abs(best)
    return best, [int(k) + start for k in np.flatnonzero(scores >= best - tol)]


def assignment_search(q, P, perms, mmse, start, stop, tie_tol):
    """Minimize channel MSD over assignments with ranks in [start, stop).

    Returns (best, ranks) with ties collected within tie_tol relative to
    the fixed distortion scale (so exact-zero minima still report all
    their minimizers).
    """
    q = np.asarray(q)
    P = np.asarray(P)
    M = P.shape[0]
    Q = q[perms[start:stop]]
    row_sums = P.sum(axis=1)
    col_sums = P.sum(axis=0)
    if mmse:
        Y = (Q @ P) / col_sums
        msd = (
            Q * Q @ row_sums + Y * Y @ col_sums - 2.0 * np.einsum("ki,ij,kj->k", Q, P, Y)
        ) / M
    else:
        msd = (
            Q * Q @ row_sums + Q * Q @ col_sums - 2.0 * np.einsum("ki,ij,kj->k", Q, P, Q)
        ) / M
    best = float(msd.min())
    scale = float(q @ q) / M
    tol = tie_tol * max(abs(best), scale)
    return best, [int(k) + start for k in np.flatnonzero(msd <= best + tol)]
