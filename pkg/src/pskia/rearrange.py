"""Optimal orderings of two vectors under a circulant symmetric-decreasing kernel.

The objective is the bilinear form

    d = sum_{i,j} x_i y_j c_{i-j}

over all orderings of the two value multisets.  The maximum is attained by
the closed-form center-out placement (largest value in the middle, then
alternating right/left), which ``theorem2_ordering`` constructs directly.
The module also provides the simultaneous pair-swap operation the optimality
argument is built on, an iterative improver driven by it, and an exhaustive
permutation-pair search that certifies the closed form at desk scale.

Index conventions
-----------------
With M values and n = (M-1)//2, the "window" of shifted positions is
-n..n for odd M and -n..n+1 for even M.  Arrays of length M are always in
slot order: array index k holds the value at shifted position k - n.  Since
the kernel entry depends only on index differences, the bilinear form is the
same in slot or shifted coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import backend
from .kernel import Kernel

#: exhaustive-search size limits
PAIR_ORACLE_LIMIT = 6
EQUAL_ORACLE_LIMIT = 8


def half_window(M: int) -> int:
    """n = (M-1)//2, the extent of the shifted position window."""
    if M < 1:
        raise ValueError("window size must be positive")
    return (M - 1) // 2


def center_out_positions(M: int) -> list[int]:
    """Shifted positions in placement order: 0, 1, -1, 2, -2, ... (, n+1)."""
    n = half_window(M)
    seq = [0]
    for i in range(1, n + 1):
        seq += [i, -i]
    if M % 2 == 0 and M > 1:
        seq.append(n + 1)
    return seq


def check_permutation(perm) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"not a permutation of 0..{len(perm) - 1}: {perm}")
    return perm


def _as_values(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("value vector must be 1-D and non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("value vector entries must be finite")
    if np.any(arr < 0.0):
        raise ValueError("value vector entries must be non-negative")
    return arr


@dataclass(frozen=True)
class Arrangement:
    """Values placed on the shifted window, stored in slot order.

    ``values[k]`` sits at shifted position k - n.
    """

    n: int
    values: tuple[float, ...]

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def parity(self) -> str:
        return "even" if self.size % 2 == 0 else "odd"

    def positions(self) -> range:
        return range(-self.n, len(self.values) - self.n)

    def at(self, position: int) -> float:
        return self.values[position + self.n]


def theorem2_ordering(v) -> Arrangement:
    """Maximizing placement: sorted descending, center-out.

    The largest value goes to position 0, then 1, -1, 2, -2, ..., n, -n,
    and for even sizes finally n+1.  Ties are placed in ascending original
    index order (stable sort), which fixes a canonical output.
    """
    arr = _as_values(v)
    M = arr.size
    n = half_window(M)
    order = np.argsort(-arr, kind="stable")
    placed = np.empty(M)
    for rank, pos in enumerate(center_out_positions(M)):
        placed[pos + n] = arr[order[rank]]
    return Arrangement(n, tuple(float(v) for v in placed))


def arrangement_to_permutation(a: Arrangement, v) -> tuple[int, ...]:
    """Permutation pi with v[pi[k]] equal to a.values[k] for every slot k.

    Among source indices holding equal values, slots are served in slot
    order by ascending original index.
    """
    arr = _as_values(v)
    if a.size != arr.size:
        raise ValueError("arrangement and vector sizes differ")
    pools: dict[float, list[int]] = {}
    for i in np.argsort(arr, kind="stable"):
        pools.setdefault(float(arr[i]), []).append(int(i))
    perm = []
    for val in a.values:
        pool = pools.get(float(val))
        if not pool:
            raise ValueError(
                f"arrangement value {val} is not available in the vector"
            )
        perm.append(pool.pop(0))
    return tuple(perm)


def bilinear_sum(x, y, k: Kernel) -> float:
    """sum_{i,j} x_i y_j c_{i-j} with x, y in slot order."""
    xa = _as_values(x)
    ya = _as_values(y)
    if xa.size != ya.size or xa.size != k.size:
        raise ValueError("x, y and kernel sizes must agree")
    return float(xa @ k.to_dense() @ ya)


def _pair_window(M: int, p: int, pairing: str):
    """Swap-candidate position pairs for the given center p.

    Each pair is ((near, far), want_desc): positions are in the shifted
    window, and want_desc is True when the first member must hold the
    larger value at a non-violating ordering.
    """
    n = half_window(M)
    lo, hi = -n, M - 1 - n
    pairs = []
    if pairing == "offset":
        i = 0
        while lo <= p - i and p + i + 1 <= hi:
            # p-i is the member nearer to 0 when p >= 0, farther when p < 0
            pairs.append(((p - i, p + i + 1), p >= 0))
            i += 1
    elif pairing == "centered":
        i = 1
        while lo <= p - i and p + i <= hi:
            if p == 0:
                # equal magnitudes: the positive position must dominate
                pairs.append(((i, -i), True))
            else:
                pairs.append(((p - i, p + i), p > 0))
            i += 1
    else:
        raise ValueError(f"unknown pairing {pairing!r}")
    return pairs


def omega_swap(x, y, p: int, pairing: str):
    """Simultaneously swap every order-violating pair centered at p.

    x and y are treated independently with the same pair structure; a pair
    is violating only if the dominant member is strictly smaller.  Pairs
    with a member outside the position window are never swapped.  Returns
    (x', y', swapped).
    """
    xa = _as_values(x).copy()
    ya = _as_values(y).copy()
    if xa.size != ya.size:
        raise ValueError("x and y sizes must agree")
    n = half_window(xa.size)
    pairs = _pair_window(xa.size, p, pairing)
    swapped = False
    for arr in (xa, ya):
        for (a, b), a_dominates in pairs:
            ia, ib = a + n, b + n
            hi_i, lo_i = (ia, ib) if a_dominates else (ib, ia)
            if arr[hi_i] < arr[lo_i]:
                arr[hi_i], arr[lo_i] = arr[lo_i], arr[hi_i]
                swapped = True
    return xa, ya, swapped


def satisfies_peak_condition(x) -> bool:
    """True iff x_r >= x_r' whenever |r'| > |r|, or r' = -r < 0."""
    xa = _as_values(x)
    n = half_window(xa.size)
    pos = range(-n, xa.size - n)
    for r in pos:
        for rp in pos:
            if abs(rp) > abs(r) or (rp == -r and rp < 0):
                if xa[r + n] < xa[rp + n]:
                    return False
    return True


def improve_until_fixed(x, y, k: Kernel):
    """Apply omega_swap over all centers and pairings until no pair moves.

    Returns (x', y', sweeps).  The fixed point satisfies the peak
    condition, so its objective equals the closed-form optimum.  A sweep
    cap turns any non-termination bug into a hard error rather than a hang.
    """
    xa = _as_values(x)
    ya = _as_values(y)
    if xa.size != ya.size or xa.size != k.size:
        raise ValueError("x, y and kernel sizes must agree")
    M = xa.size
    n = half_window(M)
    cap = max(4, M * M * (M // 2 + 1))
    for sweep in range(1, cap + 1):
        any_swap = False
        for pairing in ("offset", "centered"):
            for p in range(-(n + 1), n + 2):
                xa, ya, moved = omega_swap(xa, ya, p, pairing)
                any_swap = any_swap or moved
        if not any_swap:
            return xa, ya, sweep
    raise RuntimeError(
        f"pair-swap improvement did not settle within {cap} sweeps; "
        "this indicates a monotonicity-logic bug"
    )


def _perm_table(M: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(M))), dtype=np.intp)


def brute_force_max(
    r,
    s,
    k: Kernel,
    tie_policy: str = "all",
    equal_perms: bool = False,
    tie_tol: float = 1e-12,
    outer_range: tuple[int, int] | None = None,
):
    """Exhaustive search over permutation pairs for the bilinear maximum.

    Enumerates (pi_r, pi_s) in lexicographic order (pi_r alone when
    equal_perms is set) and returns (best_value, maximizers), where each
    maximizer is a (pi_r, pi_s) tuple pair.  tie_policy "all" collects
    every pair within tie_tol relative of the maximum; "first" keeps only
    the lexicographically smallest.  outer_range=(start, stop) restricts
    the outer permutation rank range so that disjoint ranges can be
    searched in parallel and merged with merge_max_results.
    """
    ra = _as_values(r)
    sa = _as_values(s)
    if ra.size != sa.size or ra.size != k.size:
        raise ValueError("r, s and kernel sizes must agree")
    if tie_policy not in ("all", "first"):
        raise ValueError(f"unknown tie_policy {tie_policy!r}")
    M = ra.size
    limit = EQUAL_ORACLE_LIMIT if equal_perms else PAIR_ORACLE_LIMIT
    if M > limit:
        raise ValueError(
            f"M={M} exceeds the exhaustive-search limit of {limit}"
        )
    perms = _perm_table(M)
    start, stop = outer_range if outer_range is not None else (0, len(perms))
    if not (0 <= start <= stop <= len(perms)):
        raise ValueError(f"invalid outer_range ({start}, {stop})")
    C = k.to_dense()
    if equal_perms:
        best, ranks = backend.equal_pair_search(ra, sa, C, perms, start, stop, tie_tol)
        maximizers = [(tuple(perms[a]), tuple(perms[a])) for a in ranks]
    else:
        best, ranks = backend.pair_search(ra, sa, C, perms, start, stop, tie_tol)
        maximizers = [(tuple(perms[a]), tuple(perms[b])) for a, b in ranks]
    if tie_policy == "first":
        maximizers = maximizers[:1]
    return best, maximizers


def merge_max_results(left, right, tie_tol: float = 1e-12):
    """Associative max-reduction of two brute_force_max partial results."""
    vl, ml = left
    vr, mr = right
    best = max(vl, vr)
    tol = tie_tol * abs(best)
    keep = []
    if vl >= best - tol:
        keep += ml
    if vr >= best - tol:
        keep += mr
    return best, sorted(keep)
