"""Index assignment of quantizer levels to PSK symbols and its distortion.

An assignment is a permutation pi: constellation slot k carries level
q_{pi_k}.  Channel mean-squared distortion is computed under ML decoding
(the detected slot's own level is reconstructed) and under MMSE decoding
(the conditional mean given the detected slot).  Both closed-form
decompositions are evaluated alongside the direct double sums and must
agree, which guards the algebra end to end.

The zigzag ordering [0, 1, 3, 5, ..., 6, 4, 2] and the center-out optimal
ordering differ only by distortion-preserving rotations/reflections of the
slots, so they achieve the same distortion; the exhaustive search over all
M! assignments certifies this at desk scale.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .channel import ChannelModel
from .quantizer import Codebook
from .rearrange import check_permutation

#: exhaustive assignment-search size limit
ASSIGNMENT_ORACLE_LIMIT = 8
#: relative slack when collecting tied minimizers
TIE_TOL = 1e-9
#: relative agreement required between direct and decomposed distortion
CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class DistortionReport:
    """Channel MSD of one assignment under one decoder."""

    assignment: tuple[int, ...]
    decoder: str
    msd: float
    fixed_term: float
    reconstructions: tuple[float, ...] | None = None

    def to_json(self) -> str:
        obj = {"perm": list(self.assignment), "decoder": self.decoder, "msd": self.msd}
        if self.reconstructions is not None:
            obj["y"] = list(self.reconstructions)
        return json.dumps(obj)


def zigzag(M: int) -> tuple[int, ...]:
    """[0, 1, 3, 5, ..., M-1, ..., 6, 4, 2]: odds up, then evens down."""
    if M < 1:
        raise ValueError(f"M must be positive, got {M}")
    return tuple([0] + list(range(1, M, 2)) + list(range(2 * ((M - 1) // 2), 1, -2)))


def theorem3_assignment(M: int) -> tuple[int, ...]:
    """Center-out optimal assignment in its raw (unrotated) form."""
    if M < 1:
        raise ValueError(f"M must be positive, got {M}")
    if M % 2 == 1:
        return tuple(list(range(0, M, 2)) + list(range(M - 2, 0, -2)))
    return tuple(list(range(1, M, 2)) + list(range(M - 2, -1, -2)))


def rotate_transform(a) -> tuple[int, ...]:
    """Move the last slot's level to the front (distortion-preserving)."""
    p = check_permutation(a)
    return p[-1:] + p[:-1]


def reflect_transform(a) -> tuple[int, ...]:
    """Fix slot 0 and reverse the remaining slots (distortion-preserving)."""
    p = check_permutation(a)
    return p[:1] + p[:0:-1]


def canonicalize(a) -> tuple[int, ...]:
    """Lexicographically smallest member of the rotation/reflection orbit."""
    p = check_permutation(a)
    seen = {p}
    frontier = [p]
    while frontier:
        cur = frontier.pop()
        for nxt in (rotate_transform(cur), reflect_transform(cur)):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return min(seen)


def _check_sizes(cb: Codebook, a, ch: ChannelModel) -> tuple[int, ...]:
    perm = check_permutation(a)
    if not (cb.size == len(perm) == ch.size):
        raise ValueError(
            f"size mismatch: codebook {cb.size}, assignment {len(perm)}, "
            f"channel {ch.size}"
        )
    return perm


def _assert_consistent(direct: float, decomposed: float, scale: float, what: str):
    tol = CONSISTENCY_TOL * max(abs(direct), abs(decomposed), scale)
    if abs(direct - decomposed) > tol:
        raise ArithmeticError(
            f"{what}: direct value {direct} and decomposed value {decomposed} "
            f"disagree beyond tolerance {tol}"
        )


def msd_ml(cb: Codebook, a, ch: ChannelModel) -> DistortionReport:
    """Channel MSD under ML decoding.

    Evaluates both the direct double sum (1/M) sum_ij P_ij (q_pi_i - q_pi_j)^2
    and its decomposition into the fixed term (2/M) sum q^2 minus the
    bilinear term, and requires the two to agree.
    """
    perm = _check_sizes(cb, a, ch)
    q = cb.as_array()
    P = ch.matrix()
    M = ch.size
    qa = q[list(perm)]
    direct = math.fsum(
        (P[i, j] * (qa[i] - qa[j]) ** 2 for i in range(M) for j in range(M))
    ) / M
    fixed = 2.0 / M * math.fsum(v * v for v in q)
    bilinear = 2.0 / M * math.fsum(
        (qa[i] * qa[j] * P[i, j] for i in range(M) for j in range(M))
    )
    _assert_consistent(direct, fixed - bilinear, fixed, "ML distortion")
    return DistortionReport(perm, "ml", direct, fixed)


def mmse_reconstruction(cb: Codebook, a, ch: ChannelModel) -> np.ndarray:
    """Conditional-mean levels y_j = sum_k q_pi_k P_kj / sum_k P_kj."""
    perm = _check_sizes(cb, a, ch)
    q = cb.as_array()[list(perm)]
    P = ch.matrix()
    denom = P.sum(axis=0)
    if np.any(denom <= 0):
        raise ValueError("channel column sums must be positive")
    return (q @ P) / denom


def msd_mmse(cb: Codebook, a, ch: ChannelModel) -> DistortionReport:
    """Channel MSD under MMSE decoding, direct and closed forms compared."""
    perm = _check_sizes(cb, a, ch)
    q = cb.as_array()
    P = ch.matrix()
    M = ch.size
    qa = q[list(perm)]
    y = mmse_reconstruction(cb, perm, ch)
    direct = math.fsum(
        (P[i, j] * (qa[i] - y[j]) ** 2 for i in range(M) for j in range(M))
    ) / M
    fixed = math.fsum(v * v for v in q) / M
    denom = P.sum(axis=0)
    num = qa @ P
    closed = fixed - math.fsum(num[j] ** 2 / denom[j] for j in range(M)) / M
    _assert_consistent(direct, closed, fixed, "MMSE distortion")
    return DistortionReport(perm, "mmse", direct, fixed, tuple(y))


def channel_msd(cb: Codebook, a, ch: ChannelModel, decoder: str) -> DistortionReport:
    if decoder == "ml":
        return msd_ml(cb, a, ch)
    if decoder == "mmse":
        return msd_mmse(cb, a, ch)
    raise ValueError(f"unknown decoder {decoder!r}")


def brute_force_best(
    cb: Codebook,
    ch: ChannelModel,
    decoder: str,
    tie_tol: float = TIE_TOL,
    outer_range: tuple[int, int] | None = None,
):
    """Exact minimum channel MSD over all M! assignments.

    Returns (best_msd, minimizers) with minimizers collected within
    tie_tol of the minimum (relative to the fixed distortion scale) and
    listed in lexicographic order.  outer_range=(start, stop) restricts
    the enumeration to a contiguous rank range for partitioned search.
    """
    if decoder not in ("ml", "mmse"):
        raise ValueError(f"unknown decoder {decoder!r}")
    if cb.size != ch.size:
        raise ValueError(f"size mismatch: codebook {cb.size}, channel {ch.size}")
    M = ch.size
    if M > ASSIGNMENT_ORACLE_LIMIT:
        raise ValueError(
            f"M={M} exceeds the exhaustive-search limit of {ASSIGNMENT_ORACLE_LIMIT}"
        )
    perms = np.array(list(itertools.permutations(range(M))), dtype=np.intp)
    start, stop = outer_range if outer_range is not None else (0, len(perms))
    if not (0 <= start <= stop <= len(perms)):
        raise ValueError(f"invalid outer_range ({start}, {stop})")
    best, ranks = backend.assignment_search(
        cb.as_array(), ch.matrix(), perms, decoder == "mmse", start, stop, tie_tol
    )
    return best, [tuple(perms[k]) for k in ranks]


def merge_best_results(left, right, scale: float, tie_tol: float = TIE_TOL):
    """Associative min-reduction of two brute_force_best partial results."""
    vl, ml = left
    vr, mr = right
    best = min(vl, vr)
    tol = tie_tol * max(abs(best), scale)
    keep = []
    if vl <= best + tol:
        keep += ml
    if vr <= best + tol:
        keep += mr
    return best, sorted(keep)
