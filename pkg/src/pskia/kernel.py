"""Circulant symmetric-decreasing kernels.

A kernel is an M x M non-negative matrix whose entry depends only on the
circular distance between its row and column index, and is non-increasing
in that distance.  Such matrices are closed under the product Q @ R.T,
which is what makes them useful for both ML and MMSE distortion analysis.

Only the half-sequence c_0, ..., c_{M//2} is stored; the dense matrix is
redundant and is reconstructed on demand for validation and testing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

#: absolute tolerance for "equal entries at equal circular distance" and for
#: the monotonicity check on externally supplied matrices
EQUAL_TOL = 1e-9


class KernelValidationError(ValueError):
    """A candidate matrix violates one of the kernel conditions."""


def circular_distance(i: int, j: int, M: int) -> int:
    """Distance between indices i and j on a ring of M points."""
    if M < 1:
        raise ValueError(f"ring size must be positive, got {M}")
    if not (0 <= i < M and 0 <= j < M):
        raise ValueError(f"indices ({i}, {j}) out of range for M={M}")
    a = abs(i - j)
    return min(a, M - a)


@dataclass(frozen=True)
class Kernel:
    """Circulant symmetric-decreasing matrix stored as its half-sequence.

    ``half_seq[t]`` is the matrix entry at circular distance t, for
    t = 0, ..., M//2.  Entries must be non-negative and non-increasing
    (within EQUAL_TOL, to admit quadrature-produced matrices).
    """

    size: int
    half_seq: tuple[float, ...]

    def __post_init__(self):
        M = self.size
        if M < 1:
            raise ValueError(f"kernel size must be positive, got {M}")
        hs = tuple(float(c) for c in self.half_seq)
        if len(hs) != M // 2 + 1:
            raise ValueError(
                f"half_seq must have length {M // 2 + 1} for size {M}, "
                f"got {len(hs)}"
            )
        if not all(np.isfinite(hs)):
            raise ValueError("kernel entries must be finite")
        for t, c in enumerate(hs):
            if c < 0.0:
                raise KernelValidationError(
                    f"negative kernel entry c_{t} = {c}"
                )
        for t in range(len(hs) - 1):
            if hs[t + 1] > hs[t] + EQUAL_TOL:
                raise KernelValidationError(
                    f"kernel not non-increasing: c_{t} = {hs[t]} < "
                    f"c_{t + 1} = {hs[t + 1]}"
                )
        object.__setattr__(self, "half_seq", hs)

    def entry(self, t: int) -> float:
        """Even, M-periodic extension: entry at signed circular offset t."""
        return self.half_seq[circular_distance(t % self.size, 0, self.size)]

    def to_dense(self) -> np.ndarray:
        """Reconstruct the full M x M matrix p[i, j] = c_{d(i, j)}."""
        M = self.size
        idx = np.arange(M)
        d = np.abs(idx[:, None] - idx[None, :])
        d = np.minimum(d, M - d)
        return np.asarray(self.half_seq)[d]

    def row_sum(self) -> float:
        """Common value of every row (and column) sum."""
        return float(self.to_dense()[0].sum())


def kernel_entry(k: Kernel, t: int) -> float:
    """Entry of k at signed offset t (even and M-periodic in t)."""
    return k.entry(t)


def identity_kernel(M: int) -> Kernel:
    return Kernel(M, (1.0,) + (0.0,) * (M // 2))


def uniform_kernel(M: int) -> Kernel:
    return Kernel(M, (1.0 / M,) * (M // 2 + 1))


def validate_kernel(matrix) -> Kernel:
    """Check the three kernel conditions on a dense matrix.

    Returns the Kernel extracted from row 0 on success; raises
    KernelValidationError naming the first violated condition and a
    witnessing index pair otherwise.
    """
    p = np.asarray(matrix, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise KernelValidationError(f"matrix must be square, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise KernelValidationError("matrix entries must be finite")
    M = p.shape[0]

    neg = np.argwhere(p < 0.0)
    if len(neg):
        i, j = neg[0]
        raise KernelValidationError(
            f"negative entry p[{i},{j}] = {p[i, j]}"
        )

    half = p[0, : M // 2 + 1]
    idx = np.arange(M)
    d = np.abs(idx[:, None] - idx[None, :])
    d = np.minimum(d, M - d)
    bad = np.argwhere(np.abs(p - half[d]) > EQUAL_TOL)
    if len(bad):
        i, j = bad[0]
        raise KernelValidationError(
            f"entries unequal at equal circular distance: p[{i},{j}] = "
            f"{p[i, j]} but p[0,{d[i, j]}] = {half[d[i, j]]}"
        )

    for t in range(M // 2):
        if half[t + 1] > half[t] + EQUAL_TOL:
            raise KernelValidationError(
                f"monotonicity violated: p[0,{t}] = {half[t]} < "
                f"p[0,{t + 1}] = {half[t + 1]}"
            )
    return Kernel(M, tuple(half))


def kernel_product(q: Kernel, r: Kernel) -> Kernel:
    """Kernel of the matrix product Q @ R.T (circular cross-correlation).

    h_t = sum_k q_k r_{(k+t) mod M}; the class is closed under this
    product, so the result is validated and returned as a Kernel.
    """
    if q.size != r.size:
        raise ValueError(f"size mismatch: {q.size} != {r.size}")
    M = q.size
    qrow = np.array([q.entry(t) for t in range(M)])
    rrow = np.array([r.entry(t) for t in range(M)])
    half = tuple(
        float(np.dot(qrow, np.roll(rrow, -t))) for t in range(M // 2 + 1)
    )
    return Kernel(M, half)


def kernel_to_json(k: Kernel) -> str:
    return json.dumps({"size": k.size, "half_seq": list(k.half_seq)})


def kernel_from_json(text: str) -> Kernel:
    obj = json.loads(text)
    return Kernel(int(obj["size"]), tuple(float(c) for c in obj["half_seq"]))


def load_dense_csv(path) -> np.ndarray:
    """Row-major CSV, M lines of M comma-separated reals."""
    return np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=float))
