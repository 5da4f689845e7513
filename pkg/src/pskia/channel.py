"""M-PSK over AWGN: sector-detection transition matrices as kernels.

The received-phase density for a unit-energy PSK symbol in complex AWGN
with symbol SNR gamma = Es/N0 has the closed polar form

    p(theta) = exp(-gamma)/(2 pi)
             + cos(theta) sqrt(gamma/pi) exp(-gamma sin^2 theta)
               Phi(sqrt(2 gamma) cos(theta)),

obtained by integrating out the radial coordinate analytically.  Each
transition probability is the integral of this density over an angular ML
decision sector of width 2 pi / M; circular symmetry makes the resulting
matrix a circulant symmetric-decreasing kernel, which is validated rather
than assumed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .kernel import Kernel, validate_kernel

#: largest acceptable row-sum residual before renormalization
ROW_SUM_TOL = 1e-9
#: per-entry quadrature tolerance
SECTOR_TOL = 1e-12


@dataclass(frozen=True)
class ChannelModel:
    """Symbol transition structure of a symmetric memoryless channel."""

    size: int
    snr: float | None
    transition: Kernel

    def __post_init__(self):
        if self.transition.size != self.size:
            raise ValueError("transition kernel size mismatch")
        if abs(self.transition.row_sum() - 1.0) > ROW_SUM_TOL:
            raise ValueError(
                f"transition rows must sum to 1, got {self.transition.row_sum()}"
            )

    def matrix(self) -> np.ndarray:
        return self.transition.to_dense()

    def to_json(self) -> str:
        snr_db = None if self.snr is None else 10.0 * math.log10(self.snr)
        return json.dumps(
            {
                "M": self.size,
                "snr_db": snr_db,
                "half_seq": list(self.transition.half_seq),
            }
        )


def mpsk_phases(M: int) -> np.ndarray:
    """Constellation phases 2 pi k / M, k = 0..M-1, in [0, 2 pi)."""
    if M < 2:
        raise ValueError(f"PSK constellation needs M >= 2, got {M}")
    return 2.0 * np.pi * np.arange(M) / M


def phase_density(theta, gamma: float):
    """PDF of the received phase when phase 0 is transmitted at SNR gamma."""
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta)
    return np.exp(-gamma) / (2.0 * np.pi) + c * np.sqrt(gamma / np.pi) * np.exp(
        -gamma * (1.0 - c * c)
    ) * special.ndtr(c * np.sqrt(2.0 * gamma))


def _sector_probability(t: int, M: int, gamma: float) -> float:
    """Probability that the received phase lands in decision sector t."""
    center = 2.0 * np.pi * t / M
    half = np.pi / M
    f = lambda th: phase_density(th, gamma)
    # the t = 0 sector straddles the density peak; flagging it as a
    # breakpoint keeps adaptive quadrature from missing the spike
    breakpoints = [center] if t == 0 else None
    val, err = integrate.quad(
        f,
        center - half,
        center + half,
        points=breakpoints,
        epsabs=SECTOR_TOL,
        epsrel=1e-11,
        limit=400,
    )
    if err > 1e-8:
        raise RuntimeError(
            f"sector quadrature failed to converge (t={t}, gamma={gamma}): "
            f"error estimate {err}"
        )
    return val


def awgn_transition(M: int, snr: float) -> ChannelModel:
    """Transition kernel of M-PSK sector detection over AWGN at linear SNR."""
    if M < 2:
        raise ValueError(f"PSK constellation needs M >= 2, got {M}")
    if not (snr >= 0.0 and np.isfinite(snr)):
        raise ValueError(f"snr must be finite and non-negative, got {snr}")
    half = np.array([_sector_probability(t, M, snr) for t in range(M // 2 + 1)])
    total = half[0] + 2.0 * half[1:].sum()
    if M % 2 == 0:
        total -= half[M // 2]  # the antipodal sector is counted once
    if abs(total - 1.0) > ROW_SUM_TOL:
        raise RuntimeError(
            f"sector probabilities sum to {total}, outside tolerance; "
            "quadrature is suspect"
        )
    kern = Kernel(M, tuple(half / total))
    return ChannelModel(M, float(snr), kern)


def load_symmetric_channel(matrix) -> ChannelModel:
    """Wrap a dense doubly stochastic circulant symmetric-decreasing matrix."""
    p = np.asarray(matrix, dtype=float)
    kern = validate_kernel(p)
    rows = p.sum(axis=1)
    cols = p.sum(axis=0)
    bad_row = np.argmax(np.abs(rows - 1.0))
    if abs(rows[bad_row] - 1.0) > ROW_SUM_TOL:
        raise ValueError(
            f"row {bad_row} sums to {rows[bad_row]}, not 1 (stochasticity)"
        )
    bad_col = np.argmax(np.abs(cols - 1.0))
    if abs(cols[bad_col] - 1.0) > ROW_SUM_TOL:
        raise ValueError(
            f"column {bad_col} sums to {cols[bad_col]}, not 1 (stochasticity)"
        )
    return ChannelModel(kern.size, None, kern)


def channel_from_json(text: str) -> ChannelModel:
    obj = json.loads(text)
    kern = Kernel(int(obj["M"]), tuple(float(c) for c in obj["half_seq"]))
    snr_db = obj.get("snr_db")
    snr = None if snr_db is None else 10.0 ** (snr_db / 10.0)
    return ChannelModel(kern.size, snr, kern)
