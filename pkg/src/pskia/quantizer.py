"""Maximum-entropy scalar quantizer codebooks.

Cells are carved out of the source distribution with equal probability 1/M
via the quantile function; the representative level of each cell is either
its conditional mean (centroid) or the median of the cell.  Codebooks are
normalized to be non-negative, recording the applied shift; both distortion
objectives are shift-invariant, but the bilinear-form machinery needs
non-negative values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

#: per-cell absolute quadrature tolerance for centroid placement
CENTROID_TOL = 1e-10


@dataclass(frozen=True)
class SourceSpec:
    """Source distribution given through its quantile function."""

    kind: str
    params: tuple[float, ...]

    @staticmethod
    def uniform(a: float, b: float) -> "SourceSpec":
        if not b > a:
            raise ValueError(f"uniform source needs b > a, got ({a}, {b})")
        return SourceSpec("uniform", (float(a), float(b)))

    @staticmethod
    def gaussian(mean: float, std: float) -> "SourceSpec":
        if not std > 0:
            raise ValueError(f"gaussian source needs std > 0, got {std}")
        return SourceSpec("gaussian", (float(mean), float(std)))

    @staticmethod
    def table(samples) -> "SourceSpec":
        """Quantile samples at evenly spaced probabilities 0, ..., 1."""
        vals = tuple(float(v) for v in samples)
        if len(vals) < 2:
            raise ValueError("quantile table needs at least 2 samples")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("quantile table must be strictly increasing")
        return SourceSpec("table", vals)

    def ppf(self, u):
        """Quantile function, vectorized over u in (0, 1)."""
        u = np.asarray(u, dtype=float)
        if self.kind == "uniform":
            a, b = self.params
            return a + (b - a) * u
        if self.kind == "gaussian":
            mean, std = self.params
            return mean + std * special.ndtri(u)
        grid = np.linspace(0.0, 1.0, len(self.params))
        return np.interp(u, grid, self.params)

    @staticmethod
    def parse(text: str) -> "SourceSpec":
        """CLI form: uniform:a,b | gaussian:mean,std | table:<path>."""
        kind, _, rest = text.partition(":")
        if kind == "uniform":
            a, b = (float(v) for v in rest.split(","))
            return SourceSpec.uniform(a, b)
        if kind == "gaussian":
            mean, std = (float(v) for v in rest.split(","))
            return SourceSpec.gaussian(mean, std)
        if kind == "table":
            return SourceSpec.table(np.loadtxt(rest, dtype=float).ravel())
        raise ValueError(f"unknown source kind {kind!r}")


@dataclass(frozen=True)
class Codebook:
    """Strictly increasing non-negative levels plus the normalization shift."""

    levels: tuple[float, ...]
    shift_applied: float = 0.0

    def __post_init__(self):
        lv = tuple(float(q) for q in self.levels)
        if len(lv) < 1:
            raise ValueError("codebook must contain at least one level")
        if not all(np.isfinite(lv)):
            raise ValueError("codebook levels must be finite")
        if any(b <= a for a, b in zip(lv, lv[1:])):
            raise ValueError(f"codebook levels must be strictly increasing: {lv}")
        if lv[0] < 0:
            raise ValueError("codebook levels must be non-negative after shifting")
        object.__setattr__(self, "levels", lv)

    @property
    def size(self) -> int:
        return len(self.levels)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.levels)

    def to_json(self) -> str:
        return json.dumps(
            {"levels": list(self.levels), "shift_applied": self.shift_applied}
        )


def validate_codebook(levels) -> Codebook:
    """Wrap raw levels, auto-shifting negative codebooks to start at 0."""
    lv = np.asarray(levels, dtype=float)
    if lv.ndim != 1 or lv.size < 1:
        raise ValueError("levels must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(lv)):
        raise ValueError("codebook levels must be finite")
    if np.any(np.diff(lv) <= 0):
        raise ValueError(f"codebook levels must be strictly increasing: {lv.tolist()}")
    shift = -float(lv[0]) if lv[0] < 0 else 0.0
    return Codebook(tuple(lv + shift), shift)


def max_entropy_codebook(
    src: SourceSpec, M: int, level_rule: str = "centroid"
) -> Codebook:
    """Equal-probability codebook with M levels.

    centroid: q_i = M * integral of ppf(u) over u in (i/M, (i+1)/M), the
    conditional mean of cell i.  cell_midpoint: q_i = ppf((i + 1/2)/M),
    the cell median.  Both coincide for uniform sources.
    """
    if M < 1:
        raise ValueError(f"M must be positive, got {M}")
    if level_rule not in ("centroid", "cell_midpoint"):
        raise ValueError(f"unknown level_rule {level_rule!r}")
    if level_rule == "cell_midpoint":
        levels = src.ppf((np.arange(M) + 0.5) / M)
    else:
        levels = np.empty(M)
        for i in range(M):
            val, _ = integrate.quad(
                src.ppf, i / M, (i + 1) / M, epsabs=CENTROID_TOL, limit=200
            )
            levels[i] = M * val
    if np.any(np.diff(levels) <= 0):
        raise ValueError(
            "source is too degenerate (or the quantile table too coarse) "
            f"to place {M} distinct levels"
        )
    return validate_codebook(levels)


def codebook_from_json(text: str) -> Codebook:
    obj = json.loads(text)
    return validate_codebook(obj["levels"])
