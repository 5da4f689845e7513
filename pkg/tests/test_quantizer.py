import numpy as np
import pytest
from scipy import integrate, stats

from pskia import (
    SourceSpec,
    max_entropy_codebook,
    msd_ml,
    msd_mmse,
    validate_codebook,
)
from pskia.quantizer import Codebook, codebook_from_json

from conftest import random_codebook


def test_uniform_quartile_midpoints():
    cb = max_entropy_codebook(SourceSpec.uniform(0, 1), 4, "cell_midpoint")
    assert cb.levels == pytest.approx([0.125, 0.375, 0.625, 0.875], abs=1e-14)
    assert cb.shift_applied == 0.0


def test_uniform_centroid_equals_midpoint():
    mid = max_entropy_codebook(SourceSpec.uniform(0, 1), 4, "cell_midpoint")
    cen = max_entropy_codebook(SourceSpec.uniform(0, 1), 4, "centroid")
    assert cen.levels == pytest.approx(mid.levels, abs=1e-10)


def test_gaussian_centroid_cells_are_equiprobable():
    M = 4
    cb = max_entropy_codebook(SourceSpec.gaussian(0, 1), M, "centroid")
    # the raw (pre-shift) codebook is symmetric, so the shift is |q_0|
    assert cb.shift_applied > 0
    raw = np.asarray(cb.levels) - cb.shift_applied
    edges = [-np.inf] + [stats.norm.ppf(i / M) for i in range(1, M)] + [np.inf]
    for i in range(M):
        # independent oracle: CDF quadrature of each cell
        prob, _ = integrate.quad(
            stats.norm.pdf,
            max(edges[i], -12),
            min(edges[i + 1], 12),
            epsabs=1e-12,
        )
        assert prob == pytest.approx(1 / M, abs=1e-9)
        assert edges[i] < raw[i] < edges[i + 1]


def test_gaussian_centroid_matches_closed_form():
    # E[X | cell] for a standard normal is (pdf(a) - pdf(b)) * M
    M = 8
    cb = max_entropy_codebook(SourceSpec.gaussian(0, 1), M, "centroid")
    raw = np.asarray(cb.levels) - cb.shift_applied
    edges = stats.norm.ppf(np.arange(M + 1) / M)
    expected = (stats.norm.pdf(edges[:-1]) - stats.norm.pdf(edges[1:])) * M
    assert raw == pytest.approx(expected, abs=1e-9)


def test_table_source():
    src = SourceSpec.table(np.linspace(-1.0, 3.0, 41))
    cb = max_entropy_codebook(src, 4, "cell_midpoint")
    assert np.asarray(cb.levels) - cb.shift_applied == pytest.approx(
        [-0.5, 0.5, 1.5, 2.5], abs=1e-12
    )


def test_validate_codebook_plain():
    cb = validate_codebook([1.0, 2.0, 3.0])
    assert cb.levels == (1.0, 2.0, 3.0)
    assert cb.shift_applied == 0.0


def test_validate_codebook_shifts_negative():
    cb = validate_codebook([-1.0, 0.0, 2.0])
    assert cb.levels == (0.0, 1.0, 3.0)
    assert cb.shift_applied == 1.0


def test_validate_codebook_rejects_non_strict():
    with pytest.raises(ValueError):
        validate_codebook([1.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        validate_codebook([3.0, 2.0, 1.0])
    with pytest.raises(ValueError):
        validate_codebook([0.0, np.nan])


def test_source_parse():
    assert SourceSpec.parse("uniform:0,1") == SourceSpec.uniform(0, 1)
    assert SourceSpec.parse("gaussian:0,2") == SourceSpec.gaussian(0, 2)
    with pytest.raises(ValueError):
        SourceSpec.parse("laplace:0,1")
    with pytest.raises(ValueError):
        SourceSpec.uniform(1, 1)
    with pytest.raises(ValueError):
        SourceSpec.gaussian(0, 0)


def test_degenerate_table_rejected():
    with pytest.raises(ValueError):
        SourceSpec.table([1.0, 1.0, 2.0])


def test_shift_invariance_of_distortion(awgn):
    ch = awgn(5, 10.0)
    rng = np.random.default_rng(4)
    cb = random_codebook(rng, 5)
    shifted = Codebook(tuple(np.asarray(cb.levels) + 2.5), 2.5)
    perm = (0, 2, 4, 3, 1)
    for fn in (msd_ml, msd_mmse):
        a = fn(cb, perm, ch).msd
        b = fn(shifted, perm, ch).msd
        assert b == pytest.approx(a, rel=1e-12, abs=1e-15)


def test_codebook_json_roundtrip():
    cb = validate_codebook([-0.5, 0.25, 1.0])
    again = codebook_from_json(cb.to_json())
    assert again.levels == cb.levels
