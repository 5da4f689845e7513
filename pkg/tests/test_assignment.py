import json
import math

import numpy as np
import pytest

from pskia import (
    brute_force_best,
    canonicalize,
    load_symmetric_channel,
    mmse_reconstruction,
    msd_ml,
    msd_mmse,
    reflect_transform,
    rotate_transform,
    theorem3_assignment,
    validate_codebook,
    zigzag,
)
from pskia.assignment import merge_best_results

from conftest import random_codebook


@pytest.mark.parametrize(
    "M,expected",
    [
        (8, (0, 1, 3, 5, 7, 6, 4, 2)),
        (5, (0, 1, 3, 4, 2)),
        (1, (0,)),
        (2, (0, 1)),
        (4, (0, 1, 3, 2)),
    ],
)
def test_zigzag(M, expected):
    assert zigzag(M) == expected


@pytest.mark.parametrize(
    "M,expected",
    [
        (5, (0, 2, 4, 3, 1)),
        (6, (1, 3, 5, 4, 2, 0)),
        (2, (1, 0)),
        (1, (0,)),
    ],
)
def test_theorem3_assignment(M, expected):
    assert theorem3_assignment(M) == expected


def test_rotate_transform():
    assert rotate_transform((1, 3, 2, 0)) == (0, 1, 3, 2)
    assert rotate_transform((0,)) == (0,)
    a = (2, 0, 3, 1)
    b = a
    for _ in range(4):
        b = rotate_transform(b)
    assert b == a


def test_reflect_transform():
    assert reflect_transform((0, 2, 4, 3, 1)) == (0, 1, 3, 4, 2)
    assert reflect_transform(reflect_transform((3, 1, 0, 2))) == (3, 1, 0, 2)
    assert reflect_transform((1, 0)) == (1, 0)


def test_zigzag_and_center_out_share_an_orbit():
    for M in range(2, 13):
        assert canonicalize(zigzag(M)) == canonicalize(theorem3_assignment(M))


def test_msd_zero_on_identity_channel():
    ch = load_symmetric_channel(np.eye(4))
    cb = validate_codebook([0.0, 1.0, 2.5, 4.0])
    for perm in ((0, 1, 2, 3), (2, 0, 3, 1)):
        assert msd_ml(cb, perm, ch).msd == 0.0
        assert msd_mmse(cb, perm, ch).msd == 0.0


def test_msd_ml_uniform_channel_matches_direct_sum():
    M = 5
    ch = load_symmetric_channel(np.full((M, M), 1 / M))
    cb = random_codebook(np.random.default_rng(8), M)
    q = cb.as_array()
    perm = (3, 1, 4, 0, 2)
    qa = q[list(perm)]
    oracle = sum(
        (qa[i] - qa[j]) ** 2 / M**2 for i in range(M) for j in range(M)
    )
    assert msd_ml(cb, perm, ch).msd == pytest.approx(oracle, rel=1e-13)


def test_mmse_reconstruction_identity_and_uniform():
    M = 4
    cb = validate_codebook([0.0, 1.0, 2.0, 4.0])
    perm = (2, 0, 3, 1)
    ident = load_symmetric_channel(np.eye(M))
    assert mmse_reconstruction(cb, perm, ident) == pytest.approx(
        cb.as_array()[list(perm)]
    )
    unif = load_symmetric_channel(np.full((M, M), 1 / M))
    assert mmse_reconstruction(cb, perm, unif) == pytest.approx(
        np.full(M, cb.as_array().mean())
    )
    assert msd_mmse(cb, perm, unif).msd == pytest.approx(
        cb.as_array().var(), rel=1e-13
    )


def test_mmse_reconstruction_matches_matrix_oracle(awgn):
    ch = awgn(4, 5.0)
    cb = random_codebook(np.random.default_rng(12), 4)
    perm = (1, 3, 0, 2)
    y = mmse_reconstruction(cb, perm, ch)
    P = ch.matrix()
    oracle = cb.as_array()[list(perm)] @ P / P.sum(axis=0)
    assert y == pytest.approx(oracle, rel=1e-13)


def test_mmse_never_exceeds_ml(awgn):
    rng = np.random.default_rng(77)
    for M in (2, 4, 6):
        ch = awgn(M, 2.0)
        for _ in range(10):
            cb = random_codebook(rng, M)
            perm = tuple(rng.permutation(M))
            ml = msd_ml(cb, perm, ch).msd
            mmse = msd_mmse(cb, perm, ch).msd
            assert mmse <= ml + 1e-12 * max(ml, 1.0)


def test_transform_invariance_of_msd(awgn):
    rng = np.random.default_rng(5)
    for M in (4, 5, 6):
        ch = awgn(M, 3.0)
        cb = random_codebook(rng, M)
        perm = tuple(rng.permutation(M))
        for fn in (msd_ml, msd_mmse):
            base = fn(cb, perm, ch).msd
            scale = max(abs(base), fn(cb, perm, ch).fixed_term)
            for t in (rotate_transform(perm), reflect_transform(perm)):
                assert abs(fn(cb, t, ch).msd - base) <= 1e-12 * scale


def test_brute_force_best_identity_channel_all_tie():
    M = 4
    ch = load_symmetric_channel(np.eye(M))
    cb = validate_codebook([0.0, 1.0, 2.0, 3.0])
    best, minimizers = brute_force_best(cb, ch, "ml")
    assert best == 0.0
    assert len(minimizers) == math.factorial(M)


def test_brute_force_best_contains_optimal_assignments(awgn):
    ch = awgn(5, 10.0)
    cb = validate_codebook([0.1, 0.3, 0.5, 0.7, 0.9])
    best, minimizers = brute_force_best(cb, ch, "ml")
    assert theorem3_assignment(5) in minimizers
    assert zigzag(5) in minimizers
    rep = msd_ml(cb, zigzag(5), ch)
    assert rep.msd == pytest.approx(best, rel=1e-12)


def test_brute_force_best_mmse_zigzag(awgn):
    cb = validate_codebook(np.linspace(0, 1, 6))
    for gamma in (1.0, 10**0.5, 10.0):
        ch = awgn(6, gamma)
        best, _ = brute_force_best(cb, ch, "mmse")
        assert msd_mmse(cb, zigzag(6), ch).msd == pytest.approx(best, rel=1e-10)


def test_brute_force_best_two_level_symmetry(awgn):
    ch = awgn(2, 4.0)
    cb = validate_codebook([0.0, 1.0])
    _, minimizers = brute_force_best(cb, ch, "ml")
    assert set(minimizers) == {(0, 1), (1, 0)}


def test_brute_force_best_size_limit(awgn):
    cb = validate_codebook(np.arange(9, dtype=float))
    with pytest.raises(ValueError, match="limit"):
        brute_force_best(cb, awgn(9, 1.0), "ml")


def test_canonicalize_preserves_msd(awgn):
    rng = np.random.default_rng(99)
    ch = awgn(6, 2.0)
    cb = random_codebook(rng, 6)
    perm = tuple(rng.permutation(6))
    base = msd_ml(cb, perm, ch)
    canon = msd_ml(cb, canonicalize(perm), ch)
    assert canon.msd == pytest.approx(base.msd, rel=1e-12)


def test_partitioned_best_merges_to_full(awgn):
    ch = awgn(4, 2.0)
    cb = validate_codebook([0.0, 0.4, 0.7, 1.0])
    full = brute_force_best(cb, ch, "ml")
    scale = float(cb.as_array() @ cb.as_array()) / 4
    parts = [
        brute_force_best(cb, ch, "ml", outer_range=(a, min(a + 10, 24)))
        for a in range(0, 24, 10)
    ]
    merged = parts[0]
    for part in parts[1:]:
        merged = merge_best_results(merged, part, scale)
    assert merged[0] == pytest.approx(full[0], rel=1e-14)
    assert set(merged[1]) == set(full[1])


def test_report_serialization(awgn):
    ch = awgn(4, 2.0)
    cb = validate_codebook([0.0, 0.4, 0.7, 1.0])
    rep = msd_mmse(cb, (0, 1, 3, 2), ch)
    obj = json.loads(rep.to_json())
    assert obj["perm"] == [0, 1, 3, 2]
    assert obj["decoder"] == "mmse"
    assert obj["msd"] == rep.msd
    assert len(obj["y"]) == 4
