import numpy as np
import pytest

from pskia import Kernel, awgn_transition, validate_codebook

_channel_cache = {}


def random_kernel(rng, M):
    """Random valid kernel: sorted descending draws as the half-sequence."""
    return Kernel(M, tuple(np.sort(rng.random(M // 2 + 1))[::-1]))


def random_codebook(rng, M):
    """Strictly increasing non-negative levels with a 1e-6 minimum gap."""
    levels = np.sort(np.abs(rng.standard_normal(M))) + np.arange(M) * 1e-6
    return validate_codebook(levels)


@pytest.fixture(scope="session")
def awgn():
    """Memoized AWGN channel factory (quadrature is the slow part)."""

    def build(M, gamma):
        key = (M, gamma)
        if key not in _channel_cache:
            _channel_cache[key] = awgn_transition(M, gamma)
        return _channel_cache[key]

    return build
