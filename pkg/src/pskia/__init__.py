"""Optimal index assignment of quantizer levels to PSK symbols.

Builds circulant symmetric-decreasing channel kernels, maximum-entropy
scalar quantizer codebooks, and the provably optimal (zigzag) level-to-
symbol assignments under ML and MMSE decoding, with exhaustive searches
certifying every optimality claim at desk scale.
"""

from .assignment import (
    DistortionReport,
    brute_force_best,
    canonicalize,
    channel_msd,
    mmse_reconstruction,
    msd_ml,
    msd_mmse,
    reflect_transform,
    rotate_transform,
    theorem3_assignment,
    zigzag,
)
from .backend import BACKEND
from .channel import ChannelModel, awgn_transition, load_symmetric_channel, mpsk_phases
from .kernel import (
    Kernel,
    KernelValidationError,
    circular_distance,
    kernel_entry,
    kernel_product,
    validate_kernel,
)
from .quantizer import Codebook, SourceSpec, max_entropy_codebook, validate_codebook
from .rearrange import (
    Arrangement,
    arrangement_to_permutation,
    bilinear_sum,
    brute_force_max,
    improve_until_fixed,
    omega_swap,
    theorem2_ordering,
)

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "BACKEND",
    "ChannelModel",
    "Codebook",
    "DistortionReport",
    "Kernel",
    "KernelValidationError",
    "SourceSpec",
    "arrangement_to_permutation",
    "awgn_transition",
    "bilinear_sum",
    "brute_force_best",
    "brute_force_max",
    "canonicalize",
    "channel_msd",
    "circular_distance",
    "improve_until_fixed",
    "kernel_entry",
    "kernel_product",
    "load_symmetric_channel",
    "max_entropy_codebook",
    "mmse_reconstruction",
    "mpsk_phases",
    "msd_ml",
    "msd_mmse",
    "omega_swap",
    "reflect_transform",
    "rotate_transform",
    "theorem2_ordering",
    "theorem3_assignment",
    "validate_codebook",
    "validate_kernel",
    "zigzag",
]
