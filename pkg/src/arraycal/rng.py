"""Seeded random number generation with documented stream splitting."""

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def derive_seed(master_seed: int, index: int) -> int:
    """Mix a master seed with a stream index into an independent 64-bit seed.

    SplitMix64 finalizer applied to ``master_seed + (index + 1) * golden``.
    Pure function of its arguments, so derived streams never depend on
    execution order or worker count.
    """
    z = (master_seed + (index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for the given seed (the package-wide RNG choice)."""
    return np.random.Generator(np.random.PCG64(seed))
