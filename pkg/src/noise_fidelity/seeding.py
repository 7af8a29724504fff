"""Seed derivation for reproducible parallel Monte-Carlo runs.

A master seed and a tuple of integer keys (realization index, stream id, ...)
map to an independent 64-bit seed through ``numpy.random.SeedSequence``'s
spawn-key hashing. Generators are ``Philox`` (counter-based), so a derived
stream never depends on how work is scheduled.
"""

import numpy as np

# Stream identifiers used as the last derivation key.
NOISE_STREAM = 0
MEASUREMENT_STREAM = 1
SITE_STREAM = 2
SEQUENCE_STREAM = 3
AUX_STREAM = 4

_SEED_MASK = (1 << 64) - 1


def derive_seed(master: int, *keys: int) -> int:
    """Derive a child seed from a master seed and a key path.

    Args:
        master: Master seed (any non-negative integer).
        *keys: Non-negative integer keys identifying the child stream.

    Returns:
        A 64-bit integer seed.
    """
    seq = np.random.SeedSequence(entropy=master & _SEED_MASK, spawn_key=tuple(keys))
    state = seq.generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def make_rng(seed: int) -> np.random.Generator:
    """Build the generator used for every random draw in the toolkit."""
    return np.random.Generator(np.random.Philox(seed & _SEED_MASK))
