"""
Seeded counter-based random streams

Every randomised oracle owns one seed. Draws that must be reproducible
independently of how many other draws happened (per-step batches, retries,
directions) come from sub-streams keyed by small integer tuples.
"""

import hashlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def substream(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for (seed, key); identical keys replay identical draws."""
    sequence = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(sequence))


def point_key(y: np.ndarray) -> int:
    """64-bit digest of a point's bytes."""
    digest = hashlib.blake2b(np.ascontiguousarray(y, dtype=np.float64).tobytes(), digest_size=8)
    return int.from_bytes(digest.digest(), "little")
