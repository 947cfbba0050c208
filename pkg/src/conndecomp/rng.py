"""Deterministic splittable randomness.

Every random decision in the library draws from a stream derived from
(seed, purpose-tag, ...), so results do not depend on the order in which
independent pieces of work are executed.
"""

from __future__ import annotations

import hashlib
import random

import numpy as np


def derive_seed(seed: int, *tags) -> int:
    """Hash (seed, *tags) into a 64-bit stream seed."""
    key = repr((int(seed),) + tuple(tags)).encode()
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big")


def stream(seed: int, *tags) -> random.Random:
    """A `random.Random` seeded from (seed, *tags)."""
    return random.Random(derive_seed(seed, *tags))


def np_stream(seed: int, *tags) -> np.random.Generator:
    """A numpy Generator seeded from (seed, *tags)."""
    return np.random.Generator(np.random.PCG64(derive_seed(seed, *tags)))
