"""Counter-based seed derivation.

Every random stream in the package is addressed by a path of integer keys
hung off a master seed, e.g. ``(master, point, trial, block)``.  The stream
for a given path never depends on which other paths were drawn, or in which
order, so work can be split over any number of threads.
"""
from __future__ import annotations

import hashlib
from typing import Union

import numpy as np

Seed = Union[int, np.random.SeedSequence]


def as_seed_sequence(seed: Seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (int, np.integer)) and not isinstance(seed, bool):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        return np.random.SeedSequence(int(seed))
    raise TypeError(f"unsupported seed type {type(seed).__name__}")


def substream(seed: Seed, *keys: int) -> np.random.SeedSequence:
    """Child seed addressed by ``keys`` below ``seed``."""
    ss = as_seed_sequence(seed)
    return np.random.SeedSequence(
        ss.entropy,
        spawn_key=tuple(ss.spawn_key) + tuple(int(k) for k in keys),
        pool_size=ss.pool_size,
    )


def generator(seed: Seed, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(substream(seed, *keys)))


def stable_key(*parts) -> int:
    """63-bit key from the repr of ``parts``; stable across processes
    (unlike the salted builtin ``hash``)."""
    digest = hashlib.blake2b(repr(parts).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") >> 1
