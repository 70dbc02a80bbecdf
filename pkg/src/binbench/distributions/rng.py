"""Seeded random streams.

Every sampler draws from ``numpy.random.Generator`` over ``PCG64``. Per-trial
seeds are derived with ``SeedSequence(base_seed, spawn_key=key)``, whose
hashing is part of numpy's stable API, so a (base seed, key) pair names the
same stream on every platform.
"""

from __future__ import annotations

import numpy as np

RNG_NAME = "numpy.PCG64"
RNG_VERSION = 1


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def derive_seed(base_seed: int, *key: int) -> int:
    """Mix ``base_seed`` with an integer key path into a 64-bit trial seed."""
    ss = np.random.SeedSequence(int(base_seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def trial_seed(base_seed: int, trial_index: int) -> int:
    return derive_seed(base_seed, trial_index)
