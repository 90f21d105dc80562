"""Counter-based seed derivation for schedule-independent sampling.

Every stochastic computation in this package draws from a generator derived
from (master seed, *key parts) rather than from shared global state.  Work
items keyed by (world id, stage) therefore produce identical streams no
matter how many workers evaluate them or in which order.
"""

from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np


def _as_key_word(part) -> int:
    """Map one key component to a stable non-negative integer."""
    if isinstance(part, bool):
        return int(part)
    if isinstance(part, int):
        return part & 0xFFFFFFFFFFFFFFFF
    if isinstance(part, (str, Fraction, float)):
        return zlib.crc32(str(part).encode("utf-8"))
    raise TypeError(f"unsupported seed key component: {part!r}")


def seed_sequence(master_seed: int, *parts) -> np.random.SeedSequence:
    key = tuple(_as_key_word(p) for p in parts)
    return np.random.SeedSequence(master_seed & 0xFFFFFFFFFFFFFFFF, spawn_key=key)


def generator(master_seed: int, *parts) -> np.random.Generator:
    """A Philox generator for the stream identified by (master_seed, *parts)."""
    return np.random.Generator(np.random.Philox(seed_sequence(master_seed, *parts)))
