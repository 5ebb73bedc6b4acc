"""Seed derivation for reproducible, independent random streams.

All randomness in the library flows from user-supplied integer seeds.
Sub-streams (one per replication, per fold, per ensemble member) get their
own seed by mixing the parent seed with the sub-stream index through
splitmix64, so streams are decorrelated but fully determined by the root
seed. Generators are numpy PCG64.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 scrambling step; maps 64-bit ints to 64-bit ints."""
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, *stream: int) -> int:
    """Derive a child seed from ``seed`` and one or more stream indices.

    Each index is hashed with splitmix64 and xor-folded into the parent
    seed, so ``derive_seed(s, i) != derive_seed(s, j)`` for ``i != j`` and
    chains like ``derive_seed(derive_seed(s, rep), fold)`` stay independent.
    """
    h = seed & _MASK64
    for index in stream:
        h = splitmix64(h ^ splitmix64(index & _MASK64))
    return h


def make_rng(seed: int) -> np.random.Generator:
    """A PCG64 generator seeded with a (possibly derived) 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & _MASK64))
