"""Deterministic seed derivation for simulation streams.

Every replication of every study cell gets its own generator, seeded by a
SplitMix64-style fold of (master_seed, cell_index, replication_index).  The
fold is pure integer arithmetic, so the derived seeds -- and therefore the
streams -- are identical across platforms and interpreter versions.
"""
from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_PHI = 0x9E3779B97F4A7C15


def _mix(x: int) -> int:
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def derive_seed(*parts: int) -> int:
    """Fold integer parts into a single 64-bit seed (SplitMix64 finalizer)."""
    state = 0
    for p in parts:
        state = _mix((state + _PHI + int(p)) & _MASK)
    return state


def stream(*parts: int) -> np.random.Generator:
    """A PCG64 generator keyed by the given integer parts."""
    return np.random.Generator(np.random.PCG64(derive_seed(*parts)))
