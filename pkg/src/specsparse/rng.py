"""Counter-based SplitMix64 generator.

Every "random" object in the package (test instances, shift orders, index
permutations) is drawn from this generator so that results are reproducible
bit for bit across platforms and languages.

The k-th output (k = 0, 1, ...) of the stream with 64-bit seed ``s`` is::

    z = (s + (k + 1) * 0x9E3779B97F4A7C15) mod 2**64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    out = z ^ (z >> 31)

which is exactly the sequential SplitMix64 recurrence started at state ``s``.
Uniform doubles in [0, 1) are ``(out >> 11) * 2**-53``. Independent streams
for different purposes use ``derive_seed(seed, label)``.
"""
from __future__ import annotations

import zlib

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, label: str) -> int:
    """Seed of an independent stream identified by ``label``."""
    return mix64((int(seed) & _MASK) ^ (zlib.crc32(label.encode()) * GOLDEN))


class SplitMix64:
    """Stateful view of the counter-based stream."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK
        self.counter = 0

    def next_u64(self, count: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + 1 + count, dtype=np.uint64)
        self.counter += count
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + k * np.uint64(GOLDEN)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    def uniform(self, count: int) -> np.ndarray:
        """Doubles in [0, 1)."""
        return (self.next_u64(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def uniform_pm1(self, count: int) -> np.ndarray:
        """Doubles in [-1, 1)."""
        return 2.0 * self.uniform(count) - 1.0

    def permutation(self, n: int) -> np.ndarray:
        """Permutation of range(n): stable argsort of n fresh 64-bit keys."""
        return np.argsort(self.next_u64(n), kind="stable").astype(np.int64)
