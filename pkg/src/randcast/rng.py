"""Deterministic 64-bit generator used by all sampling code.

SplitMix64: a fixed, documented mixing generator so that sampled paths are
identical across platforms and runs for a given seed.  Draws are consumed
one per decision; fairness thresholds are compared with exact integer
arithmetic, never floats.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

TWO64 = 1 << 64


class SplitMix64:
    """SplitMix64 stream seeded with a 64-bit integer."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def bernoulli(self, p: Fraction) -> int:
        """Draw 1 with probability p. Exact: compares u/2^64 < p as integers."""
        u = self.next_u64()
        return 1 if u * p.denominator < p.numerator * TWO64 else 0

    def uniform_fraction(self) -> Fraction:
        """Uniform dyadic rational in [0, 1)."""
        return Fraction(self.next_u64(), TWO64)
