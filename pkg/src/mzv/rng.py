"""Deterministic pseudo-random numbers for reproducible fuzzing.

The generator is xorshift64* (Vigna, "An experimental exploration of
Marsaglia's xorshift generators, scrambled"): 64-bit state `x`, one step is

    x ^= x >> 12;  x ^= (x << 25) & MASK;  x ^= x >> 27
    output = (x * 2685821657736338717) & MASK

Seeds are first mixed through one splitmix64 round so that small seeds do
not start in low-entropy states; seed 0 is remapped to a fixed constant.
The same seed yields the same draw sequence on every platform - all
arithmetic is integer, and uniform doubles take the top 53 output bits.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK = (1 << 64) - 1
_MULT = 2685821657736338717
_ZERO_SEED = 0x9E3779B97F4A7C15

T = TypeVar("T")


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class XorShift64Star:
    """xorshift64* stream with convenience draws used by the fuzzers."""

    def __init__(self, seed: int) -> None:
        seed = int(seed) & _MASK
        state = _splitmix64(seed if seed != 0 else _ZERO_SEED)
        self._state = state if state != 0 else _ZERO_SEED

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK
        x ^= x >> 27
        self._state = x
        return (x * _MULT) & _MASK

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], rejection-sampled to avoid modulo bias."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = ((_MASK + 1) // span) * span
        while True:
            r = self.next_u64()
            if r < limit:
                return lo + r % span

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise ValueError("cannot choose from an empty sequence")
        return seq[self.randint(0, len(seq) - 1)]
