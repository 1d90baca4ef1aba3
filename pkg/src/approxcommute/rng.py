"""Deterministic splittable PRNG used for reproducible instance streams.

The generator is splitmix64 (Steele, Lea, Flood; the java.util.SplittableRandom
finalizer).  Streams are derived from a 64-bit seed plus a list of keys via
FNV-1a hashing, so the same (seed, keys) always yields the same stream on any
platform or implementation.  All bounded draws use plain modulo reduction and
all probability events use exact integer comparison, so no floating point is
involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    """64-bit FNV-1a hash of a UTF-8 string."""
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def derive_seed(seed: int, *keys: int | str) -> int:
    """Child seed for a named substream; part of the reproducibility contract."""
    acc = seed & _MASK64
    for key in keys:
        k = fnv1a64(key) if isinstance(key, str) else key & _MASK64
        acc = _mix((acc + _GAMMA) & _MASK64) ^ k
    return acc & _MASK64


class SplitMix64:
    """splitmix64 stream over 64-bit unsigned outputs."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix(self._state)

    def below(self, n: int) -> int:
        """Uniform-ish draw in [0, n) via modulo reduction (documented contract)."""
        if n <= 0:
            raise ValueError(f"below() needs a positive bound, got {n}")
        return self.next_u64() % n

    def event(self, probability: Fraction) -> bool:
        """True with the given exact probability (integer comparison, no floats)."""
        p = Fraction(probability)
        if p <= 0:
            self.next_u64()
            return False
        if p >= 1:
            self.next_u64()
            return True
        return self.next_u64() * p.denominator < p.numerator << 64

    def choice(self, items):
        return items[self.below(len(items))]

    def split(self, *keys: int | str) -> "SplitMix64":
        return SplitMix64(derive_seed(self._state, *keys))
