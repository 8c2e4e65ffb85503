"""Deterministic randomness: splitmix64 with labeled stream splitting.

Every randomized computation in the workbench (fuzz corpora, random tuples,
seeded automorphisms) draws from one of these generators, derived from a
single 64-bit experiment seed.  Two runs with the same seed therefore produce
byte-identical artifacts.

The generator is the standard splitmix64 step (Steele-Lea-Flood constants).
Stream splitting hashes a text label into the parent seed with FNV-1a so that
subsystems cannot collide by drawing order.
"""

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _fnv1a(label: str) -> int:
    h = _FNV_OFFSET
    for byte in label.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & MASK64
    return h


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Splitmix64 stream; ``split(label)`` derives an independent child stream."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        return _mix(self._state)

    def split(self, label: str) -> "SplitMix64":
        return SplitMix64(_mix(self._state ^ _fnv1a(label)))

    def randrange(self, n: int) -> int:
        """Uniform-enough integer in [0, n); modulo bias is irrelevant here."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) / float(1 << 53)
