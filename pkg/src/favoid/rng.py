"""Deterministic 64-bit randomness: SplitMix64 streams and seed derivation.

Every random choice in the package flows through this module so that seeded
runs reproduce bit-for-bit across platforms and Python versions.  The stdlib
`random` module only guarantees stability of `random()` itself, which is not
enough for shuffles and integer draws.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """SplitMix64 finalizer: a bijective 64-bit mix with good avalanche."""
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(root: int, *parts: int) -> int:
    """Derive a child seed from a root seed and integer coordinates.

    The derivation is `s = mix64(root); s = mix64(s ^ mix64(p))` folded over
    the parts, so (root, n, trial) always maps to the same seed and adding new
    coordinates elsewhere never perturbs existing ones.
    """
    s = mix64(root & _MASK64)
    for p in parts:
        s = mix64(s ^ mix64(p & _MASK64))
    return s


class SplitMix64:
    """Seedable SplitMix64 stream (state += golden; output = mix)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        x = self._state
        x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
        return x ^ (x >> 31)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling (no modulo bias)."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        limit = ((1 << 64) // n) * n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def random(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, population: int, k: int) -> list[int]:
        """k distinct indices from range(population), by partial Fisher-Yates."""
        if not 0 <= k <= population:
            raise ValueError("sample size out of range")
        swapped: dict[int, int] = {}
        out = []
        for i in range(k):
            j = i + self.randrange(population - i)
            vi = swapped.get(i, i)
            vj = swapped.get(j, j)
            out.append(vj)
            swapped[j] = vi
        return out
