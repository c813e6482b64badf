"""Pinned PRNG: splitmix64 seeding + xoshiro256** stream.

Split membership and pair-manifest draws must be byte-reproducible across
platforms and releases, so randomness never comes from ``random`` or numpy.
The stream is documented here and frozen by fixtures:

    state: four uint64 words from iterating splitmix64 on the seed
    next(): xoshiro256** step -> uint64
    randbelow(n): next() % n  (modulo; n is tiny relative to 2**64)
    shuffle: descending Fisher-Yates using randbelow(i + 1)
"""

from __future__ import annotations

_MASK = 0xFFFFFFFFFFFFFFFF


def _splitmix64(state: int):
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro256:
    """xoshiro256** with splitmix64 seed expansion."""

    def __init__(self, seed: int):
        state = seed & _MASK
        words = []
        for _ in range(4):
            state, word = _splitmix64(state)
            words.append(word)
        self._s = words

    def next_uint64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_uint64() % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def choice(self, items):
        return items[self.randbelow(len(items))]

    def sample_two_distinct(self, items):
        first = self.randbelow(len(items))
        second = self.randbelow(len(items) - 1)
        if second >= first:
            second += 1
        return items[first], items[second]
