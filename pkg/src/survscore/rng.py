"""Deterministic counter-based random numbers.

Every output word is a pure function of (seed, counter): word ``i`` is the
splitmix64 finalizer applied to ``seed + (i + 1) * GOLDEN`` (mod 2**64).
Because any word can be computed in O(1) without touching shared state,
parallel consumers stay reproducible: give worker ``r`` the child stream
``substream(r)`` and results cannot depend on scheduling order.

Reproducibility is guaranteed within this package (same seed, same draws,
any platform), not against other splitmix implementations.
"""

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _finalize(z: int) -> int:
    # splitmix64 output function (Steele/Lea/Flood mixing constants)
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Counter-based 64-bit stream with O(1) random access to any word."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK
        self._counter = 0

    def word(self, index: int) -> int:
        """64-bit word at position ``index``, independent of internal state."""
        return _finalize((self.seed + (index + 1) * _GOLDEN) & _MASK)

    def substream(self, index: int) -> "SplitMix64":
        """Child stream seeded from word ``index`` of this stream."""
        return SplitMix64(self.word(index))

    def next_word(self) -> int:
        w = self.word(self._counter)
        self._counter += 1
        return w

    def next_uniform(self) -> float:
        """Uniform draw strictly inside (0, 1) at 52-bit resolution.

        The half-offset keeps both endpoints unreachable, so scaled draws
        stay strictly inside (0, c) for any c > 0.
        """
        return ((self.next_word() >> 12) + 0.5) * 2.0**-52

    def next_below(self, n: int) -> int:
        """Unbiased integer in [0, n), by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = ((1 << 64) // n) * n
        while True:
            w = self.next_word()
            if w < limit:
                return w % n

    def choose(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n) via partial Fisher-Yates."""
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        idx = list(range(n))
        for i in range(k):
            j = i + self.next_below(n - i)
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:k]
