"""
Counter-based random tape.

All solver randomness flows from one 64-bit master seed through numpy's
Philox bit generator. Each consumer gets its own stream id, so a corpus entry
or a bench cell can be replayed in isolation and produces byte-identical
output.
"""

import numpy as np

from .domain.exceptions import ArgumentError


_WORD_BITS = 64


class RandomTape:
    """Read-once stream of random bits with an exact consumption counter.

    Attributes:
        seed: 64-bit master seed
        stream: Stream id folded into the Philox key

    Example:
        >>> tape = RandomTape(seed=7)
        >>> tape.read_bits(10) < 1024
        True
        >>> tape.bits_used
        10
    """

    def __init__(self, seed: int, stream: int = 0):
        """
        Initialize the tape.

        Args:
            seed: Master seed in [0, 2^64)
            stream: Stream id in [0, 2^64)

        Raises:
            ArgumentError: If seed or stream do not fit in 64 bits
        """
        if not 0 <= seed < 1 << _WORD_BITS or not 0 <= stream < 1 << _WORD_BITS:
            raise ArgumentError("seed and stream must be 64-bit unsigned integers")

        self.seed = seed
        self.stream = stream
        self._bitgen = np.random.Philox(key=(stream << _WORD_BITS) | seed)
        self._buffer = 0
        self._buffered = 0
        self._bits_used = 0

    @classmethod
    def for_stream(cls, seed: int, stream: int) -> "RandomTape":
        """Independent reproducible tape for one corpus entry or bench cell."""
        return cls(seed=seed, stream=stream)

    @property
    def bits_used(self) -> int:
        """Number of bits handed out so far."""
        return self._bits_used

    def read_bits(self, count: int) -> int:
        """
        Return ``count`` fresh random bits as a nonnegative integer.

        Args:
            count: Number of bits (0 returns 0)

        Raises:
            ArgumentError: If count is negative
        """
        if count < 0:
            raise ArgumentError(f"bit count must be nonnegative, got {count}")

        while self._buffered < count:
            words = -(-(count - self._buffered) // _WORD_BITS)
            for word in self._bitgen.random_raw(words):
                self._buffer |= int(word) << self._buffered
                self._buffered += _WORD_BITS

        value = self._buffer & ((1 << count) - 1)
        self._buffer >>= count
        self._buffered -= count
        self._bits_used += count
        return value

    def draw_index(self, m: int) -> int:
        """
        Draw a uniform index in [0, m).

        Consumes ceil(log2 m) bits per attempt; out-of-range attempts are
        rejected and redrawn.

        Raises:
            ArgumentError: If m < 1
        """
        if m < 1:
            raise ArgumentError(f"cannot draw from an empty range (m={m})")
        bits = (m - 1).bit_length()
        while True:
            value = self.read_bits(bits)
            if value < m:
                return value
