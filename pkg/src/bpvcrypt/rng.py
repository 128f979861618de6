"""Randomness sources.

Anything with a ``randbelow(n)`` method works.  :class:`SeededRng` is a
reproducible stream (SHA-256 in counter mode over the seed) used for
golden fixtures and the CLI's hidden ``--seed`` option; it is not a
secure generator for real keys.
"""

import hashlib

from .group import RandomSource, SystemRng

__all__ = ["RandomSource", "SeededRng", "SystemRng"]


class SeededRng:
    def __init__(self, seed: int | bytes | str) -> None:
        if isinstance(seed, int):
            seed = seed.to_bytes((seed.bit_length() + 8) // 8, "big", signed=True)
        elif isinstance(seed, str):
            seed = seed.encode()
        self._key = hashlib.sha256(b"seeded-rng\x00" + seed).digest()
        self._counter = 0
        self._buf = b""

    def randbytes(self, n: int) -> bytes:
        while len(self._buf) < n:
            self._buf += hashlib.sha256(self._key + self._counter.to_bytes(8, "big")).digest()
            self._counter += 1
        out, self._buf = self._buf[:n], self._buf[n:]
        return out

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        bits = n.bit_length()
        nbytes = (bits + 7) // 8
        mask = (1 << bits) - 1
        while True:
            x = int.from_bytes(self.randbytes(nbytes), "big") & mask
            if x < n:
                return x
