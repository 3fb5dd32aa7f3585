"""Portable 64-bit random streams: splitmix64 seeding feeding xoshiro256**.

Both generators are the published reference algorithms (Vigna), so a stream
is reproducible bit-for-bit from any language given the same seed.  The pure
Python methods are the reference; the numba kernels below reproduce them and
are what the walk engine consumes in bulk.
"""
from __future__ import annotations

import numba
import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step; returns (new_state, output)."""
    state = (state + _GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


def stream_seed(seed: int, index: int) -> int:
    """Seed of the independent substream ``index`` derived from ``seed``."""
    s, a = splitmix64(seed & MASK64)
    _, b = splitmix64((a ^ ((index + 1) * _GOLDEN)) & MASK64)
    return b


class Xoshiro256:
    """xoshiro256** generator.

    The 256-bit state is filled from four consecutive splitmix64 outputs of
    ``seed``.  ``stream`` selects a substream via :func:`stream_seed`; one
    stream per trajectory, never shared.
    """

    def __init__(self, seed: int = 0, stream: int | None = None):
        self.seed = int(seed)
        self.stream = stream
        sm = self.seed & MASK64 if stream is None else stream_seed(self.seed, stream)
        st = []
        for _ in range(4):
            sm, out = splitmix64(sm)
            st.append(out)
        self.state = np.array(st, dtype=np.uint64)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = (int(x) for x in self.state)
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.state[:] = (s0, s1, s2, s3)
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randbelow(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection of the short top range."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def normal(self) -> float:
        """Standard normal via Box-Muller (one draw, second value discarded)."""
        import math

        u1 = 1.0 - self.random()
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    # bulk draws, bit-identical to repeated scalar calls
    def u64_array(self, size: int) -> np.ndarray:
        return _u64_block(self.state, size)

    def randbelow_array(self, n: int, size: int) -> np.ndarray:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = ((1 << 64) - ((1 << 64) % n)) & MASK64
        # limit == 0 encodes 2**64 (n a power of two): no rejection
        return _randbelow_block(self.state, np.uint64(n), np.uint64(limit), size)

    def choice_array(self, cumulative: np.ndarray, size: int) -> np.ndarray:
        """Indices drawn from a cumulative probability table."""
        return _choice_block(self.state, cumulative, size)


_U5 = np.uint64(5)
_U9 = np.uint64(9)
_U7 = np.uint64(7)
_U57 = np.uint64(57)
_U17 = np.uint64(17)
_U45 = np.uint64(45)
_U19 = np.uint64(19)
_U11 = np.uint64(11)


@numba.njit(cache=True)
def _next(s):
    x = s[1] * _U5
    result = ((x << _U7) | (x >> _U57)) * _U9
    t = s[1] << _U17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = (s[3] << _U45) | (s[3] >> _U19)
    return result


@numba.njit(cache=True)
def _u64_block(s, size):
    out = np.empty(size, dtype=np.uint64)
    for i in range(size):
        out[i] = _next(s)
    return out


@numba.njit(cache=True)
def _randbelow_block(s, n, limit, size):
    out = np.empty(size, dtype=np.int64)
    for i in range(size):
        while True:
            r = _next(s)
            if limit == np.uint64(0) or r < limit:
                out[i] = np.int64(r % n)
                break
    return out


@numba.njit(cache=True)
def _choice_block(s, cumulative, size):
    out = np.empty(size, dtype=np.int64)
    m = cumulative.shape[0]
    for i in range(size):
        u = np.float64(_next(s) >> _U11) * 2.0**-53
        k = 0
        while k < m - 1 and u >= cumulative[k]:
            k += 1
        out[i] = k
    return out
