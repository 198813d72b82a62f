"""Prime pool generation and reproducible seeded sampling.

The pool for budget parameter n is the set of primes in the closed range
[ceil(n/2) + 1, n]; it is nonempty for every n >= 2 (Bertrand).  Primes come
from a deterministic sieve of Eratosthenes, segmented above 10^6 so memory
stays bounded.

Randomness contract
-------------------
All draws come from SplitMix64 streams with fully documented constants, so a
trace is byte-identical across platforms, runs and worker counts:

* state advance (counter):  state += 0x9E3779B97F4A7C15  (mod 2^64)
* output finalizer:         z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
                            z ^= z >> 27; z *= 0x94D049BB133111EB;
                            z ^= z >> 31                  (mod 2^64)
* stream derivation:        state0 = mix64(master_seed ^ mix64(index + GAMMA))

Identical (master_seed, stream_index) always yields the identical sequence;
distinct stream indices give statistically independent streams.  Bounded
uniform draws use rejection below the largest multiple of the range size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "SeededRng",
    "PrimePool",
    "primes_in_range",
    "sample_prime",
    "sample_generator",
    "sieve_upto",
    "is_prime",
    "derive_seed",
    "mix64",
]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_SEGMENT = 1 << 20


def mix64(z: int) -> int:
    """SplitMix64 output finalizer (murmur-style 64-bit bijection)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int, salt: int = 0) -> int:
    """Derive a 64-bit sub-seed for stream `index` under an optional salt."""
    return mix64((master_seed ^ salt) & _MASK ^ mix64((index + _GAMMA) & _MASK))


class SeededRng:
    """One SplitMix64 stream, identified by (master_seed, stream_index).

    Each stream is owned by exactly one consumer (e.g. one replicate); streams
    are created where needed, never shared across tasks.
    """

    __slots__ = ("master_seed", "stream_index", "_state")

    def __init__(self, master_seed: int, stream_index: int):
        self.master_seed = master_seed & _MASK
        self.stream_index = stream_index & _MASK
        self._state = derive_seed(self.master_seed, self.stream_index)

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return mix64(self._state)

    def uniform_index(self, size: int) -> int:
        """Uniform draw from {0, ..., size-1} by bounded rejection."""
        if size < 1:
            raise DomainError(f"need a positive range, got {size}")
        limit = ((1 << 64) // size) * size
        v = self.next_u64()
        while v >= limit:
            v = self.next_u64()
        return v % size


# ---------------------------------------------------------------------------
# sieving


def sieve_upto(limit: int) -> np.ndarray:
    """All primes <= limit (plain sieve; int64 array)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, math.isqrt(limit) + 1):
        if flags[q]:
            flags[q * q:: q] = False
    return np.flatnonzero(flags).astype(np.int64)


def is_prime(m: int) -> bool:
    """Deterministic trial division up to sqrt(m)."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    q = 3
    while q * q <= m:
        if m % q == 0:
            return False
        q += 2
    return True


@dataclass(frozen=True)
class PrimePool:
    """All primes p with ceil(n/2)+1 <= p <= n, ascending."""

    n: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    @property
    def lower(self) -> int:
        return (self.n + 1) // 2 + 1


def primes_in_range(n: int) -> PrimePool:
    """Exact prime pool for budget n >= 2 (segmented sieve over [ceil(n/2)+1, n])."""
    if n < 2:
        raise DomainError(f"pool needs n >= 2, got {n}")
    lo = (n + 1) // 2 + 1
    lo = max(lo, 2)
    base = sieve_upto(math.isqrt(n))
    found: list[int] = []
    seg_lo = lo
    while seg_lo <= n:
        seg_hi = min(seg_lo + _SEGMENT - 1, n)
        flags = np.ones(seg_hi - seg_lo + 1, dtype=bool)
        for q in base:
            q = int(q)
            start = max(q * q, ((seg_lo + q - 1) // q) * q)
            if start <= seg_hi:
                flags[start - seg_lo:: q] = False
        found.extend((seg_lo + np.flatnonzero(flags)).tolist())
        seg_lo = seg_hi + 1
    pool = PrimePool(n, tuple(int(p) for p in found))
    assert pool.primes, f"empty prime pool for n={n} contradicts Bertrand"
    return pool


# ---------------------------------------------------------------------------
# sampling


def sample_prime(pool: PrimePool, rng: SeededRng) -> int:
    """Uniform draw from the pool."""
    if not pool.primes:
        raise DomainError("cannot sample from an empty pool")
    return pool.primes[rng.uniform_index(len(pool.primes))]


def sample_generator(p: int, d: int, rng: SeededRng) -> tuple[int, ...]:
    """Uniform generating vector: each coordinate independent on {1, ..., p-1}."""
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    return tuple(1 + rng.uniform_index(p - 1) for _ in range(d))
