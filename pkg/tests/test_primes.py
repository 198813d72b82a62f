"""prime_sampler module: pool exactness, sampling uniformity, stream contract."""

import numpy as np
import pytest
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

from medianqmc import (DomainError, SeededRng, is_prime, primes_in_range,
                       sample_generator, sample_prime, sieve_upto)

from oracles import trial_division_primes

REFERENCE_LIMIT = 10 ** 5
REFERENCE = trial_division_primes(REFERENCE_LIMIT)
REFERENCE_ARR = np.asarray(REFERENCE)


def reference_pool(n: int) -> tuple[int, ...]:
    lo = (n + 1) // 2 + 1
    i = np.searchsorted(REFERENCE_ARR, lo, side="left")
    j = np.searchsorted(REFERENCE_ARR, n, side="right")
    return tuple(int(p) for p in REFERENCE_ARR[i:j])


def test_pool_examples():
    assert primes_in_range(10).primes == (7,)
    assert primes_in_range(20).primes == (11, 13, 17, 19)
    assert primes_in_range(2).primes == (2,)


def test_pool_values_are_prime_and_sorted():
    pool = primes_in_range(5000)
    assert list(pool.primes) == sorted(pool.primes)
    for p in pool.primes:
        assert is_prime(p)
        assert pool.lower <= p <= 5000


def test_pool_matches_trial_division_small_exhaustive():
    for n in range(2, 3000):
        assert primes_in_range(n).primes == reference_pool(n), f"n={n}"


def test_pool_matches_trial_division_to_1e5():
    # exhaustive over the full range, reference sliced from one table
    for n in range(3000, REFERENCE_LIMIT + 1):
        assert primes_in_range(n).primes == reference_pool(n), f"n={n}"


def test_pool_segmentation_boundary():
    # spans several sieve segments
    pool = primes_in_range(3 * (1 << 20))
    ref = sieve_upto(3 * (1 << 20))
    lo = pool.lower
    expect = tuple(int(p) for p in ref[ref >= lo])
    assert pool.primes == expect


def test_bertrand_nonempty_to_1e5():
    counts = np.searchsorted(REFERENCE_ARR, np.arange(2, REFERENCE_LIMIT + 1), side="right") \
        - np.searchsorted(REFERENCE_ARR,
                          (np.arange(2, REFERENCE_LIMIT + 1) + 1) // 2 + 1, side="left")
    assert (counts >= 1).all()


def test_pool_domain():
    with pytest.raises(DomainError):
        primes_in_range(1)


# ---------------------------------------------------------------------------
# sampling


def test_sample_prime_singleton():
    pool = primes_in_range(10)
    for seed in range(5):
        assert sample_prime(pool, SeededRng(seed, 0)) == 7


def test_sample_prime_uniform():
    pool = primes_in_range(20)
    rng = SeededRng(2024, 0)
    draws = [sample_prime(pool, rng) for _ in range(10 ** 5)]
    counts = {p: 0 for p in pool.primes}
    for p in draws:
        counts[p] += 1
    freqs = [c / len(draws) for c in counts.values()]
    assert all(0.24 <= f <= 0.26 for f in freqs)
    expected = len(draws) / len(pool.primes)
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < scipy.stats.chi2.ppf(0.999, df=len(pool.primes) - 1)


def test_sample_generator_forced():
    assert sample_generator(2, 3, SeededRng(7, 1)) == (1, 1, 1)


def test_sample_generator_uniform():
    rng = SeededRng(99, 3)
    draws = [sample_generator(5, 1, rng)[0] for _ in range(10 ** 5)]
    counts = {v: 0 for v in (1, 2, 3, 4)}
    for v in draws:
        counts[v] += 1
    freqs = [c / len(draws) for c in counts.values()]
    assert all(0.24 <= f <= 0.26 for f in freqs)
    expected = len(draws) / 4
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < scipy.stats.chi2.ppf(0.999, df=3)


@given(st.integers(0, 2 ** 64 - 1), st.integers(0, 1000),
       st.integers(2, 10 ** 6), st.integers(1, 8))
def test_sample_generator_range(seed, stream, p, d):
    z = sample_generator(p, d, SeededRng(seed, stream))
    assert len(z) == d
    assert all(1 <= v <= p - 1 for v in z)


def test_sampling_reproducible():
    pool = primes_in_range(500)
    rng1, rng2 = SeededRng(31337, 5), SeededRng(31337, 5)
    a = [sample_prime(pool, rng1) for _ in range(64)]
    b = [sample_prime(pool, rng2) for _ in range(64)]
    assert a == b
    rng3, rng4 = SeededRng(31337, 5), SeededRng(31337, 6)
    assert [rng3.next_u64() for _ in range(16)] != [rng4.next_u64() for _ in range(16)]


def test_stream_prefix_independence():
    seen = {}
    for stream in range(1000):
        rng = SeededRng(123456789, stream)
        prefix = tuple(rng.next_u64() for _ in range(16))
        assert prefix not in seen, f"streams {seen.get(prefix)} and {stream} collide"
        seen[prefix] = stream


@given(st.integers(0, 2 ** 64 - 1), st.integers(0, 2 ** 32), st.integers(1, 10 ** 9))
def test_uniform_index_bounds(seed, stream, size):
    rng = SeededRng(seed, stream)
    v = rng.uniform_index(size)
    assert 0 <= v < size


def test_uniform_index_domain():
    with pytest.raises(DomainError):
        SeededRng(0, 0).uniform_index(0)
