import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primesq.arith import (
    build_sieve,
    is_square,
    legendre_symbol,
    reduced_residues,
    square_flags,
)
from primesq.errors import InvalidArgument, ResourceError


_SMALL = build_sieve(5000)


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def test_small_lookups(small_tables):
    t = small_tables
    assert t.lam[8] == pytest.approx(math.log(2), abs=1e-15)
    assert t.lambda_exact(8) == (2, 3)
    assert t.lambda_exact(12) is None
    assert t.mu[6] == 1 and t.mu[4] == 0 and t.mu[30] == -1
    assert t.phi[12] == 4
    assert t.tau[12] == 6


def test_invalid_and_budget():
    with pytest.raises(InvalidArgument):
        build_sieve(1)
    with pytest.raises(ResourceError):
        build_sieve(10**6, memory_budget=1000)


def test_tables_read_only(small_tables):
    with pytest.raises(ValueError):
        small_tables.lam[3] = 0.0


def test_divisor_sum_identities(small_tables):
    t = small_tables
    for n in range(1, 1500):
        ds = _divisors(n)
        assert sum(int(t.mu[d]) for d in ds) == (1 if n == 1 else 0)
        assert sum(int(t.phi[d]) for d in ds) == n
        assert t.tau[n] == len(ds)


def test_chebyshev_identity(tables):
    # sum_{d | n} Lambda(d) = log n
    for n in range(1, 10_001):
        s = math.fsum(float(tables.lam[d]) for d in range(1, math.isqrt(n) + 1) if n % d == 0)
        s += math.fsum(float(tables.lam[n // d]) for d in range(1, math.isqrt(n) + 1)
                       if n % d == 0 and d * d != n)
        assert abs(s - math.log(n)) < 1e-9


def test_lambda_witness(small_tables):
    t = small_tables
    for n in range(2, t.limit + 1):
        w = t.lambda_exact(n)
        if t.lam[n] > 0:
            p, k = w
            assert p ** k == n
            assert t.lam[n] == pytest.approx(math.log(p), rel=1e-15)
        else:
            assert w is None


def test_primes_complete(small_tables):
    expected = [n for n in range(2, 5001) if all(n % d for d in range(2, math.isqrt(n) + 1))]
    assert small_tables.primes.tolist() == expected
    assert small_tables.prime_powers(30).tolist() == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5000), st.integers(1, 5000))
def test_multiplicativity(a, b):
    t = _SMALL
    if math.gcd(a, b) != 1 or a * b > t.limit:
        return
    assert t.mu[a * b] == t.mu[a] * t.mu[b]
    assert t.phi[a * b] == t.phi[a] * t.phi[b]
    assert t.tau[a * b] == t.tau[a] * t.tau[b]


def test_segmented_matches_linear():
    from primesq._pykernels import segmented_sieve
    lin = build_sieve(200_000)
    seg = segmented_sieve(200_000, segment=1 << 12)
    names = ("primes", "lam_p", "lam_k", "mu", "phi", "tau")
    for name, arr in zip(names, seg):
        assert np.array_equal(getattr(lin, name), arr), name


def test_legendre_examples():
    assert legendre_symbol(7, 7) == 0
    assert legendre_symbol(2, 7) == 1
    assert legendre_symbol(3, 7) == -1
    for bad in (2, 9, 1, 15):
        with pytest.raises(InvalidArgument):
            legendre_symbol(3, bad)


def test_legendre_exhaustive():
    for p in [p for p in range(3, 98) if all(p % d for d in range(2, p))]:
        residues = {k * k % p for k in range(1, p)}
        for n in range(p):
            expected = 0 if n == 0 else (1 if n in residues else -1)
            assert legendre_symbol(n, p) == expected
            assert legendre_symbol(n + 5 * p, p) == expected


def test_is_square():
    assert is_square(1) and not is_square(2) and is_square(1048576)
    assert not is_square(0) and not is_square(-4)
    big = (10**20 + 39) ** 2
    assert is_square(big) and not is_square(big + 1)
    f = square_flags(100)
    assert np.nonzero(f)[0].tolist() == [k * k for k in range(1, 11)]


def test_reduced_residues():
    assert reduced_residues(1) == [1]
    assert reduced_residues(12) == [1, 5, 7, 11]
