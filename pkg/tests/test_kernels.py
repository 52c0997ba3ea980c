"""The compiled kernels and the numpy fallback must agree."""

import math

import numpy as np
import pytest

from primesq._backend import BACKEND, get_kernels
from primesq.arith import build_sieve

py = get_kernels("python")
try:
    cy = get_kernels("cython")
except ImportError:  # pragma: no cover - extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled extension not built")


def test_backend_names():
    assert py.BACKEND == "python"
    assert BACKEND in ("python", "cython")
    with pytest.raises(ValueError):
        get_kernels("fortran")


@needs_ext
def test_sieve_identical():
    for limit in (2, 3, 10, 997, 65536):
        a, b = cy.linear_sieve(limit), py.linear_sieve(limit)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)


@needs_ext
def test_pp_expsum_agree():
    t = build_sieve(20000)
    pp = t.prime_powers(20000)
    w = t.lam[pp] * np.exp(-pp / 3000.0)
    betas = np.linspace(-0.01, 0.01, 17)
    for a, q in ((0, 1), (1, 2), (2, 7), (5, 12)):
        x = cy.pp_expsum(pp, w, a, q, betas)
        y = py.pp_expsum(pp, w, a, q, betas)
        assert np.max(np.abs(x - y)) < 1e-10


def test_pp_expsum_direct():
    t = build_sieve(3000)
    pp = t.prime_powers(3000)
    w = t.lam[pp] * np.exp(-pp / 500.0)
    beta = 0.0123
    expected = sum(wi * np.exp(2j * np.pi * (n * (3 / 7 + beta))) for n, wi in zip(pp, w))
    for k in filter(None, (py, cy)):
        assert abs(k.pp_expsum(pp, w, 3, 7, np.array([beta]))[0] - expected) < 1e-9


@needs_ext
def test_gauss_row_agree():
    for q in (1, 2, 3, 4, 12, 97, 128):
        for a in (1, q - 1 if q > 1 else 1):
            if math.gcd(a, q) == 1:
                assert np.max(np.abs(cy.gauss_row(a, q) - py.gauss_row(a, q))) < 1e-10


@needs_ext
def test_euler_range_agree():
    t = build_sieve(5000)
    pr = np.ascontiguousarray(t.primes[t.primes > 2])
    for logsum in (True, False):
        x = cy.euler_range(1, 3000, pr, logsum)
        y = py.euler_range(1, 3000, pr, logsum)
        assert np.max(np.abs(x - y) / np.maximum(1.0, np.abs(y))) < 1e-12


@needs_ext
def test_rep_accumulate_identical():
    t = build_sieve(20000)
    pp = t.prime_powers(20000)
    lam = np.ascontiguousarray(t.lam[pp])
    flag = np.ascontiguousarray((t.lam_k[pp] == 1).astype(np.uint8))
    for args in ((1, -1), (0, -1), (3, 40)):
        x = cy.rep_accumulate(20000, pp, lam, flag, *args)
        y = py.rep_accumulate(20000, pp, lam, flag, *args)
        for u, v in zip(x, y):
            assert np.array_equal(u, v)
