"""Sieve tables of arithmetic functions and small number-theoretic primitives.

All logarithms are natural logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels, _pykernels
from .errors import InvalidArgument, ResourceError

#: Above this limit the tables are built segment by segment.
SEGMENT_THRESHOLD = 1 << 24
#: Default memory budget for a SieveTables instance, in bytes.
DEFAULT_MEMORY_BUDGET = 2 << 30
_BYTES_PER_ENTRY = 8 + 8 + 1 + 1 + 8 + 4 + 8  # lambda, lam_p, lam_k, mu, phi, tau, sieve scratch


@dataclass(frozen=True, eq=False)
class SieveTables:
    """Immutable arithmetic tables indexed by n for 0 <= n <= limit.

    Index 0 is a placeholder (all zeros). ``lam_p[n], lam_k[n]`` is the
    prime-power witness ``n = p**k`` when ``lam[n] > 0`` and ``(0, 0)`` otherwise.
    """

    limit: int
    lam: np.ndarray
    lam_p: np.ndarray
    lam_k: np.ndarray
    mu: np.ndarray
    phi: np.ndarray
    tau: np.ndarray
    primes: np.ndarray
    _pp_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def lambda_exact(self, n: int) -> tuple[int, int] | None:
        """Prime-power witness (p, k) with p**k == n, or None when Lambda(n) = 0."""
        p = int(self.lam_p[n])
        return (p, int(self.lam_k[n])) if p else None

    def prime_powers(self, upto: int | None = None) -> np.ndarray:
        """Ascending array of prime powers n <= upto (default: limit)."""
        if "pp" not in self._pp_cache:
            pp = np.nonzero(self.lam_p)[0].astype(np.int64)
            pp.setflags(write=False)
            self._pp_cache["pp"] = pp
        pp = self._pp_cache["pp"]
        if upto is None:
            return pp
        return pp[: np.searchsorted(pp, upto, side="right")]

    def is_prime(self, n: int) -> bool:
        return 2 <= n <= self.limit and self.lam_k[n] == 1


def build_sieve(limit: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> SieveTables:
    """Build Lambda, mu, phi, tau and the prime list for 1 <= n <= limit.

    Uses the compiled linear sieve below ``SEGMENT_THRESHOLD`` and a segmented
    sieve above it.
    """
    limit = int(limit)
    if limit < 2:
        raise InvalidArgument(f"sieve limit must be >= 2, got {limit}")
    need = (limit + 1) * _BYTES_PER_ENTRY
    if need > memory_budget:
        raise ResourceError(
            f"sieve up to {limit} needs ~{need} bytes, budget is {memory_budget}"
        )
    if limit > SEGMENT_THRESHOLD:
        primes, lam_p, lam_k, mu, phi, tau = _pykernels.segmented_sieve(limit, segment=1 << 22)
    else:
        primes, lam_p, lam_k, mu, phi, tau = kernels.linear_sieve(limit)
    lam = np.zeros(limit + 1, dtype=np.float64)
    nz = lam_p > 0
    lam[nz] = np.log(lam_p[nz].astype(np.float64))
    for arr in (lam, lam_p, lam_k, mu, phi, tau, primes):
        arr.setflags(write=False)
    return SieveTables(limit, lam, lam_p, lam_k, mu, phi, tau, primes)


def _is_prime_trial(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0 or n % 3 == 0:
        return n in (2, 3)
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def legendre_symbol(n: int, p: int) -> int:
    """Legendre symbol (n/p) by Euler's criterion.

    >>> legendre_symbol(2, 7), legendre_symbol(3, 7), legendre_symbol(7, 7)
    (1, -1, 0)
    """
    if p % 2 == 0 or not _is_prime_trial(p):
        raise InvalidArgument(f"legendre_symbol needs an odd prime modulus, got {p}")
    r = pow(n % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def is_square(n: int) -> bool:
    """True iff n = m*m for an integer m >= 1 (exact integer square root)."""
    if n < 1:
        return False
    r = math.isqrt(n)
    return r * r == n


def square_flags(N: int) -> np.ndarray:
    """Boolean array f with f[n] = is_square(n) for 0 <= n <= N (f[0] False)."""
    f = np.zeros(N + 1, dtype=bool)
    m = np.arange(1, math.isqrt(N) + 1)
    f[m * m] = True
    return f


def reduced_residues(q: int) -> list[int]:
    """Residues 1 <= a <= q with gcd(a, q) = 1 (a = 1 when q = 1)."""
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
