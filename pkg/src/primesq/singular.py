"""Singular series for n = p + m^2.

Two independent evaluators are kept side by side:

* the Euler product prod_{2<p<=c} (1 - (n/p)/(p-1)), zero at squares;
* the Gauss-sum truncation
  S(n, P) = sum_{q<=P} mu(q)/(q phi(q)) sum*_{a mod q} G(a,q) e(-an/q).

The inner sum c_q(n) = sum*_a G(a,q) e(-an/q) is multiplicative in squarefree
q; the fast path builds it from prime-level tables, the direct path sums it
as written. Each path is the other's oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .arith import SieveTables, is_square, reduced_residues, square_flags
from .errors import ConsistencyError, InvalidArgument, PreconditionError
from .gauss import gauss_quadratic

IMAG_TOL = 1e-6


@dataclass(frozen=True)
class SingularValue:
    n: int
    value: float
    mode: str  # "euler" or "truncated"
    parameter: float  # p_cutoff or P
    tail_estimate: float

    def row(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "parameter": self.parameter,
            "value": self.value,
            "tail_estimate": self.tail_estimate,
        }


# ---------------------------------------------------------------- Euler product


def _odd_primes_upto(tables: SieveTables, cutoff: int) -> np.ndarray:
    pr = tables.primes[: np.searchsorted(tables.primes, cutoff, side="right")]
    return np.ascontiguousarray(pr[pr > 2])


def euler_tail_estimate(p_cutoff: int, tables: SieveTables | None = None) -> float:
    """Heuristic size of the neglected factors: exp(sum_{c<p<=2c} 1/(p-1)) - 1.

    Exact prime sum when the tables reach 2c, Mertens' approximation
    ln(ln 2c / ln c) otherwise. Not a certified bound.
    """
    c = p_cutoff
    if tables is not None and tables.limit >= 2 * c:
        pr = tables.primes
        sel = pr[(pr > c) & (pr <= 2 * c)].astype(np.float64)
        s = math.fsum(1.0 / (sel - 1.0))
    else:
        s = math.log(math.log(2 * c) / math.log(c))
    return math.expm1(s)


def singular_series_euler(n: int, p_cutoff: int, tables: SieveTables,
                          logsum: bool = True) -> SingularValue:
    """Euler product over odd primes p <= p_cutoff; exactly 0 for squares.

    ``logsum`` accumulates the logarithms of the factors with compensation;
    otherwise the factors are multiplied directly.
    """
    if p_cutoff < 3:
        raise InvalidArgument(f"p_cutoff must be >= 3, got {p_cutoff}")
    if p_cutoff > tables.limit:
        raise PreconditionError(f"p_cutoff {p_cutoff} exceeds sieve limit {tables.limit}")
    tail = euler_tail_estimate(p_cutoff, tables)
    if is_square(n):
        return SingularValue(n, 0.0, "euler", p_cutoff, 0.0)
    primes = _odd_primes_upto(tables, p_cutoff)
    # Euler's criterion per prime; p | n gives the factor 1
    chi = np.array([pow(n % p, (p - 1) // 2, p) for p in primes.tolist()], dtype=np.int64)
    chi[chi == primes - 1] = -1
    fac = 1.0 - chi / (primes - 1.0)
    if logsum:
        value = math.exp(math.fsum(np.log(fac[chi != 0])))
    else:
        value = 1.0
        for f in fac:
            value *= f
    return SingularValue(n, float(value), "euler", p_cutoff, tail)


def singular_euler_range(n0: int, n1: int, p_cutoff: int, tables: SieveTables,
                         logsum: bool = True) -> np.ndarray:
    """Euler-product values for n0 <= n < n1 (squares set to 0)."""
    if p_cutoff < 3:
        raise InvalidArgument(f"p_cutoff must be >= 3, got {p_cutoff}")
    if p_cutoff > tables.limit:
        raise PreconditionError(f"p_cutoff {p_cutoff} exceeds sieve limit {tables.limit}")
    vals = kernels.euler_range(int(n0), int(n1), _odd_primes_upto(tables, p_cutoff), logsum)
    sq = square_flags(max(n1 - 1, 0))[n0:n1]
    vals[sq] = 0.0
    return vals


# ---------------------------------------------------------------- Gauss-sum truncation


@lru_cache(maxsize=None)
def prime_inner_table(p: int) -> np.ndarray:
    """c_p(r) for r = 0..p-1 and p prime.

    Expanding G(a,p) and summing over a != 0 first gives, by orthogonality,
    c_p(r) = p (#{k mod p : k^2 = r} - 1), an exact integer.
    """
    k = np.arange(p, dtype=np.int64)
    roots = np.bincount(k * k % p, minlength=p)
    return (p * (roots - 1)).astype(np.complex128)


def inner_sum_direct(q: int, n: int) -> complex:
    """sum*_{a mod q} G(a,q) e(-an/q) summed as written."""
    total_re, total_im = [], []
    for a in reduced_residues(q):
        v = gauss_quadratic(a, q) * np.exp(-2j * np.pi * ((a * n) % q) / q)
        total_re.append(v.real)
        total_im.append(v.imag)
    return complex(math.fsum(total_re), math.fsum(total_im))


def _prime_factors(q: int) -> list[int]:
    out, p = [], 2
    while p * p <= q:
        if q % p == 0:
            out.append(p)
            while q % p == 0:
                q //= p
        p += 1
    if q > 1:
        out.append(q)
    return out


def inner_sum_fast(q: int, nvals, tables: SieveTables) -> np.ndarray:
    """Multiplicative evaluation of c_q(n) for squarefree q and an array of n."""
    nvals = np.asarray(nvals, dtype=np.int64)
    if tables.mu[q] == 0:
        raise InvalidArgument(f"fast inner sum needs squarefree q, got {q}")
    out = np.ones(nvals.shape, dtype=np.complex128)
    for p in _prime_factors(q):
        out *= prime_inner_table(p)[nvals % p]
    return out


def _truncated_values(nvals, P: float, tables: SieveTables, method: str) -> np.ndarray:
    qmax = int(math.floor(P))
    if qmax > tables.limit:
        raise PreconditionError(f"truncation P={P} exceeds sieve limit {tables.limit}")
    nvals = np.atleast_1d(np.asarray(nvals, dtype=np.int64))
    re_terms = [[] for _ in range(nvals.size)]
    im_terms = [[] for _ in range(nvals.size)]
    for q in range(1, qmax + 1):
        mu = int(tables.mu[q])
        if mu == 0:
            continue
        if method == "fast":
            c = inner_sum_fast(q, nvals, tables)
        else:
            c = np.array([inner_sum_direct(q, int(n)) for n in nvals])
        t = c * (mu / (q * int(tables.phi[q])))
        for i in range(nvals.size):
            re_terms[i].append(t[i].real)
            im_terms[i].append(t[i].imag)
    vals = np.array([complex(math.fsum(r), math.fsum(m)) for r, m in zip(re_terms, im_terms)])
    worst = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    if worst > IMAG_TOL:
        raise ConsistencyError(f"truncated singular series has imaginary part {worst:.3e}")
    return vals


def singular_series_truncated(n: int, P: float, tables: SieveTables,
                              method: str = "fast") -> SingularValue:
    """S(n, P); ``method`` is "fast" (multiplicative) or "direct" (double sum)."""
    if P < 1:
        raise InvalidArgument(f"P must be >= 1, got {P}")
    v = _truncated_values([n], P, tables, method)[0]
    return SingularValue(int(n), float(v.real), "truncated", P, 0.0)


def singular_truncated_many(nvals, P: float, tables: SieveTables,
                            method: str = "fast") -> np.ndarray:
    """Real parts of S(n, P) for each n (imaginary parts checked, then dropped)."""
    if P < 1:
        raise InvalidArgument(f"P must be >= 1, got {P}")
    return _truncated_values(nvals, P, tables, method).real


# ---------------------------------------------------------------- diagnostics


@dataclass
class ConvergenceReport:
    n: int
    p_cutoff: int
    euler: float
    rows: list[dict]
    monotone_ok: bool


def convergence_check(n: int, P_list, p_cutoff: int, tables: SieveTables) -> ConvergenceReport:
    """|S(n,P) - S_euler(n)| for each P; flags growth beyond a factor 2 after the first entry."""
    if is_square(n):
        raise PreconditionError(f"convergence check needs a non-square n, got {n}")
    euler = singular_series_euler(n, p_cutoff, tables).value
    rows = []
    for P in P_list:
        t = singular_series_truncated(n, P, tables).value
        rows.append({"n": n, "P": P, "truncated": t, "euler": euler, "discrepancy": abs(t - euler)})
    d = [r["discrepancy"] for r in rows]
    ok = all(d[i] <= 2.0 * d[i - 1] for i in range(1, len(d)))
    return ConvergenceReport(n, p_cutoff, euler, rows, ok)


def singular_lower_bound_scan(limit: int, tables: SieveTables,
                              p_cutoff: int | None = None) -> tuple[float, int]:
    """min over non-square 100 <= n <= limit of S_euler(n) (ln ln n)^2 and its argmin."""
    if limit < 100:
        raise InvalidArgument(f"scan limit must be >= 100, got {limit}")
    c = min(tables.limit, 10_000) if p_cutoff is None else p_cutoff
    vals = singular_euler_range(100, limit + 1, c, tables)
    n = np.arange(100, limit + 1)
    scaled = vals * np.log(np.log(n)) ** 2
    scaled[square_flags(limit)[100:]] = np.inf
    i = int(np.argmin(scaled))
    value = float(scaled[i])
    if not value > 0:
        raise ConsistencyError(f"non-positive singular series at n={int(n[i])}")
    return value, int(n[i])
