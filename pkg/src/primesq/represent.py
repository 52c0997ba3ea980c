"""Representation counts for n = k + m^2 and the exceptional set.

R(n) = sum_{k + m^2 = n} Lambda(k) and r(n) = sum_{p + m^2 = n} log p, with
m >= 1 unless ``include_m0`` is set.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .arith import SieveTables, is_square, square_flags
from .errors import InvalidArgument, PreconditionError


@dataclass(frozen=True, eq=False)
class RepTable:
    N: int
    R: np.ndarray
    r: np.ndarray
    count: np.ndarray
    square_flag: np.ndarray

    def exceptional_flags(self) -> np.ndarray:
        """n >= 1, not a square, and no representation p + m^2."""
        flags = (self.count == 0) & ~self.square_flag
        flags[0] = False
        return flags

    def rows(self):
        exc = self.exceptional_flags()
        for n in range(1, self.N + 1):
            yield {
                "n": n,
                "R": float(self.R[n]),
                "r": float(self.r[n]),
                "count": int(self.count[n]),
                "is_square": bool(self.square_flag[n]),
                "is_exceptional": bool(exc[n]),
            }


#: Fixed number of m-chunks; independent of the thread count so the merge
#: order, and hence every output bit, is the same for any --threads.
REP_CHUNKS = 8


def _m_bounds(N: int, m_start: int) -> list[tuple[int, int]]:
    m_end = math.isqrt(max(N - 2, 0)) + 1
    if m_end <= m_start:
        return []
    edges = np.linspace(m_start, m_end, REP_CHUNKS + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def rep_all(N: int, tables: SieveTables, include_m0: bool = False, threads: int = 1) -> RepTable:
    """R, r and the unweighted prime count for every n <= N.

    Each worker takes a fixed m-range and, for each m in it, the prime powers
    k <= N - m^2, accumulating with compensation. Worker arrays are merged in
    m order.
    """
    if N < 1:
        raise InvalidArgument(f"N must be >= 1, got {N}")
    if tables.limit < N:
        raise PreconditionError(f"rep_all({N}) needs sieve limit >= {N}, have {tables.limit}")
    pp = tables.prime_powers(N)
    lam = np.ascontiguousarray(tables.lam[pp])
    flag = np.ascontiguousarray((tables.lam_k[pp] == 1).astype(np.uint8))

    def work(bounds):
        return kernels.rep_accumulate(int(N), pp, lam, flag, bounds[0], bounds[1])

    chunks = _m_bounds(N, 0 if include_m0 else 1)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(work, chunks))
    R, r, count = np.zeros(N + 1), np.zeros(N + 1), np.zeros(N + 1, dtype=np.int64)
    for pR, pr, pc in parts:
        R += pR
        r += pr
        count += pc
    for arr in (R, r, count):
        arr.setflags(write=False)
    return RepTable(N, R, r, count, square_flags(N))


@dataclass
class ExceptionalReport:
    limit: int
    exceptional: list[int]
    counts: dict[int, int]

    def count_rows(self):
        return [{"x": x, "E": e} for x, e in self.counts.items()]


def default_checkpoints(limit: int) -> list[int]:
    """Powers of two up to limit, then limit itself."""
    pts = [1 << k for k in range(2, limit.bit_length()) if 1 << k <= limit]
    if not pts or pts[-1] != limit:
        pts.append(limit)
    return pts


def exceptional_set(limit: int, checkpoints, tables: SieveTables,
                    include_m0: bool = False, threads: int = 1) -> ExceptionalReport:
    """Every n <= limit that is neither a square nor p + m^2, and E(x) at checkpoints."""
    table = rep_all(limit, tables, include_m0=include_m0, threads=threads)
    exc = np.nonzero(table.exceptional_flags())[0]
    if checkpoints is None:
        checkpoints = default_checkpoints(limit)
    counts = {int(x): int(np.searchsorted(exc, x, side="right")) for x in sorted(checkpoints)}
    return ExceptionalReport(limit, [int(n) for n in exc], counts)


def two_square_count(n: int) -> int:
    """Ordered pairs (m1, m2), both >= 1, with m1^2 + m2^2 = n."""
    total = 0
    m1 = 1
    while 2 * m1 * m1 <= n or m1 * m1 < n:
        rest = n - m1 * m1
        if rest < 1:
            break
        if is_square(rest):
            total += 1
        m1 += 1
    return total


def jacobi_divisor_sum(n: int) -> int:
    """sum over odd d | n of (-1)^((d-1)/2)."""
    total = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            for e in {d, n // d}:
                if e % 2:
                    total += 1 if e % 4 == 1 else -1
    return total


@dataclass(frozen=True)
class PrimePowerCorrection:
    N: int
    S: float
    S_direct: float
    ratio: float  # S / (N^{7/6} ln N)


def prime_power_direct(N: int, tables: SieveTables) -> np.ndarray:
    """sum_{p^k + m^2 = n, k >= 2} log p for n <= N, by an explicit loop."""
    out = np.zeros(N + 1)
    pp = tables.prime_powers(N)
    higher = pp[tables.lam_k[pp] >= 2]
    for k in higher.tolist():
        lp = float(tables.lam[k])
        m = 1
        while k + m * m <= N:
            out[k + m * m] += lp
            m += 1
    return out


def prime_power_correction(N: int, tables: SieveTables, table: RepTable | None = None) -> PrimePowerCorrection:
    """S = sum_{n<=N} (R(n) - r(n))^2, computed from the table and by a direct loop."""
    if table is None or table.N < N:
        table = rep_all(N, tables)
    diff = table.R[1 : N + 1] - table.r[1 : N + 1]
    S = math.fsum(diff * diff)
    direct = prime_power_direct(N, tables)[1:]
    S_direct = math.fsum(direct * direct)
    return PrimePowerCorrection(N, S, S_direct, S / (N ** (7 / 6) * math.log(N)))
