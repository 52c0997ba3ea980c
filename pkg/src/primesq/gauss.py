"""Generalized quadratic Gauss sums G(a, n; q) = sum_{k=1}^{q} e((a k^2 + n k) / q)."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .arith import reduced_residues
from .errors import InvalidArgument

#: Relative slack for |G|^2 comparisons; |G|^2 is an integer up to rounding.
ABS2_TOL = 1e-9


@dataclass(frozen=True)
class GaussSum:
    a: int
    n: int
    q: int
    value: complex

    @property
    def abs2(self) -> float:
        return abs(self.value) ** 2


def gauss_sum(a: int, n: int, q: int) -> GaussSum:
    """Direct q-term evaluation; each phase is reduced mod q in integers first."""
    if q < 1:
        raise InvalidArgument(f"q must be >= 1, got {q}")
    if math.gcd(a, q) != 1:
        raise InvalidArgument(f"gcd(a, q) must be 1, got a={a}, q={q}")
    k = np.arange(1, q + 1, dtype=np.int64)
    r = ((a % q) * (k * k % q) + (n % q) * k) % q
    ang = 2.0 * np.pi * r / q
    value = complex(math.fsum(np.cos(ang)), math.fsum(np.sin(ang)))
    return GaussSum(a, n, q, value)


def gauss_quadratic(a: int, q: int) -> complex:
    """G(a, q) = G(a, 0; q)."""
    return gauss_sum(a, 0, q).value


def gauss_product(a: int, q1: int, q2: int) -> complex:
    """G(a, q1 q2) via the twisted product G(a q2, q1) G(a q1, q2), gcd(q1, q2) = 1."""
    if math.gcd(q1, q2) != 1:
        raise InvalidArgument(f"moduli must be coprime, got {q1}, {q2}")
    return gauss_quadratic(a * q2 % q1 or q1, q1) * gauss_quadratic(a * q1 % q2 or q2, q2)


@dataclass
class GaussReport:
    """Outcome of the exhaustive |G(a,n;q)|^2 <= 2q check.

    ``worst`` holds, per q, the triple with the largest |G|^2 as a row
    ``{q, a, n, re, im, abs2}``; ``violations`` uses the same row shape.
    """

    q_max: int
    checked: int = 0
    violations: list[dict] = field(default_factory=list)
    exact_value_failures: list[dict] = field(default_factory=list)
    worst: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.exact_value_failures

    def to_json(self) -> dict:
        return {
            "q_max": self.q_max,
            "checked": self.checked,
            "violations": self.violations,
            "exact_value_failures": self.exact_value_failures,
            "extra_check": "|G(a,0;q)| in {0, sqrt(q), sqrt(2q)}",
            "rows": self.worst,
        }


def _row(q, a, n, v):
    return {"q": q, "a": a, "n": n, "re": v.real, "im": v.imag, "abs2": abs(v) ** 2}


def _check_modulus(q):
    checked = 0
    violations, exact_fail = [], []
    best = None
    allowed = (0.0, float(q), 2.0 * float(q))
    for a in reduced_residues(q):
        row = kernels.gauss_row(a, q)
        abs2 = row.real ** 2 + row.imag ** 2
        checked += q
        bad = np.nonzero(abs2 > 2 * q * (1 + ABS2_TOL))[0]
        violations.extend(_row(q, a, int(n), row[n]) for n in bad)
        if min(abs(abs2[0] - t) for t in allowed) > ABS2_TOL * q:
            exact_fail.append(_row(q, a, 0, row[0]))
        n_max = int(np.argmax(abs2))
        if best is None or abs2[n_max] > best["abs2"]:
            best = _row(q, a, n_max, row[n_max])
    return checked, violations, exact_fail, best


def verify_gauss_bound(q_max: int, threads: int = 1) -> GaussReport:
    """Check |G(a,n;q)|^2 <= 2q for every q <= q_max, gcd(a,q)=1, 0 <= n < q.

    Also checks the classical values |G(a,0;q)| in {0, sqrt q, sqrt 2q}. An
    empty report is returned for q_max < 2.
    """
    report = GaussReport(q_max)
    if q_max < 2:
        return report
    qs = range(1, q_max + 1)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(_check_modulus, qs))
    for checked, viol, exact, best in results:
        report.checked += checked
        report.violations.extend(viol)
        report.exact_value_failures.extend(exact)
        report.worst.append(best)
    return report
