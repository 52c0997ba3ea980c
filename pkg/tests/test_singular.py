import math

import numpy as np
import pytest

from primesq.errors import InvalidArgument, PreconditionError
from primesq.singular import (
    _truncated_values,
    convergence_check,
    euler_tail_estimate,
    inner_sum_direct,
    inner_sum_fast,
    prime_inner_table,
    singular_euler_range,
    singular_lower_bound_scan,
    singular_series_euler,
    singular_series_truncated,
    singular_truncated_many,
)


def test_euler_squares_and_factor(tables):
    assert singular_series_euler(4, 1000, tables).value == 0.0
    assert singular_series_euler(4, 1000, tables).tail_estimate == 0.0
    v = singular_series_euler(5, 3, tables).value
    assert v == 1.5
    with pytest.raises(InvalidArgument):
        singular_series_euler(5, 2, tables)
    with pytest.raises(PreconditionError):
        singular_series_euler(5, 10**7, tables)


def test_euler_cutoff_stability(tables):
    a = singular_series_euler(2, 100_000, tables)
    b = singular_series_euler(2, 200_000, tables)
    assert a.value > 0 and a.tail_estimate > 0
    assert abs(a.value - b.value) < 10 * a.tail_estimate


def test_euler_hand_product(small_tables):
    n = 17
    ref = 1.0
    for p in (3, 5, 7, 11, 13, 17, 19):
        leg = pow(n, (p - 1) // 2, p)
        leg = -1 if leg == p - 1 else leg
        ref *= 1 - leg / (p - 1)
    assert singular_series_euler(n, 20, small_tables).value == pytest.approx(ref, rel=1e-14)


def test_euler_log_vs_plain(tables):
    log = singular_euler_range(1, 10_001, 10_000, tables, logsum=True)
    plain = singular_euler_range(1, 10_001, 10_000, tables, logsum=False)
    assert np.max(np.abs(log - plain)) < 1e-9
    for n in (2, 5, 97, 398, 9999):
        assert log[n - 1] == pytest.approx(singular_series_euler(n, 10_000, tables).value, abs=1e-12)
    assert log[3] == 0.0 and log[99] == 0.0


def test_tail_estimate():
    assert euler_tail_estimate(1000) > 0
    assert euler_tail_estimate(10**5) < euler_tail_estimate(1000)


@pytest.mark.parametrize("n", [1, 2, 3, 17, 398, 1000])
def test_truncated_trivial(n, tables):
    assert singular_series_truncated(n, 1, tables).value == 1.0
    assert singular_series_truncated(n, 2, tables).value == 1.0
    assert singular_series_truncated(n, 2, tables).tail_estimate == 0.0


def test_truncated_n1_P3(tables):
    assert singular_series_truncated(1, 3, tables).value == pytest.approx(0.5, abs=1e-14)
    assert singular_series_truncated(1, 3, tables, method="direct").value == pytest.approx(0.5, abs=1e-12)


def test_prime_table_matches_gauss_sums():
    for p in (3, 5, 7, 11, 13):
        tab = prime_inner_table(p)
        for r in range(p):
            assert abs(tab[r] - inner_sum_direct(p, r)) < 1e-9


def test_fast_matches_direct(tables):
    n = np.arange(0, 101)
    for q in range(1, 301):
        if tables.mu[q] == 0:
            continue
        fast = inner_sum_fast(q, n, tables)
        if q <= 60 or q in (105, 210, 231, 299):
            direct = np.array([inner_sum_direct(q, int(k)) for k in n])
            assert np.max(np.abs(fast - direct)) < 1e-9
        assert np.max(np.abs(fast)) <= 2 * q


def test_fast_rejects_non_squarefree(tables):
    with pytest.raises(InvalidArgument):
        inner_sum_fast(12, [1], tables)


def test_truncated_real(tables):
    vals = _truncated_values(np.arange(1, 200), 300, tables, "fast")
    assert np.max(np.abs(vals.imag)) < 1e-9
    vals = _truncated_values(np.arange(1, 30), 40, tables, "direct")
    assert np.max(np.abs(vals.imag)) < 1e-9
    fast = singular_truncated_many(np.arange(1, 30), 40, tables)
    assert np.max(np.abs(vals.real - fast)) < 1e-9


def test_convergence_examples(tables):
    rep = convergence_check(2, [10, 100, 1000], 100_000, tables)
    d = [r["discrepancy"] for r in rep.rows]
    assert d[2] < d[0] and rep.monotone_ok
    with pytest.raises(PreconditionError):
        convergence_check(9, [10], 1000, tables)
    five = convergence_check(5, [1000], 100_000, tables)
    assert five.rows[0]["discrepancy"] <= 0.05


def test_lower_bound_scan(tables):
    v4, n4 = singular_lower_bound_scan(10_000, tables)
    assert v4 > 0 and not math.isqrt(n4) ** 2 == n4
    v5, _ = singular_lower_bound_scan(100_000, tables, p_cutoff=10_000)
    assert v5 <= v4
    with pytest.raises(InvalidArgument):
        singular_lower_bound_scan(50, tables)
