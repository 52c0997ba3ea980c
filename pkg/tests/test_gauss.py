import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primesq.errors import InvalidArgument
from primesq.gauss import gauss_product, gauss_quadratic, gauss_sum, verify_gauss_bound


@pytest.mark.parametrize(
    "a,n,q,expected",
    [
        (1, 0, 3, 1j * math.sqrt(3)),
        (1, 0, 2, 0),
        (1, 0, 4, 2 + 2j),
        (1, 1, 3, 1.5 - 1j * math.sqrt(3) / 2),
        (1, 0, 1, 1),
    ],
)
def test_known_values(a, n, q, expected):
    assert abs(gauss_sum(a, n, q).value - expected) < 1e-12


def test_gcd_rejected():
    with pytest.raises(InvalidArgument):
        gauss_sum(2, 0, 4)
    with pytest.raises(InvalidArgument):
        gauss_sum(1, 0, 0)


def test_direct_definition():
    # literal definition with floating angles, for moderate q
    for q in (5, 8, 9, 21):
        for a in (1, 2, q - 1):
            if math.gcd(a, q) != 1:
                continue
            for n in (0, 1, q - 2):
                ref = sum(cmath.exp(2j * math.pi * (a * k * k + n * k) / q) for k in range(1, q + 1))
                assert abs(gauss_sum(a, n, q).value - ref) < 1e-10


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 400), st.integers(0, 10_000), st.integers(1, 10_000))
def test_bound_and_integrality(q, n, a):
    if math.gcd(a, q) != 1:
        return
    g = gauss_sum(a, n, q)
    assert g.abs2 <= 2 * q * (1 + 1e-9)
    assert abs(g.abs2 - round(g.abs2)) < 1e-9 * q


def test_conjugation():
    for q in range(2, 60):
        for a in range(1, q):
            if math.gcd(a, q) == 1:
                assert abs(gauss_quadratic(q - a, q) - gauss_quadratic(a, q).conjugate()) < 1e-12


def test_twisted_multiplicativity():
    for q1 in range(1, 301):
        for q2 in range(1, 301 // q1 + 1):
            if q1 * q2 > 300 or math.gcd(q1, q2) != 1:
                continue
            direct = gauss_quadratic(1, q1 * q2)
            assert abs(gauss_product(1, q1, q2) - direct) < 1e-9
            assert abs(abs(direct) - abs(gauss_quadratic(q2 % q1 or q1, q1))
                       * abs(gauss_quadratic(q1 % q2 or q2, q2))) < 1e-9


def test_verify_report():
    rep = verify_gauss_bound(50, threads=3)
    assert rep.ok and rep.violations == []
    assert len(rep.worst) == 50
    row = rep.to_json()["rows"][1]
    assert set(row) == {"q", "a", "n", "re", "im", "abs2"}
    assert rep.worst[1]["q"] == 2
    assert verify_gauss_bound(1).checked == 0


def test_zero_branch_exercised():
    assert abs(gauss_sum(1, 0, 2).value) < 1e-15
    assert abs(gauss_sum(5, 0, 6).value) < 1e-12  # q = 2 mod 4
