import numpy as np
import pytest

from primesq.errors import NumericalError
from primesq.quad import gl_nodes, graded_breaks, integrate


def test_polynomial_exact():
    breaks = np.array([-1.0, 0.0, 2.0])
    res = integrate(lambda x: x ** 31 + 3 * x ** 2, breaks, order=16)
    assert res.value == pytest.approx((2.0 ** 32 - 1) / 32 + 9.0, rel=1e-13)


def test_vector_valued():
    breaks = graded_breaks(0.0, 1.0, 0.1, 0.05)
    res = integrate(lambda x: np.stack([np.sin(x), np.cos(x)], axis=1), breaks)
    assert res.value == pytest.approx([1 - np.cos(1.0), np.sin(1.0)], rel=1e-12)


def test_peaked_integrand():
    N = 1000.0
    breaks = graded_breaks(-0.5, 0.5, 1.0 / N, 0.01)
    res = integrate(lambda x: 1.0 / (1.0 + (N * x) ** 2), breaks, rtol=1e-12)
    assert res.value == pytest.approx(2.0 * np.arctan(N / 2.0) / N, rel=1e-11)


def test_nonconvergence_raises():
    with pytest.raises(NumericalError):
        integrate(lambda x: np.sin(1e5 * x), np.array([0.0, 1.0]), order=4, max_levels=2)


def test_graded_breaks():
    b = graded_breaks(-0.5, 0.5, 0.01, 0.1)
    assert b[0] == -0.5 and b[-1] == 0.5 and 0.0 in b
    assert np.all(np.diff(b) > 0) and np.max(np.diff(b)) <= 0.1 + 1e-15
    inner = np.diff(b[np.abs(b) <= 0.01])
    assert np.allclose(inner, 0.01 / 8)
    with pytest.raises(ValueError):
        graded_breaks(1.0, 1.0, 0.1, 0.1)


def test_gl_nodes_weights():
    nodes, weights = gl_nodes(np.array([0.0, 1.0, 3.0]), 5)
    assert nodes.size == 10 and weights.sum() == pytest.approx(3.0)
    assert np.all((nodes > 0) & (nodes < 3))
