"""Composite Gauss-Legendre quadrature for peaked, oscillatory integrands.

The integrands here look like e(-m alpha) z^{-k} with z = 1/N - 2 pi i alpha:
a peak of width about 1/N at alpha = 0 and up to m oscillations per unit.
Panels are graded geometrically away from the peak, capped in length by the
oscillation scale, and then halved globally until two successive levels agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

#: Successive levels differing by more than this (relative) is a failure.
FAIL_RTOL = 1e-6


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray | complex
    error: float  # |last level - previous level|, max over components
    panels: int
    levels: int


def graded_breaks(lo: float, hi: float, width: float, max_len: float,
                  centre: float = 0.0) -> np.ndarray:
    """Panel boundaries on [lo, hi].

    Inside |x - centre| <= width the panels have length width/8; outside,
    boundaries sit at centre +- width 2^k. Any panel longer than ``max_len``
    is split evenly. ``lo``, ``hi`` and ``centre`` (if inside) are always
    boundaries.
    """
    if not hi > lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    pts = [lo, hi]
    inner = centre + width * np.arange(-8, 9) / 8.0
    pts.extend(inner.tolist())
    span = max(hi - centre, centre - lo)
    k = 1
    while width * 2.0 ** k < span:
        pts.extend([centre - width * 2.0 ** k, centre + width * 2.0 ** k])
        k += 1
    b = np.unique(np.clip(np.asarray(pts, dtype=np.float64), lo, hi))
    out = [b[0]]
    for x0, x1 in zip(b[:-1], b[1:]):
        pieces = max(1, int(np.ceil((x1 - x0) / max_len)))
        out.extend(np.linspace(x0, x1, pieces + 1)[1:].tolist())
    return np.asarray(out)


def _rule(order: int):
    return np.polynomial.legendre.leggauss(order)


def gl_nodes(breaks: np.ndarray, order: int):
    """Nodes and weights of the composite rule on the given panels."""
    x, w = _rule(order)
    a, b = breaks[:-1, None], breaks[1:, None]
    half = (b - a) / 2.0
    nodes = (a + b) / 2.0 + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def _apply(f, breaks, order):
    nodes, weights = gl_nodes(breaks, order)
    # (nodes,) @ (nodes,) or (nodes, K)
    return weights @ np.asarray(f(nodes))


def _halve(breaks: np.ndarray) -> np.ndarray:
    mids = (breaks[:-1] + breaks[1:]) / 2.0
    out = np.empty(2 * breaks.size - 1)
    out[0::2] = breaks
    out[1::2] = mids
    return out


def integrate(f, breaks, order: int = 16, rtol: float = 1e-10, atol: float = 0.0,
              max_levels: int = 6, scale: float | None = None) -> QuadResult:
    """Integrate f over the panels in ``breaks``, halving every panel until stable.

    ``f`` maps a 1-d node array to values of shape (nodes,) or (nodes, K).
    Stops when successive levels differ by at most max(atol, rtol * S), where
    S is ``scale`` or the largest component magnitude. Raises NumericalError
    if after ``max_levels`` halvings the change still exceeds FAIL_RTOL * S.
    """
    breaks = np.asarray(breaks, dtype=np.float64)
    prev = _apply(f, breaks, order)
    diff = np.inf
    for level in range(1, max_levels + 1):
        breaks = _halve(breaks)
        cur = _apply(f, breaks, order)
        diff = float(np.max(np.abs(cur - prev)))
        S = scale if scale is not None else float(np.max(np.abs(cur)))
        if diff <= max(atol, rtol * S):
            return QuadResult(cur, diff, breaks.size - 1, level)
        prev = cur
    S = scale if scale is not None else float(np.max(np.abs(prev)))
    if diff > max(atol, FAIL_RTOL * S):
        raise NumericalError(
            f"quadrature did not converge: last refinement changed the result by {diff:.3e} "
            f"(scale {S:.3e}) after {max_levels} halvings"
        )
    return QuadResult(prev, diff, breaks.size - 1, max_levels)
