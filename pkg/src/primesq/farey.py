"""Farey dissection of the modified unit interval I = (1/Q, 1 + 1/Q].

For N >= 4 the arcs xi_{a,q} = (a/q - 1/(qQ), a/q + 1/(qQ)], q <= P, are the
major arcs; their complement in I is the minor arcs. Q = sqrt(N ln N), P = N/Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, InvalidArgument


@dataclass(frozen=True)
class Major:
    a: int
    q: int


@dataclass(frozen=True)
class Minor:
    pass


MINOR = Minor()


def farey_fractions(order: int):
    """Yield (a, q) for the Farey fractions 0 < a/q <= 1 with q <= order, ascending."""
    a, b, c, d = 0, 1, 1, order
    while c <= order:
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        yield a, b


@dataclass(frozen=True, eq=False)
class ArcSet:
    """Major arcs for a given N, sorted by centre a/q.

    ``lo``/``hi`` are floating endpoints; the disjointness checks use the
    integer cross-determinant of neighbouring centres.
    """

    N: int
    Q: float
    P: float
    a: np.ndarray
    q: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    @property
    def arcs(self) -> list[tuple[int, int, float, float]]:
        return [
            (int(a), int(q), float(lo), float(hi))
            for a, q, lo, hi in zip(self.a, self.q, self.lo, self.hi)
        ]

    @property
    def q_max(self) -> int:
        return int(math.floor(self.P))

    def __len__(self) -> int:
        return int(self.a.size)

    def major_measure(self) -> float:
        return float(np.sum(2.0 / (self.q * self.Q)))

    def reduce(self, alpha: float) -> float:
        """Translate alpha by an integer into I = (1/Q, 1 + 1/Q]."""
        return alpha - math.ceil(alpha - 1.0 - 1.0 / self.Q)

    def extended_arcs_disjoint(self) -> bool:
        """Whether the closed arcs [a/q - 1/(4qP), a/q + 1/(4qP)] are pairwise disjoint."""
        q = np.concatenate(([1], self.q))
        a = np.concatenate(([0], self.a))
        det = a[1:] * q[:-1] - a[:-1] * q[1:]
        # |a/q - a'/q'| = det / (q q') against 1/(4qP) + 1/(4q'P)
        return bool(np.all(det * 4.0 * self.P > q[1:] + q[:-1]))


def farey_dissection(N: int) -> ArcSet:
    """All arcs xi_{a,q} with q <= P; raises ConsistencyError if any overlap."""
    if N < 2:
        raise InvalidArgument(f"N must be >= 2, got {N}")
    Q = math.sqrt(N * math.log(N))
    P = N / Q
    order = int(math.floor(P))
    if order < 1:
        raise ConsistencyError(f"N={N}: P={P:.3f} < 1 leaves no major arcs")
    pairs = np.array(list(farey_fractions(order)), dtype=np.int64)
    a, q = pairs[:, 0], pairs[:, 1]
    centre = a / q
    half = 1.0 / (q * Q)
    lo, hi = centre - half, centre + half

    # neighbours including the wrap-around from 1/1 (seen from 0/1)
    qq = np.concatenate(([1], q))
    aa = np.concatenate(([0], a))
    det = aa[1:] * qq[:-1] - aa[:-1] * qq[1:]
    if np.any(det < 1):
        i = int(np.argmin(det))
        raise ConsistencyError(f"Farey order violated between {aa[i]}/{qq[i]} and {aa[i+1]}/{qq[i+1]}")
    # hi_i <= lo_{i+1}  <=>  det * Q >= q + q'
    gap = det * Q - (qq[1:] + qq[:-1])
    if np.any(gap < 0):
        i = int(np.argmin(gap))
        raise ConsistencyError(
            f"N={N}: arcs around {aa[i]}/{qq[i]} and {aa[i+1]}/{qq[i+1]} overlap (Q={Q:.4f})"
        )
    if lo[0] < 1.0 / Q:
        raise ConsistencyError(f"N={N}: arc {a[0]}/{q[0]} leaves I=(1/Q, 1+1/Q]")
    for arr in (a, q, lo, hi):
        arr.setflags(write=False)
    return ArcSet(N, Q, P, a, q, lo, hi)


def classify(alpha: float, arcs: ArcSet) -> Major | Minor:
    """Major(a, q) if alpha (mod 1) lies in xi_{a,q}, otherwise MINOR."""
    x = arcs.reduce(alpha)
    i = int(np.searchsorted(arcs.lo, x, side="left")) - 1
    if i >= 0 and x <= arcs.hi[i]:
        return Major(int(arcs.a[i]), int(arcs.q[i]))
    return MINOR


def classify_many(alphas, arcs: ArcSet):
    """Vectorised classify: (index into arcs or -1, reduced alphas)."""
    x = np.asarray(alphas, dtype=np.float64)
    x = x - np.ceil(x - 1.0 - 1.0 / arcs.Q)
    i = np.searchsorted(arcs.lo, x, side="left") - 1
    ok = (i >= 0) & (x <= arcs.hi[np.maximum(i, 0)])
    return np.where(ok, i, -1), x
