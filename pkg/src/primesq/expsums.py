"""Damped generating functions and their local approximants.

    S(alpha) = sum_n Lambda(n) exp(-n/N) e(n alpha)
    W(alpha) = sum_{n>=1} exp(-n^2/N) e(n^2 alpha)
    Theta(alpha) = sum_{n in Z} exp(-n^2/N) e(n^2 alpha) = 2 W(alpha) + 1

with e(x) = exp(2 pi i x) and z = 1/N - 2 pi i alpha. Square roots and powers
of z use the principal branch. Evaluations near a rational a/q take the pair
(a/q, beta) so the rational phase stays exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .arith import SieveTables
from .errors import InvalidArgument, PreconditionError
from .farey import ArcSet, Major, classify, classify_many
from .gauss import gauss_quadratic

SQRT_PI_HALF = math.sqrt(math.pi) / 2.0


@dataclass(frozen=True)
class GenParams:
    """Damping scale N and absolute truncation tolerance eps."""

    N: int
    eps: float = 1e-10

    def __post_init__(self):
        if self.N < 2:
            raise InvalidArgument(f"N must be >= 2, got {self.N}")
        if not 0.0 < self.eps <= 1e-6:
            raise InvalidArgument(f"eps must lie in (0, 1e-6], got {self.eps}")


@dataclass(frozen=True)
class ZValue:
    alpha: float
    z: complex

    @classmethod
    def from_alpha(cls, alpha: float, N: int) -> "ZValue":
        if not -0.5 < alpha <= 0.5:
            raise InvalidArgument(f"alpha must lie in (-1/2, 1/2], got {alpha}")
        return cls(alpha, complex(1.0 / N, -2.0 * math.pi * alpha))


def z_of(beta, N: int):
    """z = 1/N - 2 pi i beta (scalar or array)."""
    return 1.0 / N - 2j * np.pi * np.asarray(beta, dtype=np.float64)


# ---------------------------------------------------------------- horizons


def s_horizon(N: int, eps: float) -> int:
    """Truncation point M for S so the neglected tail is below eps.

    Uses Lambda(n) <= ln n and, for M >= N,
    sum_{n>M} ln(n) e^{-n/N} <= e^{-M/N} N (ln M + 1),
    so M = ceil(N ln(N (ln M + 1) / eps)) solved by fixed-point iteration.
    Returns 0 when eps exceeds the bound for the whole series.
    """
    if eps >= N * (math.log(N) + 1.0) * math.e:
        return 0
    M = N
    for _ in range(50):
        nxt = max(N, math.ceil(N * math.log(N * (math.log(M) + 1.0) / eps)))
        if nxt == M:
            break
        M = nxt
    return M


def w_horizon(N: int, eps: float) -> int:
    """Smallest M >= ceil(sqrt(N ln(1/eps))) + 1 whose Gaussian tail is below eps.

    sum_{n>M} e^{-n^2/N} <= e^{-(M+1)^2/N} (1 + N / (2(M+1))).
    """
    M = math.ceil(math.sqrt(N * math.log(1.0 / eps))) + 1
    while math.exp(-((M + 1) ** 2) / N) * (1.0 + N / (2.0 * (M + 1))) >= eps:
        M += 1
    return M


# ---------------------------------------------------------------- S and W


def _s_weights(params: GenParams, tables: SieveTables, horizon: int | None = None):
    M = s_horizon(params.N, params.eps) if horizon is None else horizon
    if M > tables.limit:
        raise PreconditionError(
            f"S truncation at N={params.N}, eps={params.eps:g} needs sieve limit >= {M}, "
            f"have {tables.limit}"
        )
    pp = tables.prime_powers(M)
    w = tables.lam[pp] * np.exp(-pp / params.N)
    return pp, w


def s_tilde_arc(a: int, q: int, betas, params: GenParams, tables: SieveTables,
                horizon: int | None = None) -> np.ndarray:
    """S(a/q + beta) for each beta."""
    pp, w = _s_weights(params, tables, horizon)
    betas = np.ascontiguousarray(np.atleast_1d(betas), dtype=np.float64)
    return kernels.pp_expsum(pp, w, int(a), int(q), betas)


def s_tilde(alpha: float, params: GenParams, tables: SieveTables) -> complex:
    """S(alpha) truncated so the neglected tail is below params.eps."""
    if abs(alpha) > 0.5:
        raise InvalidArgument(f"|alpha| must be <= 1/2, got {alpha}")
    return complex(s_tilde_arc(0, 1, [alpha], params, tables)[0])


def w_tilde_arc(a: int, q: int, betas, params: GenParams, horizon: int | None = None) -> np.ndarray:
    """W(a/q + beta) for each beta; the a n^2 / q phase is reduced in integers."""
    M = w_horizon(params.N, params.eps) if horizon is None else horizon
    n = np.arange(1, M + 1, dtype=np.int64)
    n2 = n * n
    rat = np.exp(2j * np.pi * ((a % q) * (n2 % q) % q) / q)
    damp = np.exp(-n2 / params.N) * rat
    betas = np.atleast_1d(np.asarray(betas, dtype=np.float64))
    out = np.empty(betas.size, dtype=np.complex128)
    n2f = n2.astype(np.float64)
    for i, b in enumerate(betas):
        terms = damp * np.exp(2j * np.pi * np.fmod(n2f * b, 1.0))
        out[i] = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return out


def w_tilde(alpha: float, params: GenParams) -> complex:
    if abs(alpha) > 0.5:
        raise InvalidArgument(f"|alpha| must be <= 1/2, got {alpha}")
    return complex(w_tilde_arc(0, 1, [alpha], params)[0])


def theta_full(alpha: float, params: GenParams) -> complex:
    """Theta(alpha) over all integers n, i.e. 2 W(alpha) + 1."""
    return 2.0 * w_tilde(alpha, params) + 1.0


# ---------------------------------------------------------------- Jacobi


def _theta_shifted(alpha: float, z: complex, tol_exp: float = 40.0) -> complex:
    # sum_n exp(-pi (n + alpha)^2 z)
    K = math.ceil(math.sqrt(tol_exp / (math.pi * z.real)) + abs(alpha)) + 2
    n = np.arange(-K, K + 1, dtype=np.float64)
    t = np.exp(-np.pi * (n + alpha) ** 2 * z)
    return complex(math.fsum(t.real), math.fsum(t.imag))


def _theta_dual(alpha: float, z: complex, tol_exp: float = 40.0) -> complex:
    # z^{-1/2} sum_n exp(-pi n^2 / z - 2 pi i n alpha)
    w = 1.0 / z
    K = math.ceil(math.sqrt(tol_exp / (math.pi * w.real))) + 2
    n = np.arange(-K, K + 1, dtype=np.float64)
    t = np.exp(-np.pi * n * n * w - 2j * np.pi * np.fmod(n * alpha, 1.0))
    return complex(math.fsum(t.real), math.fsum(t.imag)) / cmath.sqrt(z)


def jacobi_sides(alpha: float, z: complex) -> tuple[complex, complex]:
    """Both sides of the Jacobi transformation formula at (alpha, z)."""
    z = complex(z)
    if z.real <= 0:
        raise InvalidArgument(f"Re z must be > 0, got {z}")
    return _theta_shifted(alpha, z), _theta_dual(alpha, z)


def jacobi_transform_residual(alpha: float, z: complex) -> float:
    lhs, rhs = jacobi_sides(alpha, z)
    return abs(lhs - rhs)


# ---------------------------------------------------------------- theta lemma


@lru_cache(maxsize=4096)
def _gauss_cached(a: int, q: int) -> complex:
    return gauss_quadratic(a, q)


def theta_main_term(a: int, q: int, betas, N: int) -> np.ndarray:
    """(sqrt(pi)/2) (G(a,q)/q) z^{-1/2} with z = 1/N - 2 pi i beta."""
    return SQRT_PI_HALF * _gauss_cached(a, q) / q / np.sqrt(z_of(betas, N))


def theta_approx_error(a: int, q: int, alpha: float, params: GenParams) -> tuple[float, float]:
    """(|W(a/q+alpha) - main term|, q^{1/2} + q^{1/2} N^{1/2} |alpha|^{1/2})."""
    if math.gcd(a, q) != 1:
        raise InvalidArgument(f"gcd(a, q) must be 1, got a={a}, q={q}")
    if abs(alpha) > 0.5:
        raise InvalidArgument(f"|alpha| must be <= 1/2, got {alpha}")
    measured, scale = theta_approx_errors(a, q, [alpha], params)
    return float(measured[0]), float(scale[0])


def theta_approx_errors(a: int, q: int, alphas, params: GenParams):
    alphas = np.atleast_1d(np.asarray(alphas, dtype=np.float64))
    w = w_tilde_arc(a, q, alphas, params)
    measured = np.abs(w - theta_main_term(a, q, alphas, params.N))
    sq = math.sqrt(q)
    scale = sq + sq * math.sqrt(params.N) * np.sqrt(np.abs(alphas))
    return measured, scale


# ---------------------------------------------------------------- approximants


def approximant_T(alpha: float, arcs: ArcSet, tables: SieveTables) -> complex:
    """mu(q)/phi(q) / (1/N - 2 pi i (alpha - a/q)) on xi_{a,q}; 0 on the minor arcs."""
    c = classify(alpha, arcs)
    if not isinstance(c, Major):
        return 0j
    mu = int(tables.mu[c.q])
    if mu == 0:
        return 0j
    beta = arcs.reduce(alpha) - c.a / c.q
    return mu / int(tables.phi[c.q]) / complex(z_of(beta, arcs.N))


def approximant_U(alpha: float, arcs: ArcSet) -> complex:
    """(sqrt(pi)/2) G(a,q)/q (1/N - 2 pi i (alpha - a/q))^{-1/2} on xi_{a,q}; else 0."""
    c = classify(alpha, arcs)
    if not isinstance(c, Major):
        return 0j
    beta = arcs.reduce(alpha) - c.a / c.q
    return complex(theta_main_term(c.a, c.q, beta, arcs.N))


# ---------------------------------------------------------------- grid scans


def jacobi_grid(points: int = 100) -> list[tuple[float, complex]]:
    """(alpha, z) pairs: alpha_j = j / (2 (points - 1)) on [0, 1/2], with z cycling
    through 0.1, 0.5, 1, 2 and 1/(pi N) - 2 i alpha for N = 10, 100."""
    out = []
    for j in range(points):
        alpha = j / (2.0 * (points - 1))
        k = j % 6
        if k < 4:
            z = complex((0.1, 0.5, 1.0, 2.0)[k])
        else:
            N = (10, 100)[k - 4]
            z = complex(1.0 / (math.pi * N), -2.0 * alpha)
        out.append((alpha, z))
    return out


def jacobi_scan(points: int = 100) -> list[dict]:
    rows = []
    for alpha, z in jacobi_grid(points):
        rows.append({"alpha": alpha, "z_re": z.real, "z_im": z.imag,
                     "residual": jacobi_transform_residual(alpha, z)})
    return rows


def theta_scan(q_max: int, Ns, samples: int = 9, eps: float = 1e-10) -> list[dict]:
    """Worst measured/bound_scale per (N, q) over coprime a and |alpha| <= 1/(qQ).

    ``samples`` points are spread evenly over [-1/(qQ), 1/(qQ)] for every a.
    """
    if samples < 1:
        raise InvalidArgument(f"samples must be >= 1, got {samples}")
    rows = []
    for N in Ns:
        params = GenParams(int(N), eps)
        Q = math.sqrt(N * math.log(N))
        for q in range(1, q_max + 1):
            h = 1.0 / (q * Q)
            alphas = np.linspace(-h, h, samples) if samples > 1 else np.zeros(1)
            best = None
            for a in range(1, q + 1):
                if math.gcd(a, q) != 1:
                    continue
                measured, scale = theta_approx_errors(a, q, alphas, params)
                ratio = measured / scale
                i = int(np.argmax(ratio))
                if best is None or ratio[i] > best["ratio"]:
                    best = {"N": int(N), "q": q, "a": a, "alpha": float(alphas[i]),
                            "measured": float(measured[i]), "bound_scale": float(scale[i]),
                            "ratio": float(ratio[i])}
            rows.append(best)
    return rows


def minor_arc_scan(arcs: ArcSet, samples: int = 2000, eps: float = 1e-10) -> dict:
    """max |W(alpha)|^2 / Q over evenly spaced minor-arc points of I.

    Empirical companion of the bound W(alpha)^2 << Q on the minor arcs; no
    uniform constant is certified.
    """
    params = GenParams(arcs.N, eps)
    grid = 1.0 / arcs.Q + (np.arange(samples) + 0.5) / samples
    idx, x = classify_many(grid, arcs)
    pts = x[idx < 0]
    if pts.size == 0:
        return {"N": arcs.N, "points": 0, "max_ratio": 0.0, "alpha": float("nan")}
    # W is 1-periodic; evaluate at the representative in (-1/2, 1/2]
    centred = pts - np.round(pts)
    w = w_tilde_arc(0, 1, centred, params)
    ratio = np.abs(w) ** 2 / arcs.Q
    i = int(np.argmax(ratio))
    return {"N": arcs.N, "points": int(pts.size), "max_ratio": float(ratio[i]),
            "alpha": float(pts[i])}
