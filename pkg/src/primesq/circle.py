"""Circle-method diagnostics for n = p + m^2.

Fourier reconstruction of R(n) from S W, the Hankel integral, the major-arc
coefficients of T U and their extension errors, the mean-square check of
the S approximation near rationals, and the headline mean-square statistic

    sum_{n <= N} (R(n) - S(n) sqrt(n))^2   against   (N ln N)^{3/2}.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .arith import SieveTables, reduced_residues
from .errors import InvalidArgument, PreconditionError
from .expsums import SQRT_PI_HALF, GenParams, _s_weights, w_horizon, w_tilde_arc, z_of
from .farey import MINOR, ArcSet, Major, Minor, classify, classify_many, farey_dissection
from .gauss import gauss_quadratic
from .quad import QuadResult, graded_breaks, integrate
from .represent import RepTable, rep_all
from .singular import inner_sum_fast, singular_euler_range, singular_truncated_many

__all__ = [
    "ArcSet", "Major", "Minor", "MINOR", "classify", "classify_many", "farey_dissection",
    "parseval_reconstruct", "default_dft_length", "hankel_integral", "hankel_main_term",
    "HANKEL_BOUNDARY_C", "hankel_batch", "v_main_term", "VTerm", "tu_coefficient",
    "TUCoefficient", "major_integral_direct", "extension_errors", "ExtensionReport", "LPResult",
    "lp_mean_square_check", "lp_batch", "MeanSquareStat", "mean_square_statistic",
    "mean_square_dyadic", "loglog_slope",
]

#: Leading O(1/n) term of the Hankel integral on [-1/2, 1/2]: integrating by
#: parts, the endpoint contribution is |(-pi i)^{-3/2} - (pi i)^{-3/2}| / (2 pi n).
HANKEL_BOUNDARY_C = math.sqrt(2.0) / (2.0 * math.pi ** 2.5)

_QUAD_ORDER = 16
_M_CHUNK = 64


# ---------------------------------------------------------------- Parseval / DFT


def default_dft_length(N: int) -> int:
    """Smallest power of two >= 4 N ceil(ln 10)."""
    target = 4 * N * math.ceil(math.log(10.0))
    return 1 << (target - 1).bit_length()


def parseval_reconstruct(N: int, M: int | None, tables: SieveTables, eps: float = 1e-10,
                         sampler: str = "fft") -> np.ndarray:
    """Recover R(n), n = 0..N, from M samples of S(j/M) W(j/M).

    The product's n-th Fourier coefficient is e^{-n/N} R(n); a length-M DFT
    of the samples returns it up to aliasing from n + M, which carries the
    factor e^{-M/N}. ``sampler="fft"`` obtains the samples from the folded
    coefficient sequences; ``"direct"`` evaluates S and W at each j/M.
    """
    if N < 2:
        raise InvalidArgument(f"N must be >= 2, got {N}")
    M = default_dft_length(N) if M is None else int(M)
    if M < 4 * N:
        raise PreconditionError(f"DFT length M={M} is below the required 4N = {4 * N}")
    params = GenParams(N, eps)
    pp, w = _s_weights(params, tables)
    if sampler == "fft":
        s_coef = np.bincount(pp % M, weights=w, minlength=M)
        n = np.arange(1, w_horizon(N, eps) + 1, dtype=np.int64)
        w_coef = np.bincount(n * n % M, weights=np.exp(-(n * n) / N), minlength=M)
        samples = (M * np.fft.ifft(s_coef)) * (M * np.fft.ifft(w_coef))
    elif sampler == "direct":
        betas = np.arange(M, dtype=np.float64) / M
        samples = kernels.pp_expsum(pp, w, 0, 1, betas) * w_tilde_arc(0, 1, betas, params)
    else:
        raise InvalidArgument(f"unknown sampler {sampler!r}")
    coef = np.fft.fft(samples)[: N + 1].real / M
    return coef * np.exp(np.arange(N + 1) / N)


# ---------------------------------------------------------------- Hankel integral


def hankel_main_term(n, N: int):
    """e^{-n/N} 2 sqrt(n) / Gamma(1/2)."""
    n = np.asarray(n, dtype=np.float64)
    return np.exp(-n / N) * 2.0 * np.sqrt(n) / math.sqrt(math.pi)


def _zpow_integrand(mvals, N: int):
    mvals = np.atleast_1d(np.asarray(mvals, dtype=np.int64))

    def f(alpha):
        # phases reduced mod 1 before scaling by 2 pi
        ph = np.exp(-2j * np.pi * np.fmod(np.outer(alpha, mvals), 1.0))
        return ph * (z_of(alpha, N) ** -1.5)[:, None]

    return f


def _zpow_integral(mvals, N: int, lo: float, hi: float) -> QuadResult:
    """int_lo^hi e(-m alpha) z^{-3/2} d alpha for each m (batched)."""
    mvals = np.atleast_1d(mvals)
    mmax = max(int(np.max(mvals)), 4)
    width = min(1.0 / N, (hi - lo) / 2.0)
    breaks = graded_breaks(lo, hi, width, 1.0 / mmax)
    # N^{3/2} is the peak height, a natural absolute scale
    return integrate(_zpow_integrand(mvals, N), breaks, _QUAD_ORDER, rtol=1e-11,
                     scale=max(1.0, float(N) ** 1.5 * (hi - lo)))


def hankel_integral(n: int, N: int, quad_points: int = _QUAD_ORDER) -> complex:
    """int_{-1/2}^{1/2} e(-n alpha) z^{-3/2} d alpha by graded composite quadrature.

    ``quad_points`` is the Gauss-Legendre order per panel. Raises
    NumericalError if successive refinements disagree beyond 1e-6 relative.
    """
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    if N < 1 or quad_points < 2:
        raise InvalidArgument(f"need N >= 1 and quad_points >= 2, got {N}, {quad_points}")
    breaks = graded_breaks(-0.5, 0.5, 1.0 / N, 1.0 / max(n, 4))
    res = integrate(_zpow_integrand([n], N), breaks, quad_points, rtol=1e-12)
    return complex(res.value[0])


def hankel_batch(mvals, N: int, threads: int = 1) -> np.ndarray:
    """hankel_integral for many m, evaluated in fixed chunks."""
    mvals = np.asarray(mvals, dtype=np.int64)
    chunks = [mvals[i : i + _M_CHUNK] for i in range(0, mvals.size, _M_CHUNK)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda c: _zpow_integral(c, N, -0.5, 0.5).value, chunks))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.complex128)


# ---------------------------------------------------------------- V(m, P) and T U


@dataclass(frozen=True)
class VTerm:
    m: int
    P: float
    N: int
    singular: float  # S(m, P)
    product: float  # e^{-m/N} sqrt(m) S(m, P)
    quadrature: float  # (sqrt(pi)/2) S(m, P) int e(-m alpha) z^{-3/2}


def v_main_term(m: int, P: float, N: int, tables: SieveTables) -> VTerm:
    """V(m, P) in product form and in quadrature form."""
    if not 1 <= m <= N:
        raise InvalidArgument(f"need 1 <= m <= N, got m={m}, N={N}")
    sing = float(singular_truncated_many([m], P, tables)[0])
    product = math.exp(-m / N) * math.sqrt(m) * sing
    quad = SQRT_PI_HALF * sing * hankel_integral(m, N).real
    return VTerm(m, P, N, sing, product, quad)


@dataclass(frozen=True)
class TUCoefficient:
    m: int
    N: int
    major_integral: float  # int over the major arcs of T U e(-m alpha)
    coefficient: float  # major_integral / e^{-m/N}
    V: float  # V(m, P), quadrature form
    r_m: float  # V(m, P) - major_integral

    def row(self) -> dict:
        return {"m": self.m, "V": self.V, "r_m": self.r_m}


def _arc_terms(arcs: ArcSet, tables: SieveTables, mvals: np.ndarray):
    """Per squarefree q <= P: (q, weight mu/(q phi), c_q(m) for each m)."""
    out = []
    for q in range(1, arcs.q_max + 1):
        mu = int(tables.mu[q])
        if mu == 0:
            continue
        c = inner_sum_fast(q, mvals, tables).real
        out.append((q, mu / (q * int(tables.phi[q])), c))
    return out


def _major_and_v(mvals, arcs: ArcSet, tables: SieveTables, threads: int = 1):
    mvals = np.atleast_1d(np.asarray(mvals, dtype=np.int64))
    if mvals.size and (mvals.min() < 1 or mvals.max() > arcs.N):
        raise InvalidArgument(f"m must lie in [1, N={arcs.N}]")
    N, Q = arcs.N, arcs.Q
    terms = _arc_terms(arcs, tables, mvals)
    H = hankel_batch(mvals, N, threads).real

    def one_q(term):
        q, wgt, c = term
        h = 1.0 / (q * Q)
        J = np.concatenate([
            _zpow_integral(mvals[i : i + _M_CHUNK], N, -h, h).value.real
            for i in range(0, mvals.size, _M_CHUNK)
        ])
        return wgt * c * J, wgt * c

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(one_q, terms))
    major = SQRT_PI_HALF * np.sum([p[0] for p in parts], axis=0)
    sing = np.sum([p[1] for p in parts], axis=0)
    V = SQRT_PI_HALF * sing * H
    return major, V


def tu_coefficient(m: int, arcs: ArcSet, tables: SieveTables) -> TUCoefficient:
    """Fourier coefficient of T U restricted to the major arcs, and r_m.

    The integral over xi_{a,q} is e(-am/q) G(a,q) times a q-only integral, so
    the sum over a collapses to c_q(m).
    """
    major, V = _major_and_v([m], arcs, tables)
    mj, v = float(major[0]), float(V[0])
    return TUCoefficient(int(m), arcs.N, mj, mj * math.exp(m / arcs.N), v, v - mj)


def major_integral_direct(m: int, arcs: ArcSet, tables: SieveTables) -> complex:
    """int over the major arcs of T(alpha) U(alpha) e(-m alpha), arc by arc.

    Independent of the c_q collapse: every arc (a, q) is integrated with
    its own G(a, q) and exact phase e(-am/q). Cost grows with the arc count.
    """
    N = arcs.N
    total_re, total_im = [], []
    for a, q, lo, hi in arcs.arcs:
        mu = int(tables.mu[q])
        if mu == 0:
            continue
        h = (hi - lo) / 2.0
        res = _zpow_integral([m], N, -h, h).value[0]
        v = (SQRT_PI_HALF * mu / (q * int(tables.phi[q])) * gauss_quadratic(a, q)
             * np.exp(-2j * np.pi * ((a * m) % q) / q) * res)
        total_re.append(v.real)
        total_im.append(v.imag)
    return complex(math.fsum(total_re), math.fsum(total_im))


@dataclass
class ExtensionReport:
    N: int
    m: np.ndarray
    V: np.ndarray
    r_m: np.ndarray
    sum_sq: float
    normalizer: float  # (N ln N)^{3/2}

    @property
    def ratio(self) -> float:
        return self.sum_sq / self.normalizer

    def rows(self):
        for m, v, r in zip(self.m.tolist(), self.V.tolist(), self.r_m.tolist()):
            yield {"m": m, "V": v, "r_m": r}


def extension_errors(N: int, tables: SieveTables, threads: int = 1) -> ExtensionReport:
    """r_m for every m <= N and sum_m r_m^2 against (N ln N)^{3/2}."""
    arcs = farey_dissection(N)
    m = np.arange(1, N + 1, dtype=np.int64)
    major, V = _major_and_v(m, arcs, tables, threads)
    r = V - major
    return ExtensionReport(N, m, V, r, math.fsum(r * r), (N * math.log(N)) ** 1.5)


# ---------------------------------------------------------------- Lemma LP check


@dataclass(frozen=True)
class LPResult:
    q: int
    xi: float
    N: int
    lhs: float
    normalizer: float  # q N xi (ln N)^2

    @property
    def ratio(self) -> float:
        return self.lhs / self.normalizer

    def row(self) -> dict:
        return {"q": self.q, "xi": self.xi, "N": self.N, "lhs": self.lhs,
                "normalizer": self.normalizer}


def lp_mean_square_check(q: int, xi: float, N: int, tables: SieveTables,
                         eps: float = 1e-10) -> LPResult:
    """sum*_a int_{-xi}^{xi} |S(a/q + alpha) - mu(q)/phi(q) / z|^2 d alpha."""
    if not 1 <= q <= N:
        raise InvalidArgument(f"need 1 <= q <= N, got q={q}, N={N}")
    if not 0.0 < xi <= 0.5:
        raise InvalidArgument(f"xi must lie in (0, 1/2], got {xi}")
    params = GenParams(N, eps)
    pp, w = _s_weights(params, tables)
    approx = int(tables.mu[q]) / int(tables.phi[q])
    breaks = graded_breaks(-xi, xi, min(1.0 / N, xi), 1.0 / (2.0 * N))
    total = []
    for a in reduced_residues(q):
        def f(alpha, a=a):
            s = kernels.pp_expsum(pp, w, a, q, np.ascontiguousarray(alpha))
            d = s - approx / z_of(alpha, N)
            return d.real ** 2 + d.imag ** 2
        total.append(float(integrate(f, breaks, _QUAD_ORDER, rtol=1e-9).value))
    lhs = math.fsum(total)
    return LPResult(q, xi, N, lhs, q * N * xi * math.log(N) ** 2)


def lp_batch(qs, Ns, tables: SieveTables, xi_times_N: float = 1.0,
             threads: int = 1) -> list[LPResult]:
    """lp_mean_square_check over a (q, N) grid with xi = xi_times_N / N."""
    grid = [(q, N) for N in Ns for q in qs]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(lambda t: lp_mean_square_check(t[0], xi_times_N / t[1], t[1], tables),
                             grid))


# ---------------------------------------------------------------- headline statistic


@dataclass(frozen=True)
class MeanSquareStat:
    N: int
    sum_sq: float
    normalizer: float
    ratio: float

    def row(self) -> dict:
        return {"N": self.N, "sum_sq": self.sum_sq, "normalizer": self.normalizer,
                "ratio": self.ratio}


def _residual_squares(N: int, tables: SieveTables, sing_cutoff: int,
                      rep: RepTable | None, threads: int) -> np.ndarray:
    if rep is None or rep.N < N:
        rep = rep_all(N, tables, threads=threads)
    sing = np.zeros(N + 1)
    sing[1:] = singular_euler_range(1, N + 1, sing_cutoff, tables)
    n = np.arange(N + 1, dtype=np.float64)
    d = rep.R[: N + 1] - sing * np.sqrt(n)
    d[0] = 0.0
    return d * d


def _stat(N: int, sq: np.ndarray) -> MeanSquareStat:
    s = math.fsum(sq[1 : N + 1])
    norm = (N * math.log(N)) ** 1.5
    return MeanSquareStat(N, s, norm, s / norm)


def mean_square_statistic(N: int, tables: SieveTables, sing_cutoff: int,
                          rep: RepTable | None = None, threads: int = 1) -> MeanSquareStat:
    """sum_{n <= N} (R(n) - S(n) sqrt(n))^2 with S from the Euler product."""
    if N < 2:
        raise InvalidArgument(f"N must be >= 2, got {N}")
    return _stat(N, _residual_squares(N, tables, sing_cutoff, rep, threads))


def mean_square_dyadic(n_max: int, tables: SieveTables, sing_cutoff: int,
                       n_min: int = 4096, threads: int = 1) -> list[MeanSquareStat]:
    """The statistic at every power of two in [n_min, n_max] from one table pass."""
    if n_min < 2 or n_max < n_min:
        raise InvalidArgument(f"need 2 <= n_min <= n_max, got {n_min}, {n_max}")
    sq = _residual_squares(n_max, tables, sing_cutoff, None, threads)
    out, N = [], 1 << (n_min - 1).bit_length()
    while N <= n_max:
        out.append(_stat(N, sq))
        N <<= 1
    return out


def loglog_slope(stats, n_min: int = 1 << 14) -> float:
    """Least-squares slope of ln(sum_sq) against ln N over entries with N >= n_min."""
    pts = [(math.log(s.N), math.log(s.sum_sq)) for s in stats if s.N >= n_min]
    if len(pts) < 2:
        raise InvalidArgument("slope fit needs at least two points")
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])
