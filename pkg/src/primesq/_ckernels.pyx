# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Every function here has a numpy twin in _pykernels."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, log, fmod, M_PI
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cnp.import_array()

BACKEND = "cython"

DEF BLOCK = 1024


def linear_sieve(long limit):
    """Linear sieve returning (primes, lam_p, lam_k, mu, phi, tau) for 0..limit."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] lam_p = np.zeros(limit + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] lam_k = np.zeros(limit + 1, dtype=np.int8)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] mu = np.zeros(limit + 1, dtype=np.int8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] phi = np.zeros(limit + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] tau = np.zeros(limit + 1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] spf = np.zeros(limit + 1, dtype=np.int32)
    # base[n] = n / p^e with p = spf[n]; expo[n] = e
    cdef cnp.ndarray[cnp.int32_t, ndim=1] base = np.zeros(limit + 1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] expo = np.zeros(limit + 1, dtype=np.int8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] primes = np.empty(max(limit // 2 + 2, 8), dtype=np.int64)
    cdef long n_primes = 0
    cdef long i, j, p, ip
    with nogil:
        if limit >= 1:
            mu[1] = 1
            phi[1] = 1
            tau[1] = 1
            base[1] = 1
        for i in range(2, limit + 1):
            if spf[i] == 0:
                spf[i] = <int>i
                primes[n_primes] = i
                n_primes += 1
                mu[i] = -1
                phi[i] = i - 1
                tau[i] = 2
                expo[i] = 1
                base[i] = 1
            for j in range(n_primes):
                p = primes[j]
                ip = i * p
                if p > spf[i] or ip > limit:
                    break
                spf[ip] = <int>p
                if p == spf[i]:
                    mu[ip] = 0
                    phi[ip] = phi[i] * p
                    expo[ip] = expo[i] + 1
                    base[ip] = base[i]
                    tau[ip] = tau[base[i]] * (expo[ip] + 1)
                else:
                    mu[ip] = -mu[i]
                    phi[ip] = phi[i] * (p - 1)
                    expo[ip] = 1
                    base[ip] = <int>i
                    tau[ip] = tau[i] * 2
        for i in range(2, limit + 1):
            if base[i] == 1:
                lam_p[i] = spf[i]
                lam_k[i] = expo[i]
    return primes[:n_primes].copy(), lam_p, lam_k, mu, phi, tau


cdef inline void _kahan(double *s, double *c, double v) noexcept nogil:
    cdef double y = v - c[0]
    cdef double t = s[0] + y
    c[0] = (t - s[0]) - y
    s[0] = t


def pp_expsum(const cnp.int64_t[::1] n_idx, const double[::1] w, long a, long q,
              const double[::1] betas):
    """Sum_t w[t] e(n_t (a/q + beta)) for each beta, compensated.

    The rational phase uses an exact residue table; e(n beta) is split as
    e((n // BLOCK) BLOCK beta) e((n % BLOCK) beta) with both factors taken
    from directly evaluated tables.
    """
    cdef Py_ssize_t nt = n_idx.shape[0], nb = betas.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(nb, dtype=np.complex128)
    if nt == 0 or nb == 0:
        return out
    cdef long nmax = n_idx[nt - 1]
    cdef long nhi = nmax // BLOCK + 1
    cdef double *rc = <double *>malloc(q * sizeof(double))
    cdef double *rs = <double *>malloc(q * sizeof(double))
    cdef double *lc = <double *>malloc(BLOCK * sizeof(double))
    cdef double *ls = <double *>malloc(BLOCK * sizeof(double))
    cdef double *hc = <double *>malloc(nhi * sizeof(double))
    cdef double *hs = <double *>malloc(nhi * sizeof(double))
    cdef Py_ssize_t b, t
    cdef long j, n, r, am = a % q
    cdef double beta, x, cr, ci, tr, ti, sr, si, cre, cim, pr, pi_
    try:
        with nogil:
            for r in range(q):
                rc[r] = cos(2.0 * M_PI * r / q)
                rs[r] = sin(2.0 * M_PI * r / q)
            for b in range(nb):
                beta = betas[b]
                for j in range(BLOCK):
                    x = 2.0 * M_PI * fmod(j * beta, 1.0)
                    lc[j] = cos(x)
                    ls[j] = sin(x)
                for j in range(nhi):
                    x = 2.0 * M_PI * fmod((<double>(j * BLOCK)) * beta, 1.0)
                    hc[j] = cos(x)
                    hs[j] = sin(x)
                sr = 0.0
                si = 0.0
                cre = 0.0
                cim = 0.0
                for t in range(nt):
                    n = n_idx[t]
                    r = (n % q) * am % q
                    # lo * hi
                    tr = lc[n % BLOCK] * hc[n // BLOCK] - ls[n % BLOCK] * hs[n // BLOCK]
                    ti = lc[n % BLOCK] * hs[n // BLOCK] + ls[n % BLOCK] * hc[n // BLOCK]
                    # * rational
                    pr = tr * rc[r] - ti * rs[r]
                    pi_ = tr * rs[r] + ti * rc[r]
                    _kahan(&sr, &cre, w[t] * pr)
                    _kahan(&si, &cim, w[t] * pi_)
                out[b] = sr + 1j * si
    finally:
        free(rc); free(rs); free(lc); free(ls); free(hc); free(hs)
    return out


def gauss_row(long a, long q):
    """G(a, n; q) for n = 0..q-1 by direct q-term summation with exact residues."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(q, dtype=np.complex128)
    cdef double *tc = <double *>malloc(q * sizeof(double))
    cdef double *ts = <double *>malloc(q * sizeof(double))
    cdef long n, k, idx, d, two_a = (2 * a) % q, am = a % q
    cdef double sr, si, cre, cim
    try:
        with nogil:
            for k in range(q):
                tc[k] = cos(2.0 * M_PI * k / q)
                ts[k] = sin(2.0 * M_PI * k / q)
            for n in range(q):
                # k runs 1..q; idx_k = (a k^2 + n k) mod q, d_k = idx_k - idx_{k-1}
                idx = 0
                d = (am + n) % q
                sr = 0.0
                si = 0.0
                cre = 0.0
                cim = 0.0
                for k in range(q):
                    idx += d
                    if idx >= q:
                        idx -= q
                    d += two_a
                    if d >= q:
                        d -= q
                    _kahan(&sr, &cre, tc[idx])
                    _kahan(&si, &cim, ts[idx])
                out[n] = sr + 1j * si
    finally:
        free(tc); free(ts)
    return out


cdef void _qr_table(long p, signed char *tab) noexcept nogil:
    cdef long k
    memset(tab, -1, p)
    tab[0] = 0
    for k in range(1, (p - 1) // 2 + 1):
        tab[(k * k) % p] = 1


def euler_range(long n0, long n1, const cnp.int64_t[::1] primes, bint logsum):
    """prod over odd p in primes of (1 - (n/p)/(p-1)) for n0 <= n < n1."""
    cdef Py_ssize_t size = max(n1 - n0, 0), i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=1] acc
    cdef cnp.ndarray[cnp.float64_t, ndim=1] comp = np.zeros(size, dtype=np.float64)
    if logsum:
        acc = np.zeros(size, dtype=np.float64)
    else:
        acc = np.ones(size, dtype=np.float64)
    cdef double *a = &acc[0] if size else NULL
    cdef double *c = &comp[0] if size else NULL
    cdef long p, r, pmax = 3
    cdef double fp, fm, lp, lm
    cdef signed char chi
    for j in range(primes.shape[0]):
        if primes[j] > pmax:
            pmax = primes[j]
    cdef signed char *tab = <signed char *>malloc(pmax + 1)
    try:
        with nogil:
            for j in range(primes.shape[0]):
                p = primes[j]
                if p < 3:
                    continue
                _qr_table(p, tab)
                fp = 1.0 - 1.0 / (p - 1)
                fm = 1.0 + 1.0 / (p - 1)
                lp = log(fp)
                lm = log(fm)
                r = n0 % p
                for i in range(size):
                    chi = tab[r]
                    if logsum:
                        if chi == 1:
                            _kahan(&a[i], &c[i], lp)
                        elif chi == -1:
                            _kahan(&a[i], &c[i], lm)
                    else:
                        if chi == 1:
                            a[i] *= fp
                        elif chi == -1:
                            a[i] *= fm
                    r += 1
                    if r == p:
                        r = 0
    finally:
        free(tab)
    if logsum:
        return np.exp(acc)
    return acc


def rep_accumulate(long N, const cnp.int64_t[::1] pp, const double[::1] lam,
                   const cnp.uint8_t[::1] prime_flag, long m_start, long m_stop=-1):
    """R, r, count for n <= N from k + m^2 = n, k in pp, m_start <= m < m_stop.

    m_stop < 0 means no upper bound on m.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] R = np.zeros(N + 1, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] Rc = np.zeros(N + 1, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r = np.zeros(N + 1, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rc = np.zeros(N + 1, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] count = np.zeros(N + 1, dtype=np.int64)
    cdef double *Rp = &R[0]
    cdef double *Rcp = &Rc[0]
    cdef double *rp = &r[0]
    cdef double *rcp = &rc[0]
    cdef Py_ssize_t t, npp = pp.shape[0]
    cdef long m, s, n
    with nogil:
        m = m_start
        while m * m + 2 <= N and (m_stop < 0 or m < m_stop):
            s = m * m
            for t in range(npp):
                n = pp[t] + s
                if n > N:
                    break
                _kahan(&Rp[n], &Rcp[n], lam[t])
                if prime_flag[t]:
                    _kahan(&rp[n], &rcp[n], lam[t])
                    count[n] += 1
            m += 1
    return R, r, count
