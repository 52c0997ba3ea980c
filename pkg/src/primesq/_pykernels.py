"""Pure numpy implementations of the hot loops in _ckernels.

Each function has the same signature and output layout as its compiled twin.
Integer outputs agree exactly; floating outputs agree to a few ulps (numpy
and libm trigonometry differ in the last bit).
"""

import math

import numpy as np

BACKEND = "python"

BLOCK = 1024


def segmented_sieve(limit, segment=1 << 18):
    """(primes, lam_p, lam_k, mu, phi, tau) for 0..limit, one segment at a time.

    Primes up to sqrt(limit) are divided out of each segment; whatever cofactor
    survives is a single prime above sqrt(limit).
    """
    lam_p = np.zeros(limit + 1, dtype=np.int64)
    lam_k = np.zeros(limit + 1, dtype=np.int8)
    mu = np.zeros(limit + 1, dtype=np.int8)
    phi = np.zeros(limit + 1, dtype=np.int64)
    tau = np.zeros(limit + 1, dtype=np.int32)
    if limit >= 1:
        mu[1] = phi[1] = tau[1] = 1

    root = math.isqrt(limit)
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for i in range(2, math.isqrt(root) + 1):
        if small[i]:
            small[i * i::i] = False
    base_primes = np.nonzero(small)[0].astype(np.int64)
    found = []

    for lo in range(2, limit + 1, segment):
        hi = min(lo + segment, limit + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        rem = n.copy()
        s_mu = np.ones(hi - lo, dtype=np.int8)
        s_phi = np.ones(hi - lo, dtype=np.int64)
        s_tau = np.ones(hi - lo, dtype=np.int32)
        omega = np.zeros(hi - lo, dtype=np.int8)
        last_p = np.zeros(hi - lo, dtype=np.int64)
        last_e = np.zeros(hi - lo, dtype=np.int8)
        for p in base_primes:
            p = int(p)
            if p > hi - 1:
                break
            start = (-lo) % p
            idx = np.arange(start, hi - lo, p)
            if idx.size == 0:
                continue
            e = np.zeros(idx.size, dtype=np.int8)
            sub = rem[idx]
            while True:
                div = sub % p == 0
                if not div.any():
                    break
                sub[div] //= p
                e[div] += 1
            rem[idx] = sub
            s_mu[idx] = np.where(e >= 2, 0, -s_mu[idx])
            s_phi[idx] *= (p - 1) * np.power(p, e.astype(np.int64) - 1)
            s_tau[idx] *= (e.astype(np.int32) + 1)
            omega[idx] += 1
            last_p[idx] = p
            last_e[idx] = e
        big = rem > 1
        s_mu[big] = -s_mu[big]
        s_phi[big] *= rem[big] - 1
        s_tau[big] *= 2
        omega[big] += 1
        last_p[big] = rem[big]
        last_e[big] = 1
        mu[lo:hi] = s_mu
        phi[lo:hi] = s_phi
        tau[lo:hi] = s_tau
        pp = omega == 1
        lam_p[lo:hi][pp] = last_p[pp]
        lam_k[lo:hi][pp] = last_e[pp]
        found.append(n[pp & (last_e == 1)])

    primes = np.concatenate(found) if found else np.zeros(0, dtype=np.int64)
    return primes.astype(np.int64), lam_p, lam_k, mu, phi, tau


linear_sieve = segmented_sieve


def _kahan_add(s, c, v):
    y = v - c
    t = s + y
    c = (t - s) - y
    return t, c


def pp_expsum(n_idx, w, a, q, betas):
    n_idx = np.asarray(n_idx, dtype=np.int64)
    w = np.asarray(w, dtype=np.float64)
    betas = np.asarray(betas, dtype=np.float64)
    out = np.zeros(betas.size, dtype=np.complex128)
    if n_idx.size == 0:
        return out
    nhi = int(n_idx[-1]) // BLOCK + 1
    r = np.arange(q)
    rat = np.exp(2j * np.pi * r / q)
    rat_n = rat[(n_idx % q) * (a % q) % q]
    lo_i = n_idx % BLOCK
    hi_i = n_idx // BLOCK
    j_lo = np.arange(BLOCK, dtype=np.float64)
    j_hi = np.arange(nhi, dtype=np.float64) * BLOCK
    for b, beta in enumerate(betas):
        lo = np.exp(2j * np.pi * np.fmod(j_lo * beta, 1.0))
        hi = np.exp(2j * np.pi * np.fmod(j_hi * beta, 1.0))
        terms = w * (lo[lo_i] * hi[hi_i] * rat_n)
        out[b] = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return out


def gauss_row(a, q):
    k = np.arange(1, q + 1, dtype=np.int64)
    ak2 = (a % q) * (k * k % q) % q
    n = np.arange(q, dtype=np.int64)
    idx = (ak2[None, :] + n[:, None] * k[None, :]) % q
    tab = np.exp(2j * np.pi * np.arange(q) / q)
    vals = tab[idx]
    return np.array([complex(math.fsum(row.real), math.fsum(row.imag)) for row in vals])


def _qr_table(p):
    tab = np.full(p, -1, dtype=np.int8)
    tab[0] = 0
    k = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    tab[k * k % p] = 1
    return tab


def _euler(nvals, primes, logsum):
    acc = np.zeros(nvals.size) if logsum else np.ones(nvals.size)
    comp = np.zeros(nvals.size)
    for p in primes:
        p = int(p)
        if p < 3:
            continue
        chi = _qr_table(p)[nvals % p]
        fp = 1.0 - 1.0 / (p - 1)
        fm = 1.0 + 1.0 / (p - 1)
        if logsum:
            v = np.where(chi == 1, math.log(fp), np.where(chi == -1, math.log(fm), 0.0))
            nz = chi != 0
            a2, c2 = _kahan_add(acc[nz], comp[nz], v[nz])
            acc[nz] = a2
            comp[nz] = c2
        else:
            acc *= np.where(chi == 1, fp, np.where(chi == -1, fm, 1.0))
    return np.exp(acc) if logsum else acc


def euler_range(n0, n1, primes, logsum):
    return _euler(np.arange(n0, max(n1, n0), dtype=np.int64), np.asarray(primes), logsum)


def rep_accumulate(N, pp, lam, prime_flag, m_start, m_stop=-1):
    pp = np.asarray(pp, dtype=np.int64)
    lam = np.asarray(lam, dtype=np.float64)
    flag = np.asarray(prime_flag).astype(bool)
    R = np.zeros(N + 1)
    Rc = np.zeros(N + 1)
    r = np.zeros(N + 1)
    rc = np.zeros(N + 1)
    count = np.zeros(N + 1, dtype=np.int64)
    m = m_start
    while m * m + 2 <= N and (m_stop < 0 or m < m_stop):
        s = m * m
        cut = np.searchsorted(pp, N - s, side="right")
        idx = pp[:cut] + s
        R[idx], Rc[idx] = _kahan_add(R[idx], Rc[idx], lam[:cut])
        f = flag[:cut]
        pidx = idx[f]
        r[pidx], rc[pidx] = _kahan_add(r[pidx], rc[pidx], lam[:cut][f])
        count[pidx] += 1
        m += 1
    return R, r, count
