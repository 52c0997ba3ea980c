"""Time the compiled kernels against the numpy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row reports the best wall time per backend and the speedup; outputs of
the two backends are compared before timing.
"""

import argparse
import timeit

import numpy as np

from primesq import build_sieve
from primesq._backend import get_kernels


def _cases(quick: bool):
    N = 1 << (14 if quick else 17)
    t = build_sieve(4 * N)
    pp = t.prime_powers(N)
    lam = np.ascontiguousarray(t.lam[pp])
    flag = np.ascontiguousarray((t.lam_k[pp] == 1).astype(np.uint8))
    spp = t.prime_powers(4 * N)
    w = t.lam[spp] * np.exp(-spp / N)
    betas = np.linspace(-1e-3, 1e-3, 64 if quick else 256)
    odd = np.ascontiguousarray(t.primes[(t.primes > 2) & (t.primes <= 10_000)])
    q = 211 if quick else 997
    return {
        "linear_sieve": lambda k: k.linear_sieve(4 * N),
        "rep_accumulate": lambda k: k.rep_accumulate(N, pp, lam, flag, 1, -1),
        "pp_expsum": lambda k: k.pp_expsum(spp, w, 3, 7, betas),
        "gauss_row": lambda k: [k.gauss_row(a, q) for a in range(1, 33)],
        "euler_range": lambda k: k.euler_range(1, N + 1, odd, True),
    }


def _same(x, y) -> bool:
    if isinstance(x, (list, tuple)):
        return all(_same(a, b) for a, b in zip(x, y))
    return np.allclose(np.asarray(x), np.asarray(y), rtol=1e-9, atol=1e-9)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args()

    py = get_kernels("python")
    try:
        cy = get_kernels("cython")
    except ImportError:
        cy = None
        print("compiled extension not available; timing the fallback only")

    print(f"{'kernel':<16}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, fn in _cases(args.quick).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        if cy is None:
            print(f"{name:<16}{t_py:>12.4f}{'-':>12}{'-':>10}")
            continue
        if not _same(fn(py), fn(cy)):
            raise SystemExit(f"{name}: backends disagree")
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat))
        print(f"{name:<16}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>10.1f}")


if __name__ == "__main__":
    main()
