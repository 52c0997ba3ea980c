"""Command-line driver: one subcommand per experiment, CSV/JSON output, run manifests.

Configuration precedence: built-in defaults < ``--config`` file < flags. The
config file holds UTF-8 ``key=value`` lines with ``#`` comments; a run
manifest (JSON) is accepted too, so ``--config out.csv.manifest.json``
repeats a run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidArgument, PrimesqError

OUTPUT_DIR_ENV = "PRIMESQ_OUTPUT_DIR"

SUBCOMMANDS = (
    "sieve", "gauss-verify", "singular", "singular-converge", "singular-minscan", "repr",
    "exceptional", "theta-approx", "jacobi-check", "reconstruct", "hankel", "lp-check",
    "vterm", "meansq",
)

DEFAULTS = {
    "limit": 100_000,
    "nmax": 4096,
    "qmax": 32,
    "cutoff": 10_000,
    "truncation": 1000.0,
    "samples": 0,  # 0 selects the subcommand's own default
    "threads": os.cpu_count() or 1,
    "output": "",
    "format": "csv",
    "checkpoints": "",
    "dyadic": False,
    "n": 0,
    "xi_times_n": 1.0,
    "eps": 1e-10,
    "plist": "10,30,100,300,1000",
}

_TYPES = {k: type(v) for k, v in DEFAULTS.items()}


# ---------------------------------------------------------------- config


def _coerce(key: str, value):
    if key not in _TYPES:
        raise InvalidArgument(f"unknown configuration key {key!r}")
    kind = _TYPES[key]
    if kind is bool:
        if isinstance(value, bool):
            return value
        s = str(value).strip().lower()
        if s in ("1", "true", "yes", "on"):
            return True
        if s in ("0", "false", "no", "off", ""):
            return False
        raise InvalidArgument(f"{key}: expected a boolean, got {value!r}")
    try:
        if kind is int:
            return int(value)
        if kind is float:
            return float(value)
    except (TypeError, ValueError):
        raise InvalidArgument(f"{key}: expected {kind.__name__}, got {value!r}") from None
    return str(value)


def load_config(path: str) -> tuple[dict, str | None]:
    """Parse a key=value file or a run manifest; returns (settings, subcommand or None)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidArgument(f"cannot read config {path}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"{path}: invalid JSON manifest ({exc.msg})") from None
        params = data.get("parameters", {})
        return {k.replace("-", "_"): _coerce(k.replace("-", "_"), v) for k, v in params.items()}, \
            data.get("subcommand")
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        out[key] = _coerce(key, value)
    return out, None


def _int_list(text: str, what: str) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidArgument(f"{what}: expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------- output


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = list(rows[0].keys())
    w.writerow(keys)
    for r in rows:
        w.writerow([_fmt(r[k]) for k in keys])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def to_json(payload: dict) -> str:
    return json.dumps(_jsonable(payload), indent=2) + "\n"


class Result:
    """Tables produced by a subcommand: a main table, optional extra tables, a summary."""

    def __init__(self, rows, summary=None, extra=None):
        self.rows = rows
        self.summary = summary or {}
        self.extra = extra or {}

    def render(self, fmt: str) -> dict[str, str]:
        """Map of suffix ('' for the main file) to text."""
        if fmt == "json":
            payload = {"summary": self.summary, "rows": self.rows}
            payload.update({k: v for k, v in self.extra.items()})
            return {"": to_json(payload)}
        out = {"": to_csv(self.rows)}
        for name, rows in self.extra.items():
            out[f".{name}"] = to_csv(rows)
        return out


# ---------------------------------------------------------------- subcommands


def _tables(limit: int):
    from .arith import build_sieve
    return build_sieve(max(int(limit), 2))


def cmd_sieve(cfg):
    t = _tables(cfg["limit"])
    rows = [{"n": n, "Lambda": float(t.lam[n]), "mu": int(t.mu[n]), "phi": int(t.phi[n]),
             "tau": int(t.tau[n])} for n in range(1, t.limit + 1)]
    return Result(rows, {"limit": t.limit, "primes": int(t.primes.size)})


def cmd_gauss_verify(cfg):
    from .gauss import verify_gauss_bound
    rep = verify_gauss_bound(cfg["qmax"], threads=cfg["threads"])
    summary = {k: v for k, v in rep.to_json().items() if k != "rows"}
    res = Result(rep.worst, summary)
    if not rep.ok:
        bad = (rep.violations or rep.exact_value_failures)[0]
        raise _Failure(res, f"Gauss bound violated at q={bad['q']}, a={bad['a']}, n={bad['n']}, "
                            f"|G|^2={bad['abs2']:.17g}")
    return res


def cmd_singular(cfg):
    from .singular import singular_euler_range, singular_truncated_many
    nmax = cfg["n"] or cfg["nmax"]
    lo = cfg["n"] or 1
    t = _tables(max(cfg["cutoff"], int(cfg["truncation"]), nmax))
    nvals = np.arange(lo, nmax + 1)
    eul = singular_euler_range(lo, nmax + 1, cfg["cutoff"], t)
    tr = singular_truncated_many(nvals, cfg["truncation"], t)
    rows = [{"n": int(n), "euler": float(e), "truncated": float(s), "cutoff": cfg["cutoff"],
             "P": cfg["truncation"]} for n, e, s in zip(nvals, eul, tr)]
    return Result(rows)


def cmd_singular_converge(cfg):
    from .singular import convergence_check
    n = cfg["n"] or 398
    plist = _int_list(cfg["plist"], "plist")
    t = _tables(max(cfg["cutoff"], max(plist, default=1)))
    rep = convergence_check(n, plist, cfg["cutoff"], t)
    return Result(rep.rows, {"n": n, "euler": rep.euler, "monotone_ok": rep.monotone_ok})


def cmd_singular_minscan(cfg):
    from .singular import singular_lower_bound_scan
    t = _tables(max(cfg["limit"], cfg["cutoff"]))
    value, arg = singular_lower_bound_scan(cfg["limit"], t, cfg["cutoff"])
    row = {"limit": cfg["limit"], "cutoff": cfg["cutoff"], "min_scaled": value, "argmin": arg}
    return Result([row], row)


def cmd_repr(cfg):
    from .represent import rep_all
    t = _tables(cfg["nmax"])
    table = rep_all(cfg["nmax"], t, threads=cfg["threads"])
    return Result(list(table.rows()), {"N": cfg["nmax"]})


def cmd_exceptional(cfg):
    from .represent import exceptional_set
    t = _tables(cfg["limit"])
    cps = _int_list(cfg["checkpoints"], "checkpoints") or None
    rep = exceptional_set(cfg["limit"], cps, t, threads=cfg["threads"])
    rows = [{"n": n} for n in rep.exceptional]
    return Result(rows, {"limit": rep.limit, "E": rep.counts}, {"counts": rep.count_rows()})


def cmd_theta_approx(cfg):
    from .expsums import theta_scan
    Ns = _dyadic_list(cfg, default=[1 << 10, 1 << 12, 1 << 14], step=2)
    rows = theta_scan(cfg["qmax"], Ns, cfg["samples"] or 9, cfg["eps"])
    worst = max(rows, key=lambda r: r["ratio"])
    return Result(rows, {"max_ratio": worst["ratio"], "at": worst})


def cmd_jacobi_check(cfg):
    from .expsums import jacobi_scan
    rows = jacobi_scan(cfg["samples"] or 100)
    return Result(rows, {"points": len(rows), "max_residual": max(r["residual"] for r in rows)})


def cmd_reconstruct(cfg):
    from .circle import parseval_reconstruct
    from .expsums import s_horizon
    from .represent import rep_all
    N = cfg["nmax"]
    t = _tables(max(s_horizon(N, cfg["eps"]), N))
    out = parseval_reconstruct(N, cfg["samples"] or None, t, cfg["eps"])
    R = rep_all(N, t, threads=cfg["threads"]).R
    rows = [{"n": n, "reconstructed": float(out[n]), "R": float(R[n]),
             "abs_diff": float(abs(out[n] - R[n]))} for n in range(1, N + 1)]
    return Result(rows, {"N": N, "max_abs_diff": max(r["abs_diff"] for r in rows)})


def cmd_hankel(cfg):
    from .circle import HANKEL_BOUNDARY_C, hankel_integral, hankel_main_term
    N = cfg["nmax"]
    lo = cfg["n"] or 1
    rows = []
    for n in range(lo, N + 1):
        v = hankel_integral(n, N, cfg["samples"] or 16)
        main = float(hankel_main_term(n, N))
        rows.append({"n": n, "re": v.real, "im": v.imag, "main": main,
                     "residual": abs(v - main), "n_times_residual": n * abs(v - main)})
    C = max(r["n_times_residual"] for r in rows)
    return Result(rows, {"N": N, "C_measured": C, "C_boundary": HANKEL_BOUNDARY_C})


def cmd_lp_check(cfg):
    from .circle import lp_batch
    from .expsums import s_horizon
    Ns = _dyadic_list(cfg, default=[1 << 10, 1 << 11, 1 << 12, 1 << 13], step=1)
    t = _tables(s_horizon(max(Ns), cfg["eps"]))
    res = lp_batch(range(1, cfg["qmax"] + 1), Ns, t, cfg["xi_times_n"], cfg["threads"])
    rows = [r.row() | {"ratio": r.ratio} for r in res]
    ratios = [r.ratio for r in res]
    return Result(rows, {"min_ratio": min(ratios), "max_ratio": max(ratios),
                         "max_doubling_factor": lp_doubling_factor(res)})


def lp_doubling_factor(results) -> float:
    """Largest change factor of the ratio between consecutive N at fixed q."""
    by_q: dict[int, list] = {}
    for r in results:
        by_q.setdefault(r.q, []).append((r.N, r.ratio))
    worst = 1.0
    for seq in by_q.values():
        seq.sort()
        for (_, a), (_, b) in zip(seq, seq[1:]):
            worst = max(worst, a / b, b / a)
    return worst


def cmd_vterm(cfg):
    from .circle import extension_errors
    N = cfg["nmax"]
    t = _tables(max(N, 2))
    rep = extension_errors(N, t, cfg["threads"])
    return Result(list(rep.rows()), {"N": N, "sum_sq": rep.sum_sq, "normalizer": rep.normalizer,
                                     "ratio": rep.ratio})


def cmd_meansq(cfg):
    from .circle import loglog_slope, mean_square_dyadic, mean_square_statistic
    N = cfg["nmax"]
    t = _tables(max(N, cfg["cutoff"]))
    if cfg["dyadic"]:
        stats = mean_square_dyadic(N, t, cfg["cutoff"], n_min=min(4096, N), threads=cfg["threads"])
        summary = {"slope": loglog_slope(stats, n_min=min(1 << 14, stats[0].N))} if len(stats) > 1 else {}
    else:
        stats = [mean_square_statistic(N, t, cfg["cutoff"], threads=cfg["threads"])]
        summary = {}
    return Result([s.row() for s in stats], summary)


def _dyadic_list(cfg, default, step):
    if cfg["checkpoints"]:
        return _int_list(cfg["checkpoints"], "checkpoints")
    if cfg["dyadic"]:
        out, N = [], 1 << 10
        while N <= cfg["nmax"]:
            out.append(N)
            N <<= step
        return out or [cfg["nmax"]]
    return default


COMMANDS = {
    "sieve": cmd_sieve, "gauss-verify": cmd_gauss_verify, "singular": cmd_singular,
    "singular-converge": cmd_singular_converge, "singular-minscan": cmd_singular_minscan,
    "repr": cmd_repr, "exceptional": cmd_exceptional, "theta-approx": cmd_theta_approx,
    "jacobi-check": cmd_jacobi_check, "reconstruct": cmd_reconstruct, "hankel": cmd_hankel,
    "lp-check": cmd_lp_check, "vterm": cmd_vterm, "meansq": cmd_meansq,
}

HELP = {
    "sieve": "Lambda, mu, phi, tau for n <= --limit",
    "gauss-verify": "exhaustive |G(a,n;q)|^2 <= 2q check for q <= --qmax",
    "singular": "Euler-product and truncated singular series for n <= --nmax",
    "singular-converge": "truncated series against the Euler product for --n over --plist",
    "singular-minscan": "min of S(n)(ln ln n)^2 over 100 <= n <= --limit",
    "repr": "R(n), r(n) and counts for n <= --nmax",
    "exceptional": "exceptional set up to --limit with E(x) at --checkpoints",
    "theta-approx": "theta approximation error ratios, q <= --qmax",
    "jacobi-check": "Jacobi transformation residuals on the fixed grid",
    "reconstruct": "Fourier reconstruction of R(n) for n <= --nmax",
    "hankel": "Hankel integral residuals for n <= --nmax at N = --nmax",
    "lp-check": "mean square of S minus its approximant near a/q, q <= --qmax",
    "vterm": "V(m,P) and extension errors r_m for m <= --nmax",
    "meansq": "sum (R(n) - S(n) sqrt n)^2 against (N ln N)^{3/2}",
}

#: Subcommands whose natural output is a single report.
_JSON_DEFAULT = {"gauss-verify"}


class _Failure(Exception):
    """A check failed after producing output; carries the output and a diagnostic."""

    def __init__(self, result: Result, message: str):
        super().__init__(message)
        self.result = result


# ---------------------------------------------------------------- driver


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="primesq", description="Numerical experiments for n = p + m^2.")
    p.add_argument("--version", action="version", version=f"primesq {__version__}")
    sub = p.add_subparsers(dest="subcommand", metavar="subcommand")
    sub.required = True
    for name in SUBCOMMANDS:
        s = sub.add_parser(name, help=HELP[name])
        s.add_argument("--limit", type=int)
        s.add_argument("--nmax", type=int)
        s.add_argument("--qmax", type=int)
        s.add_argument("--cutoff", type=int)
        s.add_argument("--truncation", type=float)
        s.add_argument("--samples", type=int)
        s.add_argument("--threads", type=int)
        s.add_argument("--output")
        s.add_argument("--format", choices=("csv", "json"))
        s.add_argument("--config")
        s.add_argument("--checkpoints")
        s.add_argument("--dyadic", action="store_const", const=True)
        s.add_argument("--show-config", action="store_true")
        s.add_argument("--n", type=int)
        s.add_argument("--xi-times-n", dest="xi_times_n", type=float)
        s.add_argument("--eps", type=float)
        s.add_argument("--plist")
    return p


def resolve_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.subcommand in _JSON_DEFAULT:
        cfg["format"] = "json"
    if args.config:
        file_cfg, manifest_sub = load_config(args.config)
        if manifest_sub is not None and manifest_sub != args.subcommand:
            raise InvalidArgument(
                f"manifest {args.config} is for {manifest_sub!r}, not {args.subcommand!r}")
        cfg.update(file_cfg)
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = _coerce(key, v)
    if cfg["threads"] < 1:
        raise InvalidArgument(f"threads must be >= 1, got {cfg['threads']}")
    return cfg


def _output_path(cfg, subcommand: str) -> Path | None:
    if cfg["output"]:
        return Path(cfg["output"])
    d = os.environ.get(OUTPUT_DIR_ENV)
    if d:
        return Path(d) / f"{subcommand}.{cfg['format']}"
    return None


def _write(result: Result, cfg, subcommand: str, started: str) -> list[str]:
    texts = result.render(cfg["format"])
    path = _output_path(cfg, subcommand)
    if path is None:
        for i, text in enumerate(texts.values()):
            sys.stdout.write(("\n" if i else "") + text)
        return []
    path.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for suffix, text in texts.items():
        p = path if not suffix else path.with_name(path.name + suffix)
        p.write_text(text, encoding="utf-8")
        written.append(str(p))
    manifest = {
        "subcommand": subcommand,
        "parameters": {k: cfg[k] for k in DEFAULTS},
        "start": started,
        "end": datetime.now(timezone.utc).isoformat(),
        "outputs": written,
        "version": __version__,
    }
    mpath = path.with_name(path.name + ".manifest.json")
    mpath.write_text(to_json(manifest), encoding="utf-8")
    return written + [str(mpath)]


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
    except PrimesqError as exc:
        print(f"primesq: error: {exc}", file=sys.stderr)
        return 2
    if args.show_config:
        for k in DEFAULTS:
            print(f"{k}={cfg[k]}")
        return 0
    started = datetime.now(timezone.utc).isoformat()
    try:
        result = COMMANDS[args.subcommand](cfg)
        _write(result, cfg, args.subcommand, started)
    except _Failure as exc:
        _write(exc.result, cfg, args.subcommand, started)
        print(f"primesq: {args.subcommand}: {exc}", file=sys.stderr)
        return 1
    except PrimesqError as exc:
        print(f"primesq: {args.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
