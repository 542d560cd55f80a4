"""Command line entry point: ``psthue <command> [options]``.

Every command writes one report: a JSON object
``{"command", "config", "version", "wall_time_s", "results"}`` or, with
``--format csv``, the result rows as an RFC 4180 table.

Exit codes: 0 success, 2 invalid configuration, 3 budget exceeded,
4 precision ladder exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
import time
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, beatty, census, checks, fourier, powerfloor, sumlab
from .digitcore import Word, thue_morse
from .parallel import default_threads
from .realnum import PrecisionExhausted, RealExpr

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_PRECISION = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Serialisation


def _plain(obj):
    """Recursively convert to JSON-ready values (Fractions become ``"p/q"`` strings)."""
    if isinstance(obj, (powerfloor.ExponentSpec, Word, RealExpr)):
        return str(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return _plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, (frozenset, set)):
        return sorted(_plain(v) for v in obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _fmt_float(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError(f"cannot serialise non-finite float {v}")
    s = format(v, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _json(obj, indent: int, level: int = 0) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_json(v, indent) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _json(v, indent, level + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    return json.dumps(obj)


def emit(report: dict, fmt: str = "json") -> bytes:
    """Serialise a report; floats carry 17 significant digits, field order is insertion order."""
    if fmt == "json":
        return (_json(_plain(report), 2) + "\n").encode()
    if fmt == "csv":
        rows = _plain(report.get("rows", []))
        cols: list[str] = list(report.get("columns", []))
        for row in rows:
            for k in row:
                if k not in cols:
                    cols.append(k)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        if cols:
            w.writerow(cols)
        for row in rows:
            w.writerow([_csv_cell(row.get(k)) for k in cols])
        return buf.getvalue().encode()
    raise ValueError(f"unknown format {fmt!r}")


def _csv_cell(v):
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return "" if v is None else v


# ---------------------------------------------------------------------------
# Argument helpers


def parse_int(text: str) -> int:
    """Integers, also in forms like ``1e6``."""
    try:
        v = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v.denominator != 1:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def parse_int_list(text: str) -> list[int]:
    return [parse_int(t) for t in text.split(",") if t.strip()]


def parse_float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def parse_exponent(text: str) -> powerfloor.ExponentSpec:
    try:
        return powerfloor.ExponentSpec.parse(text)
    except (ValueError, SyntaxError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_real(text: str):
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return RealExpr(text)
    except (ValueError, SyntaxError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_word(text: str) -> Word:
    try:
        return Word.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_bits(text: str) -> tuple[int, ...]:
    if not text or any(ch not in "01" for ch in text):
        raise argparse.ArgumentTypeError(f"expected a 0/1 string, got {text!r}")
    return tuple(int(ch) for ch in text)


# ---------------------------------------------------------------------------
# Commands (each returns (results, rows))


def cmd_seq(args):
    c = args.c
    stop = args.start + args.count
    if stop < 1 << 40:
        vals = powerfloor.floor_power_range(args.start, stop, c)
    else:
        vals = [powerfloor.floor_power(n, c) for n in range(args.start, stop)]
    rows = [{"n": args.start + k, "floor": int(v), "t": thue_morse(int(v))} for k, v in enumerate(vals)]
    return {"values": [r["t"] for r in rows], "floors": [r["floor"] for r in rows]}, rows


def cmd_blocks(args):
    rep = census.block_count_ps(args.N, args.c, args.L, threads=args.threads)
    return {"freq": rep}, rep.rows()


def cmd_normality(args):
    rep = census.normality_report(args.c, args.L, args.checkpoints, threads=args.threads)
    rows = [{"N": n, "max_dev": v} for n, v in rep.rows]
    return {"rows": rows, "slope": rep.slope, "freq": rep.reports}, rows


def cmd_fourier_check(args):
    rng = random.Random(args.seed)
    rows = []
    for k in range(args.count):
        L = rng.randint(1, args.L_max)
        r = rng.randint(L, args.r_max)
        lam = rng.randint(0, args.lam_max)
        i = fourier.ShiftProfile.random(L, r, rng)
        b = fourier.CoeffBlock((1,) + tuple(rng.randint(0, 1) for _ in range(L - 1)), r)
        d = rng.randrange(1 << lam)
        direct = fourier.fourier_direct(lam, i, b, d)
        rec = fourier.fourier_recursive(lam, i, b, d)
        rows.append({"instance": k, "lam": lam, "L": L, "r": r, "d": d,
                     "max_diff": float(np.max(np.abs(direct.entries - rec.entries))),
                     "parseval": direct.parseval(), "max_abs_sq": direct.max_abs_sq()})
    worst = max((r["max_diff"] for r in rows), default=0.0)
    pars = max((abs(r["parseval"] - 1) for r in rows), default=0.0)
    return {"instances": len(rows), "max_diff": worst, "max_parseval_error": pars,
            "agree": worst <= 1e-9, "parseval_ok": pars <= 1e-9}, rows


def cmd_census_good(args):
    rng = random.Random(args.seed)
    if args.profile == "zero":
        i = fourier.ShiftProfile.zero(1, args.r)
    else:
        i = fourier.ShiftProfile.random(1, args.r, rng)
    x = fourier.nu2(args.r)
    dist = fourier.good_set_distribution(args.lam, args.r, args.m, i)
    rows = []
    for M, n in sorted(dist.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        formula = fourier.census_formula(args.lam, x, args.m, len(M))
        rows.append({"M": " ".join(map(str, sorted(M))), "k": len(M), "count": n, "formula": formula, "match": n == formula})
    A1, A2 = fourier.index_sets(args.lam, x, args.m)
    return {"A1": A1, "A2": A2, "lambda0": fourier.lambda0(args.lam, x, args.m), "profile_at_r": i.at_r,
            "total": sum(dist.values()), "all_match": all(r["match"] for r in rows),
            "decay": fourier.decay_budget(args.lam, args.r, args.m)}, rows


def cmd_discrepancy(args):
    if args.mu is not None:
        rep = beatty.mean_discrepancy_profile(args.mu, args.N, m=args.m)
        row = {"mu": args.mu, "N": args.N, "sum": float(rep.sum), "normalized": rep.normalized}
        return {"profile": rep}, [row]
    if args.alpha is None:
        raise ConfigError("give --alpha or --mu")
    val = beatty.discrepancy(args.alpha, args.N)
    row = {"alpha": str(args.alpha), "N": args.N, "discrepancy": float(val),
           "exact": str(val) if isinstance(val, Fraction) else None}
    return row, [row]


def cmd_farey(args):
    if args.order is not None:
        pairs = beatty.farey_neighbors(args.order)
        rows = [{"a": a, "b": b, "c": c, "d": d, "det": b * c - a * d, "b_plus_d": b + d} for (a, b), (c, d) in pairs]
        return {"order": args.order, "pairs": len(rows),
                "all_ok": all(r["det"] == 1 and r["b_plus_d"] > args.order for r in rows)}, rows
    if args.alpha is None:
        raise ConfigError("give --alpha or --order")
    fa = beatty.farey_approx_scaled(args.alpha, args.mu, args.sigma)
    err = fa.error(args.alpha)
    row = {"p": fa.p, "q": fa.q, "mu": fa.mu, "sigma": fa.sigma, "error": float(err),
           "within_bound": err < Fraction(1, 1 << args.sigma)}
    return row, [row]


def _policy(args) -> census.SamplingPolicy:
    return census.SamplingPolicy(y_values=tuple(args.y_values), beta_samples=getattr(args, "beta_samples", 16),
                                 window_fracs=tuple(args.window_fracs))


def cmd_bv_ap(args):
    rows = []
    reports = []
    for x in args.x:
        D = float(x) ** args.delta if args.D is None else args.D
        rep = census.ap_average_deviation(x, D, args.omega, _policy(args), threads=args.threads)
        reports.append(rep)
        rows.append({"x": x, "D": float(D), "moduli": len(rep.per_d), "aggregate": rep.aggregate, "normalized": rep.normalized})
    return {"rows": rows, "sampling_policy": _policy(args).describe(), "reports": reports}, rows


def cmd_bv_beatty(args):
    rows = []
    reports = []
    for x in args.x:
        D = float(x) ** args.delta if args.D is None else args.D
        rep = census.beatty_average_deviation(x, D, args.omega, args.grid, _policy(args), threads=args.threads)
        reports.append(rep)
        rows.append({"x": x, "D": float(D), "grid": args.grid, "aggregate": rep.aggregate, "normalized": rep.normalized})
    return {"rows": rows, "sampling_policy": _policy(args).describe(), "reports": reports}, rows


def cmd_s1(args):
    rows = []
    for N in args.N:
        D = args.D if args.D is not None else float(N) ** args.rho
        p = sumlab.SumParams(N=N, D=D, xi=args.xi, a=args.a, j_cap=args.j_cap, j_samples=args.j_samples,
                             exact=args.exact, seed=args.seed)
        if args.beatty_grid:
            rep = sumlab.s1_beatty_direct(p, args.beatty_grid, args.beta_samples)
        else:
            rep = sumlab.s1_direct(p)
        rows.append({"N": N, "D": float(p.D), "value": rep.value, "normalized": rep.normalized,
                     "label": rep.label, "j_cap": rep.j_cap, "j_count": rep.j_count})
    return {"rows": rows}, rows


def cmd_lemmas(args):
    names = [n.strip() for n in args.suite.split(",")]
    res = checks.run_suite(names, args.budget)
    rows = [{k: v for k, v in r.items() if not isinstance(v, (list, dict))} for r in res]
    return {"checks": res, "all_hold": all(r["holds"] for r in res)}, rows


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None, help="worker processes (default: $PSTHUE_THREADS or 1)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", type=Path, default=None, help="report file (default: stdout)")

    p = argparse.ArgumentParser(prog="psthue", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("seq", parents=[common], help="t(floor(n^c)) for consecutive n")
    s.add_argument("--c", type=parse_exponent, required=True)
    s.add_argument("--count", type=parse_int, default=16)
    s.add_argument("--start", type=parse_int, default=0)
    s.set_defaults(func=cmd_seq)

    s = sub.add_parser("blocks", parents=[common], help="block frequencies along floor(n^c)")
    s.add_argument("--c", type=parse_exponent, required=True)
    s.add_argument("--L", type=int, default=2)
    s.add_argument("--N", type=parse_int, required=True)
    s.set_defaults(func=cmd_blocks)

    s = sub.add_parser("normality", parents=[common], help="max deviation at increasing N")
    s.add_argument("--c", type=parse_exponent, required=True)
    s.add_argument("--L", type=int, default=3)
    s.add_argument("--checkpoints", type=parse_int_list, default=[10**4, 10**5, 10**6])
    s.set_defaults(func=cmd_normality)

    s = sub.add_parser("fourier-check", parents=[common], help="recurrence against direct transform")
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--lam-max", type=int, default=10)
    s.add_argument("--L-max", type=int, default=3)
    s.add_argument("--r-max", type=int, default=64)
    s.set_defaults(func=cmd_fourier_check)

    s = sub.add_parser("census-good", parents=[common], help="brute-force census of good positions")
    s.add_argument("--lam", type=int, default=20)
    s.add_argument("--r", type=parse_int, default=1024)
    s.add_argument("--m", type=int, default=5)
    s.add_argument("--profile", choices=("zero", "random"), default="zero")
    s.set_defaults(func=cmd_census_good)

    s = sub.add_parser("discrepancy", parents=[common], help="D_N(alpha), or the mean over d/2^mu")
    s.add_argument("--alpha", type=parse_real)
    s.add_argument("--N", type=parse_int, required=True)
    s.add_argument("--mu", type=int)
    s.add_argument("--m", type=int, default=None, help="with --mu: also the geometric-sum statistic")
    s.set_defaults(func=cmd_discrepancy)

    s = sub.add_parser("farey", parents=[common], help="Farey neighbours or the scaled approximation")
    s.add_argument("--order", type=int)
    s.add_argument("--alpha", type=parse_real)
    s.add_argument("--mu", type=int, default=0)
    s.add_argument("--sigma", type=int, default=4)
    s.set_defaults(func=cmd_farey)

    for name, func, helptext in (("bv-ap", cmd_bv_ap, "average deviation over moduli d"),
                                 ("bv-beatty", cmd_bv_beatty, "average deviation over alpha")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--x", type=parse_int_list, default=[10**3, 10**4])
        s.add_argument("--delta", type=float, default=0.55, help="D = x**delta unless --D is given")
        s.add_argument("--D", type=parse_real, default=None)
        s.add_argument("--omega", type=parse_word, default=Word((0, 1)))
        s.add_argument("--y-values", type=parse_int_list, default=[0])
        s.add_argument("--window-fracs", type=parse_float_list, default=[1.0],
                       help="window lengths as fractions of x (default: x only)")
        if name == "bv-beatty":
            s.add_argument("--grid", type=int, default=64)
            s.add_argument("--beta-samples", type=int, default=16)
        s.set_defaults(func=func)

    s = sub.add_parser("s1", parents=[common], help="exponential sums over d (or alpha)")
    s.add_argument("--N", type=parse_int_list, default=[64, 128, 256])
    s.add_argument("--rho", type=float, default=1.5, help="D = N**rho unless --D is given")
    s.add_argument("--D", type=parse_real, default=None)
    s.add_argument("--xi", type=float, default=0.0)
    s.add_argument("--a", type=parse_bits, default=(1,))
    s.add_argument("--j-cap", type=parse_int, default=None)
    s.add_argument("--j-samples", type=parse_int, default=32)
    s.add_argument("--exact", action="store_true", help="scan every shift needed for the true maximum")
    s.add_argument("--beatty-grid", type=int, default=0, help="integrate over alpha with this many cells")
    s.add_argument("--beta-samples", type=int, default=16)
    s.set_defaults(func=cmd_s1)

    s = sub.add_parser("lemmas", parents=[common], help="run the lemma checkers")
    s.add_argument("--suite", default="all", help="comma separated names or 'all'")
    s.add_argument("--budget", choices=checks.BUDGETS, default="small")
    s.set_defaults(func=cmd_lemmas)
    return p


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "output", "format")}
    if cfg.get("threads") is None:
        cfg["threads"] = default_threads()
    return cfg


def run(args) -> dict:
    t0 = time.perf_counter()
    results, rows = args.func(args)
    return {"command": args.command, "config": _config(args), "version": __version__,
            "wall_time_s": time.perf_counter() - t0, "results": results, "rows": rows}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_threads()
    try:
        report = run(args)
        fmt = args.format
        if fmt == "json":
            report = {k: v for k, v in report.items() if k != "rows"}
        data = emit(report, fmt)
    except sumlab.BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValueError, ZeroDivisionError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.output is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        args.output.write_bytes(data)
    return EXIT_OK
