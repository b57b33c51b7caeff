"""Command-line front end.

Every scan and computation is exposed as a subcommand emitting CSV (default)
or JSON lines with a fixed column order and floats at 17 significant digits,
so output is byte-identical across runs and thread counts.  ``--assert``
turns the expected verdict patterns into exit-code failures for CI use:
exit 0 on success, 1 on a failed assertion, 2 on argument errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from contextlib import nullcontext
from typing import Iterable, Iterator

import mpmath as mp

from . import _kernels, constants, density, mertens, primorial, sieve, theta
from .checkpoints import CheckpointPolicy
from .rigor import Outcome, RunningSum, TRANS_REL, et_mul
from .sieve import ConfigurationError

_FLOAT_FMT = ".17g"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, _FLOAT_FMT)
    return str(v)


def _write_rows(args, columns: list[str], rows: Iterable[dict]) -> None:
    sink_cm = (
        open(args.output, "w", encoding="utf-8", newline="")
        if args.output
        else nullcontext(sys.stdout)
    )
    with sink_cm as fh:
        if args.format == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(row[c]) for c in columns])
        else:
            for row in rows:
                fh.write(json.dumps({c: row[c] for c in columns}) + "\n")


def _policy(args) -> CheckpointPolicy:
    return CheckpointPolicy(kind=args.checkpoints, ratio=args.ratio)


def _segments(limit: int, args):
    return sieve.cached_segments(limit, threads=args.threads)


def _verdict(v) -> str:
    return str(v.outcome)


# ---------------------------------------------------------------------------
# subcommand handlers

_NICOLAS_COLS = [
    "k", "p_k", "log_N", "loglog_N", "lhs_log", "lhs_err",
    "nicolas_margin", "nicolas_err", "nicolas_verdict",
    "rs_margin", "rs_verdict", "prop6_diff", "prop6_ratio",
    "tail", "tail_times_logN",
]


def _cmd_nicolas(args) -> int:
    summary = primorial.PrimorialSummary()
    kwargs = dict(
        policy=_policy(args), prop6_b=args.prop6_b, summary=summary,
    )
    if args.kmax is not None:
        records = primorial.primorial_scan(k_max=args.kmax, threads=args.threads,
                                           **kwargs)
    else:
        records = primorial.primorial_scan(
            p_max=args.pmax, segments=_segments(args.pmax, args), **kwargs
        )

    def rows() -> Iterator[dict]:
        for r in records:
            yield {
                "k": r.k, "p_k": r.p_k,
                "log_N": r.log_N.value, "loglog_N": r.loglog_N.value,
                "lhs_log": r.lhs_log.value, "lhs_err": r.lhs_log.err,
                "nicolas_margin": r.nicolas.margin,
                "nicolas_err": r.nicolas.margin_err,
                "nicolas_verdict": _verdict(r.nicolas),
                "rs_margin": r.rosser_schoenfeld.margin,
                "rs_verdict": _verdict(r.rosser_schoenfeld),
                "prop6_diff": None if r.prop6_diff is None else r.prop6_diff.value,
                "prop6_ratio": None if r.prop6_ratio is None else r.prop6_ratio.value,
                "tail": r.tail.value,
                "tail_times_logN": r.tail_times_log_n.value,
            }

    _write_rows(args, _NICOLAS_COLS, rows())
    if args.assert_mode:
        ok = summary.nicolas_all_hold
        expected_rs = [9] if summary.k_final >= 9 else []
        ok = ok and summary.rs_failures == expected_rs
        ok = ok and not summary.rs_indeterminate
        if not ok:
            print(
                f"assert: nicolas failures={summary.nicolas_failures} "
                f"indeterminate={summary.nicolas_indeterminate} "
                f"rs_failures={summary.rs_failures} (expected {expected_rs}) "
                f"rs_indeterminate={summary.rs_indeterminate}",
                file=sys.stderr,
            )
            return 1
    return 0


_THETA_COLS = ["x", "theta", "theta_err", "e_abs", "rh_bound", "rh_verdict",
               "cheb_lo", "cheb_hi"]


def _cmd_theta(args) -> int:
    records = theta.theta_scan(
        args.xmax, policy=_policy(args), a=args.a, b=args.b,
        segments=_segments(args.xmax, args),
    )
    cols = list(_THETA_COLS)
    if args.wirsing_b is not None:
        cols.append("wirsing_ratio")
    failed = []

    def rows() -> Iterator[dict]:
        for r in records:
            row = {
                "x": r.x, "theta": r.theta.value, "theta_err": r.theta.err,
                "e_abs": r.e_abs.value, "rh_bound": r.rh_bound,
                "rh_verdict": _verdict(r.rh_band_ok),
                "cheb_lo": r.chebyshev_lo_ok, "cheb_hi": r.chebyshev_hi_ok,
            }
            if args.wirsing_b is not None:
                row["wirsing_ratio"] = r.wirsing_ratio(args.wirsing_b)
            if args.assert_mode:
                if r.x >= 599 and r.rh_band_ok.outcome is Outcome.FAILS:
                    failed.append(f"rh band violated at x={r.x}")
                if r.x >= 100 and not (r.chebyshev_lo_ok and r.chebyshev_hi_ok):
                    failed.append(f"chebyshev flags false at x={r.x}")
            yield row

    _write_rows(args, cols, rows())
    if failed:
        print("assert: " + "; ".join(failed[:10]), file=sys.stderr)
        return 1
    return 0


_MERTENS_COLS = [
    "x", "sum_recip", "sum_recip_err", "residual", "residual_err",
    "dusart_band", "rh_band", "elementary_band",
    "within_dusart", "within_rh", "within_elementary",
]


def _cmd_mertens(args) -> int:
    records = mertens.mertens_scan(
        args.xmax, policy=_policy(args), c_elementary=args.c,
        segments=_segments(args.xmax, args),
    )
    failed = []

    def rows() -> Iterator[dict]:
        for r in records:
            if args.assert_mode:
                if r.x >= 10 and r.within_elementary.outcome is not Outcome.HOLDS:
                    failed.append(f"elementary band not certified at x={r.x}")
                if r.x >= 10 ** 6 and r.within_dusart.outcome is not Outcome.HOLDS:
                    failed.append(f"dusart band not certified at x={r.x}")
            yield {
                "x": r.x,
                "sum_recip": r.sum_recip.value, "sum_recip_err": r.sum_recip.err,
                "residual": r.residual.value, "residual_err": r.residual.err,
                "dusart_band": r.dusart_band, "rh_band": r.rh_band,
                "elementary_band": r.elementary_band,
                "within_dusart": _verdict(r.within_dusart),
                "within_rh": _verdict(r.within_rh),
                "within_elementary": _verdict(r.within_elementary),
            }

    _write_rows(args, _MERTENS_COLS, rows())
    if failed:
        print("assert: " + "; ".join(failed[:10]), file=sys.stderr)
        return 1
    return 0


_AP_COLS = ["x", "q", "a", "sum_recip", "sum_recip_err", "centered",
            "centered_err", "b_aq_estimate", "spread_last_decade"]


def _cmd_mertens_ap(args) -> int:
    records = mertens.mertens_ap_scan(
        args.q, args.a, args.xmax, policy=_policy(args),
        segments=_segments(args.xmax, args),
    )

    def rows() -> Iterator[dict]:
        for r in records:
            yield {
                "x": r.x, "q": r.q, "a": r.a,
                "sum_recip": r.sum_recip.value, "sum_recip_err": r.sum_recip.err,
                "centered": r.centered.value, "centered_err": r.centered.err,
                "b_aq_estimate": r.b_aq_estimate,
                "spread_last_decade": r.spread_last_decade,
            }

    _write_rows(args, _AP_COLS, rows())
    return 0


def _round_digits(digits: str, n: int) -> str:
    with mp.workdps(60):
        return mp.nstr(mp.mpf(digits), n)


def _cmd_constants(args) -> int:
    vals = [constants.euler_gamma(), constants.exp_gamma(), constants.mertens_b1()]
    if args.prime_limit is not None:
        vals.append(constants.prime_zeta(2, args.prime_limit))
        vals.append(constants.compute_B1(args.prime_limit, args.nmax))
    rows = [
        {"name": v.name, "digits": _round_digits(v.digits, args.digits),
         "tail_bound": v.tail_bound}
        for v in vals
    ]
    if args.format != "text":
        _write_rows(args, ["name", "digits", "tail_bound"], iter(rows))
        return 0
    sink_cm = (
        open(args.output, "w", encoding="utf-8")
        if args.output
        else nullcontext(sys.stdout)
    )
    with sink_cm as fh:
        for row in rows:
            line = f"{row['name']}={row['digits']}"
            if row["tail_bound"]:
                line += f" tail_bound={_fmt(row['tail_bound'])}"
            fh.write(line + "\n")
    return 0


_DENSITY_COLS = ["t", "n_limit", "count", "density",
                 "prediction_as_written", "prediction_consistent"]


def _cmd_density(args) -> int:
    thresholds = [t.strip() for t in args.t.split(",") if t.strip()]
    table = sieve.totient_table(args.nlimit)

    def rows() -> Iterator[dict]:
        for t in thresholds:
            r = density.density_estimate(t, args.nlimit, table)
            yield {
                "t": r.t, "n_limit": r.n_limit, "count": r.count,
                "density": r.density,
                "prediction_as_written": r.prediction_as_written,
                "prediction_consistent": r.prediction_consistent,
            }

    _write_rows(args, _DENSITY_COLS, rows())
    return 0


_THM4_COLS = ["n_limit", "c0", "threshold_at", "count", "indeterminate",
              "fraction", "first_exceptions"]


def _cmd_thm4(args) -> int:
    r = density.theorem4_exceptions(args.nlimit, args.c0, args.threshold_at)
    row = {
        "n_limit": r.n_limit, "c0": r.c0, "threshold_at": r.threshold_at,
        "count": r.count, "indeterminate": r.indeterminate,
        "fraction": r.fraction,
        "first_exceptions": ";".join(map(str, r.first_exceptions)),
    }
    _write_rows(args, _THM4_COLS, iter([row]))
    return 0


_OMEGA_COLS = ["n_limit", "mean_omega", "loglog_plus_b1", "max_omega", "argmax"]


def _cmd_omega(args) -> int:
    r = density.omega_normal_order(args.nlimit)
    row = {
        "n_limit": r.n_limit, "mean_omega": r.mean_omega,
        "loglog_plus_b1": r.loglog_plus_b1,
        "max_omega": r.max_omega, "argmax": r.argmax,
    }
    _write_rows(args, _OMEGA_COLS, iter([row]))
    return 0


_TAIL_COLS = ["p_k", "n_max", "tail", "tail_err", "log_n", "tail_times_log_n"]


def _cmd_tail(args) -> int:
    t = primorial.prime_power_tail(args.pk, args.nmax)
    acc = RunningSum(term_rel=TRANS_REL)
    kern = _kernels.active()
    for seg in _segments(args.pk, args):
        acc.merge_block(*kern.log_block(seg))
    logn = acc.snapshot()
    prod = et_mul(t, logn)
    row = {
        "p_k": args.pk, "n_max": args.nmax, "tail": t.value, "tail_err": t.err,
        "log_n": logn.value, "tail_times_log_n": prod.value,
    }
    _write_rows(args, _TAIL_COLS, iter([row]))
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(p: argparse.ArgumentParser, checkpoints: bool = True,
                formats: tuple[str, ...] = ("csv", "jsonl")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", metavar="PATH", default=None,
                   help="write to PATH instead of stdout")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("TOTSCAN_THREADS", "1")),
                   help="sieve worker threads (output is identical regardless)")
    p.add_argument("--assert", dest="assert_mode", action="store_true",
                   help="exit 1 if the expected verdict pattern is violated")
    if checkpoints:
        p.add_argument("--checkpoints", choices=("auto", "dense", "grid", "pow10"),
                       default="auto")
        p.add_argument("--ratio", type=float, default=1.1,
                       help="geometric checkpoint ratio for grid mode")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="totscan",
        description="Certified scans of totient, Mertens and theta inequalities.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nicolas", help="primorial scan with Nicolas and "
                       "Rosser-Schoenfeld verdicts at every k")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--pmax", type=int, help="scan primes p_k <= pmax")
    g.add_argument("--kmax", type=int, help="scan the first kmax primes")
    p.add_argument("--prop6-b", type=float, default=1.0)
    _add_common(p)
    p.set_defaults(func=_cmd_nicolas)

    p = sub.add_parser("theta", help="theta(x) checkpoints with band checks")
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--a", type=float, default=0.8)
    p.add_argument("--b", type=float, default=1.2)
    p.add_argument("--wirsing-b", type=float, default=None,
                   help="also report |E(x)| log^B x / x for this B")
    _add_common(p)
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("mertens", help="sum 1/p checkpoints with residual bands")
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--c", type=float, default=1.0,
                   help="constant of the elementary band c/log x")
    _add_common(p)
    p.set_defaults(func=_cmd_mertens)

    p = sub.add_parser("mertens-ap", help="sum 1/p over p = a (mod q)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--xmax", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_mertens_ap)

    p = sub.add_parser("constants", help="gamma, e^gamma, B1 (and optional "
                       "reconstruction)")
    p.add_argument("--digits", type=int, default=30)
    p.add_argument("--prime-limit", type=int, default=None,
                   help="also reconstruct B1 and P(2) up to this prime limit")
    p.add_argument("--nmax", type=int, default=64)
    _add_common(p, checkpoints=False, formats=("text", "csv", "jsonl"))
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("density", help="empirical density of n/phi(n) >= t")
    p.add_argument("--t", required=True, help="comma-separated thresholds")
    p.add_argument("--nlimit", type=int, required=True)
    _add_common(p, checkpoints=False)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("thm4", help="exceptions to phi(n)/n > c0/logloglog")
    p.add_argument("--c0", type=float, default=0.1)
    p.add_argument("--nlimit", type=int, required=True)
    p.add_argument("--threshold-at", choices=density.THRESHOLD_MODES,
                   default="n_limit")
    _add_common(p, checkpoints=False)
    p.set_defaults(func=_cmd_thm4)

    p = sub.add_parser("omega", help="normal order of omega(n)")
    p.add_argument("--nlimit", type=int, required=True)
    _add_common(p, checkpoints=False)
    p.set_defaults(func=_cmd_omega)

    p = sub.add_parser("tail", help="prime-power tail T(p_k) and T * log N_k")
    p.add_argument("--pk", type=int, required=True)
    p.add_argument("--nmax", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=_cmd_tail)

    return ap


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"totscan: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"totscan: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
