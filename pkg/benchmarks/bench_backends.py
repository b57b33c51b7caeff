#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Runs each hot kernel on both backends and prints a timing table; optionally
writes CSV.  Exact outputs are asserted equal while timing, so this doubles
as a smoke test.

    python benchmarks/bench_backends.py [--full] [--csv results.csv]
"""

import argparse
import csv
import sys
import time

import totscan._kernels as kernels
from totscan import constants, mertens, primorial, sieve, theta


def timed(fn, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        sieve.clear_caches()
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def workloads(limit_sieve, limit_table, limit_scan):
    def nicolas():
        s = primorial.PrimorialSummary()
        recs = list(primorial.primorial_scan(p_max=limit_scan, summary=s))
        return (s.k_final, s.rs_failures[-1] if s.rs_failures else None, len(recs))

    return [
        (f"sieve primes to {limit_sieve:.0e}",
         lambda: int(sum(len(s) for s in sieve.prime_segments(limit_sieve)))),
        (f"totient table to {limit_table:.0e}",
         lambda: int(sieve.totient_table(limit_table).phi[-1])),
        (f"primorial scan to {limit_scan:.0e}", nicolas),
        (f"theta scan to {limit_scan:.0e}",
         lambda: len(list(theta.theta_scan(limit_scan)))),
        (f"mertens scan to {limit_scan:.0e}",
         lambda: len(list(mertens.mertens_scan(limit_scan)))),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--full", action="store_true",
                    help="10^8-scale scans (default 10^7)")
    ap.add_argument("--csv", metavar="PATH", default=None)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    available = kernels.available_backends()
    if "cython" not in available:
        print("warning: compiled backend not built; fallback only",
              file=sys.stderr)

    scale = 10 ** 8 if args.full else 10 ** 7
    table_scale = 10 ** 7 if args.full else 10 ** 6
    constants.scan_prime_zeta(2)  # warm the P(n) cache outside the timing

    rows = []
    jobs = workloads(scale, table_scale, scale)
    for name, fn in jobs:
        times = {}
        checks = {}
        for backend in available:
            kernels.set_backend(backend)
            times[backend], checks[backend] = timed(fn, args.repeat)
        if len(set(map(str, checks.values()))) != 1:
            raise SystemExit(f"backend results differ for {name}: {checks}")
        rows.append((name, times))

    width = max(len(n) for n, _ in rows)
    header = f"{'workload':<{width}}  " + "".join(f"{b:>12}" for b in available)
    if len(available) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, times in rows:
        line = f"{name:<{width}}  " + "".join(
            f"{times[b]:>11.3f}s" for b in available)
        if len(available) == 2:
            line += f"{times['fallback'] / times['cython']:>9.2f}x"
        print(line)

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["workload"] + [f"{b}_seconds" for b in available])
            for name, times in rows:
                w.writerow([name] + [f"{times[b]:.6f}" for b in available])
        print(f"\nwrote {args.csv}")


if __name__ == "__main__":
    main()
