"""Command-line interface.

Subcommands mirror the pipeline stages:

  search         exhaustive product-of-two-repdigits search over a (k, n) box
  verify-theorem compare search output against the claimed solution table
  reduce-small   per-k reduction of l and m bounds (k in [3, 640])
  reduce-large   iterated golden-ratio reduction until k <= 640 contradiction
  gamma          print (and cache) a certified dominant-root enclosure
  report         consolidated machine-readable report (json or csv)

Exit codes: 0 success / contradiction reached, 2 discrepancies found (and
reported), 1 error.  Set PELLREP_CACHE_DIR to persist gamma enclosures
between runs.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import config as cfg
from . import report as rp
from .bounds import large_k_chain, sci_int
from .interval import float_down, float_up
from .prover import (
    CampaignFailure,
    exhaustive_search,
    fibonacci_overlap_flags,
    large_k_campaign,
    small_k_campaign,
    verify_solution_table,
)
from .realalg import dominant_root, load_root_cache, save_root_cache

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DISCREPANCIES = 2


def _gamma_cache_path() -> str | None:
    d = cfg.cache_dir()
    if d is None:
        return None
    os.makedirs(d, exist_ok=True)
    return os.path.join(d, "gamma.cache")


def _with_cache(fn):
    path = _gamma_cache_path()
    if path:
        load_root_cache(path)
    try:
        return fn()
    finally:
        if path:
            save_root_cache(path)


def _config_dict(args, command: str) -> dict:
    plain = {k: v for k, v in vars(args).items()
             if isinstance(v, (str, int, float, bool, type(None)))}
    plain["command"] = command
    return plain


def _emit_if_requested(report, args) -> None:
    if getattr(args, "emit", None):
        rp.emit_report(report, getattr(args, "format", "json"), args.emit)
        print(f"report written to {args.emit}")


def cmd_search(args) -> int:
    recs = exhaustive_search((args.k_min, args.k_max), (1, args.n_max),
                             window_check=args.window_check)
    for r in recs:
        decs = " = ".join(str(d) for d in r.decompositions)
        print(f"Q_{r.n}^({r.k}) = {r.value} = {decs}")
    print(f"{len(recs)} hits over k in [{args.k_min}, {args.k_max}], "
          f"n in [1, {args.n_max}]")
    report = rp.new_report(_config_dict(args, "search"))
    report.search = [rp.solution_to_dict(r) for r in recs]
    _emit_if_requested(report, args)
    return EXIT_OK


def cmd_verify_theorem(args) -> int:
    recs = exhaustive_search((args.k_min, args.k_max), (1, args.n_max))
    cmp = verify_solution_table(recs, args.k_min, args.k_max, args.n_max)
    for row in cmp.rows:
        print(f"{row.label:5s} n={row.n} {row.k_condition:5s} "
              f"{row.status:15s} {row.detail}")
    for issue in cmp.issues:
        print(f"discrepancy: {issue}")
    report = rp.new_report(_config_dict(args, "verify-theorem"))
    report.search = [rp.solution_to_dict(r) for r in recs]
    report.table = rp.table_to_dict(cmp)
    report.discrepancies = [
        {"subject": i.split(":")[0], "claimed": "", "computed": i,
         "severity": "typo" if "typo" in i else "mismatch"}
        for i in cmp.issues]
    _emit_if_requested(report, args)
    return EXIT_DISCREPANCIES if cmp.issues else EXIT_OK


def cmd_reduce_small(args) -> int:
    conf = cfg.SmallKConfig(k_min=args.k_min, k_max=args.k_max,
                            precision_start=args.precision_bits,
                            workers=args.workers,
                            sharp_constants=args.sharp_constants)
    rows = _with_cache(lambda: small_k_campaign(conf=conf))
    failures = 0
    for row in rows:
        flag = f"  ({len(row.failures)} failures, flagged)" if row.failures else ""
        failures += len(row.failures)
        print(f"k={row.k:4d}  l <= {row.l_max:4d}  m <= {row.m_max:4d}  "
              f"n <= {row.n_max:5d}  (cf at {row.cf_precision} bits){flag}")
    agg_l = max(row.l_max for row in rows)
    agg_m = max(row.m_max for row in rows)
    agg_n = max(row.n_max for row in rows)
    print(f"aggregate over k in [{args.k_min}, {args.k_max}]: "
          f"l <= {agg_l}, m <= {agg_m}, n <= {agg_n}")
    report = rp.new_report(_config_dict(args, "reduce-small"))
    report.small_k = [rp.small_k_row_to_dict(r) for r in rows]
    _emit_if_requested(report, args)
    return EXIT_ERROR if failures else EXIT_OK


def cmd_reduce_large(args) -> int:
    conf = cfg.LargeKConfig(max_passes=args.max_passes, workers=args.workers,
                            sharp_constants=args.sharp_constants)
    try:
        ledger = _with_cache(lambda: large_k_campaign(conf))
    except CampaignFailure as exc:
        print(f"campaign failed: {exc}")
        return EXIT_ERROR
    for p in ledger.passes:
        print(f"pass {p.index}: X0 = {p.x0_sci}  lambda < {p.lambda_bound:.2f}  "
              f"case1 k <= {p.case1_k}  case2 k <= {p.case2_k}  "
              f"=> k <= {p.k_bound}")
    print(f"contradiction with k > 640 reached: k <= {ledger.final_k_bound} "
          f"after {len(ledger.passes)} passes")
    report = rp.new_report(_config_dict(args, "reduce-large"))
    report.large_k = rp.large_k_to_dict(ledger)
    report.bounds = rp.bounds_section()
    _emit_if_requested(report, args)
    return EXIT_OK


def cmd_gamma(args) -> int:
    def run():
        return dominant_root(args.k, args.precision_bits)
    enc = _with_cache(run)
    print(f"gamma({args.k}) in [{float_down(enc)}, {float_up(enc)}]")
    print(f"center = {enc.center}")
    print(f"radius <= {enc.radius}")
    print(f"working precision: {enc.prec} bits")
    return EXIT_OK


def cmd_report(args) -> int:
    report = rp.new_report({
        "command": "report", "k_min": args.k_min, "k_max": args.k_max,
        "n_max": args.n_max, "small_k_sample": args.small_k_sample,
        "with_large_k": args.with_large_k,
    })
    recs = exhaustive_search((args.k_min, args.k_max), (1, args.n_max))
    cmp = verify_solution_table(recs, args.k_min, args.k_max, args.n_max)
    report.search = [rp.solution_to_dict(r) for r in recs]
    report.table = rp.table_to_dict(cmp)
    report.bounds = rp.bounds_section()
    report.bounds["large_k_chain"] = {
        mode: rp.chain_result_to_dict(large_k_chain(mode))
        for mode in ("case-1", "case-2")}

    discrepancies = [
        {"subject": i.split(":")[0], "claimed": "", "computed": i,
         "severity": "typo" if "typo" in i else "mismatch"}
        for i in cmp.issues]
    discrepancies += [rp.claim_flag_to_dict(f) for f in
                      fibonacci_overlap_flags(range(2, 11))]
    report.discrepancies = discrepancies

    def heavy():
        if args.small_k_sample:
            ks = sorted(int(k) for k in args.small_k_sample.split(","))
            report.small_k = [rp.small_k_row_to_dict(r)
                              for r in small_k_campaign(ks)]
        if args.with_large_k:
            report.large_k = rp.large_k_to_dict(large_k_campaign())
    _with_cache(heavy)

    rp.emit_report(report, args.format, args.out)
    print(f"report written to {args.out} "
          f"({len(recs)} hits, {len(report.discrepancies)} discrepancies)")
    return EXIT_DISCREPANCIES if report.discrepancies else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pellrep", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="exhaustive search over a (k, n) box")
    p.add_argument("--k-min", type=int, default=3)
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--n-max", type=int, default=782)
    p.add_argument("--window-check", action="store_true",
                   help="annotate hits against the m+l digit-length window")
    p.add_argument("--emit", help="write a JSON/CSV report here")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("verify-theorem",
                       help="compare search output against the claimed table")
    p.add_argument("--k-min", type=int, default=3)
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--n-max", type=int, default=782)
    p.add_argument("--emit")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_verify_theorem)

    p = sub.add_parser("reduce-small", help="per-k l/m reduction sweep")
    p.add_argument("--k-min", type=int, default=3)
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--precision-bits", type=int, default=256)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sharp-constants", action="store_true",
                   help="use sharp decay constants instead of the published ones")
    p.add_argument("--emit")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_reduce_small)

    p = sub.add_parser("reduce-large", help="iterated large-k contradiction")
    p.add_argument("--max-passes", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sharp-constants", action="store_true")
    p.add_argument("--emit")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_reduce_large)

    p = sub.add_parser("gamma", help="certified dominant-root enclosure")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--precision-bits", type=int, default=256)
    p.set_defaults(fn=cmd_gamma)

    p = sub.add_parser("report", help="consolidated report")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", required=True)
    p.add_argument("--k-min", type=int, default=3)
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--n-max", type=int, default=782)
    p.add_argument("--small-k-sample", default="",
                   help="comma-separated k values to reduce, e.g. 3,10,50,100")
    p.add_argument("--with-large-k", action="store_true")
    p.set_defaults(fn=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, RuntimeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
