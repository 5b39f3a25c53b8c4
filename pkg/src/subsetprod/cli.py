"""Command-line front end.

Subcommands: solve, table, conjecture-scan, verify-paper-run, toy, stats.
Exit codes: 0 success, 2 usage/input error, 3 not found, 4 capability error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from typing import List, Optional

from . import harness
from .bsgs import BsgsConfig, bsgs_solve, bsgs_solve_randomized
from .errors import (
    CapabilityError,
    InputError,
    NotFoundError,
    SubsetProdError,
    UsageError,
)
from .groups import make_group
from .parallel import ParallelOptions, rho_solve_parallel
from .reference import BENCHMARK_ROWS
from .rho import Mask, RhoOptions, rho_solve
from .sequences import build_sequence, descriptor_product
from .stats import expected_stats

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_CAPABILITY = 4

SCALE_CAP_ENV = "SUBSETPROD_SCALE_CAP"


def _parse_start(text: str, size_a: int, size_b: int) -> Mask:
    side, sep, rest = text.partition(":")
    if side not in ("A", "B") or not sep:
        raise InputError(f"start point must look like B:1,2,3, got {text!r}")
    try:
        indices = [int(v) for v in rest.split(",") if v]
    except ValueError:
        raise InputError(f"bad start indices in {text!r}") from None
    return Mask.from_indices(side, indices, size_a if side == "A" else size_b)


def _emit(record: dict, out: Optional[str]) -> None:
    line = json.dumps(record, sort_keys=True)
    print(line)
    if out:
        with open(out, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")


def cmd_solve(args) -> int:
    seq, tgt = build_sequence(args.group, args.k, seed=args.seq_seed, kind=args.seq_kind)
    z = tgt.z
    start = _parse_start(args.start, seq.size_a, seq.size_b) if args.start else None
    t0 = time.time()
    c = rho = phi = ops = 0
    if args.alg == "bsgs":
        cfg = BsgsConfig(seed=args.seed, max_table_entries=args.max_table)
        res = bsgs_solve(seq, z, cfg)
        ops = res.group_ops
    elif args.alg == "bsgs-rand":
        cfg = BsgsConfig(seed=args.seed, max_table_entries=args.max_table,
                         step_budget=args.budget)
        res = bsgs_solve_randomized(seq, z, cfg)
        ops = res.group_ops
    elif args.alg == "rho":
        opts = RhoOptions(
            eta_mode=args.eta, multiplier=args.multiplier, seed=args.seed,
            start=start, precompute_m=args.precompute_m,
            restart_budget=args.budget if args.budget is not None else 64,
        )
        res = rho_solve(seq, z, opts)
        c, rho = res.outcome.collisions, res.outcome.rho_total
        phi, ops = res.outcome.phi_evals, res.outcome.group_ops
    else:  # rho-parallel
        opts = ParallelOptions(
            workers=args.workers, dist_bits=args.dist_bits, seed=args.seed,
            eta_mode=args.eta, multiplier=args.multiplier,
            precompute_m=args.precompute_m, start=start,
            checkpoint_path=args.checkpoint,
        )
        res = rho_solve_parallel(seq, z, opts)
        c, phi, ops = res.stats.collisions, res.stats.phi_evals, res.stats.group_ops
    wall = time.time() - t0
    verified = bool(res.found and descriptor_product(seq, res.descriptor) == z)
    record = {
        "schema_version": harness.SCHEMA_VERSION,
        "config": {
            "group": args.group, "k": args.k, "seq_kind": args.seq_kind,
            "seq_seed": args.seq_seed, "alg": args.alg, "seed": args.seed,
        },
        "found": res.found,
        "answer_hex": res.descriptor.to_hex() if res.found else None,
        "verified": verified,
        "c": c,
        "rho_tot": rho,
        "phi_evals": phi,
        "group_ops": ops,
        "wall_seconds": round(wall, 3),
    }
    _emit(record, args.out)
    if not res.found:
        return EXIT_NOT_FOUND
    if not verified:
        raise SubsetProdError("answer failed verification")  # unreachable by design
    return EXIT_OK


def _scale_cap(args) -> float:
    if args.unsafe_scale:
        return float("inf")
    env = os.environ.get(SCALE_CAP_ENV)
    if args.scale_cap is not None:
        return args.scale_cap
    if env is not None:
        try:
            return float(env)
        except ValueError:
            raise InputError(f"bad {SCALE_CAP_ENV} value {env!r}") from None
    return 32.0


def cmd_table(args) -> int:
    cap = _scale_cap(args)
    rows = [
        r for r in BENCHMARK_ROWS
        if (not args.rows or any(tag in r.label for tag in args.rows))
    ]
    results: List[harness.TableRowResult] = []
    for row in rows:
        if row.log2n_published > cap:
            print(f"# skipping {row.label} k={row.k}: log2 n {row.log2n_published} over cap {cap}",
                  file=sys.stderr)
            continue
        results.append(
            harness.run_benchmark_row(
                row, runs=args.runs, seed=args.seed, precompute_m=args.precompute_m
            )
        )
    def write_rows(fh):
        writer = csv.writer(fh)
        writer.writerow(harness.TABLE_CSV_HEADER)
        for res in results:
            writer.writerow(res.to_csv_fields())

    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_rows(fh)
        print(f"# wrote {len(results)} rows to {args.out}", file=sys.stderr)
    else:
        write_rows(sys.stdout)
    return EXIT_OK


def cmd_conjecture_scan(args) -> int:
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(harness.SCAN_CSV_HEADER)
    count = 0
    for disc, h, k in harness.conjecture_scan(args.limit):
        writer.writerow([harness.SCHEMA_VERSION, disc, h, k])
        count += 1
    if args.out:
        out.close()
        print(f"# wrote {count} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_verify_paper_run(args) -> int:
    orders = ("msb", "lsb") if args.bit_order == "both" else (args.bit_order,)
    report = harness.verify_published_run(args.which, args.hex, orders)
    record = {
        "schema_version": harness.SCHEMA_VERSION,
        "which": report.which,
        "k": report.k,
        "hex": report.hex_string,
        "popcount": report.popcount_msb,
        "stated_popcount": report.stated_popcount,
        "target": report.target_note,
        "match": report.match,
        "group_ops": report.group_ops,
    }
    _emit(record, args.out)
    return EXIT_OK


def cmd_toy(args) -> int:
    report = harness.toy_report(
        eta_mode=args.eta, multiplier=args.multiplier, expect_paper=args.expect_paper
    )
    print("walk:", " -> ".join(report.orbit))
    print(f"tail {report.tail}, cycle {report.cycle}, collision value {report.collision_value}")
    print(f"answer {report.answer_hex} selecting S indices {list(report.answer_indices)}")
    if report.compared:
        for f in report.failures:
            print("FAIL:", f)
        print("PASS" if report.ok else "FAIL")
    else:
        print("published-walk comparison skipped")
    return EXIT_OK if report.ok else 1


def cmd_stats(args) -> int:
    if args.n is not None:
        n = args.n
    else:
        group = make_group(args.group)
        n = group.order
        if n is None:
            raise CapabilityError(
                f"order of {args.group} is not available; pass --n explicitly"
            )
    k_a = args.ka if args.ka is not None else (args.k + 1) // 2
    k_b = args.kb if args.kb is not None else args.k - k_a
    model = expected_stats(n, k_a, k_b)
    _emit(
        {
            "schema_version": harness.SCHEMA_VERSION,
            "n": n,
            "log2n": round(math.log2(n), 4),
            "k_a": k_a,
            "k_b": k_b,
            "r": model.r,
            "expected_c": model.expected_c,
            "expected_rho_tot": model.expected_rho_tot,
        },
        args.out,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subsetprod",
        description="Find short product representations in generic finite groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=0, help="global seed")
        p.add_argument("--out", type=str, default=None, help="append output to this file")

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--group", required=True, help="zn:<n> curve:<p> cl:<D> gl2:<p>")
    p.add_argument("--k", type=int, required=True, help="sequence length")
    p.add_argument("--seq-kind", default="auto",
                   choices=["auto", "random", "curve-points", "class-primes", "toy"])
    p.add_argument("--seq-seed", type=int, default=0)
    p.add_argument("--alg", default="rho", choices=["bsgs", "bsgs-rand", "rho", "rho-parallel"])
    p.add_argument("--eta", default="keyed-hash", choices=["keyed-hash", "toy-linear"])
    p.add_argument("--multiplier", type=int, default=96)
    p.add_argument("--start", type=str, default=None, help="walk start, e.g. B:1,2,3,6")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dist-bits", type=int, default=None)
    p.add_argument("--precompute-m", type=int, default=None)
    p.add_argument("--budget", type=int, default=None,
                   help="restart budget (rho) or step budget (bsgs-rand)")
    p.add_argument("--max-table", type=int, default=1 << 22)
    p.add_argument("--checkpoint", type=str, default=None)
    add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="expected vs observed benchmark table")
    p.add_argument("--rows", nargs="*", default=None,
                   help="filter rows by label substring, e.g. 'GL2(F_37)'")
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--precompute-m", type=int, default=12)
    p.add_argument("--scale-cap", type=float, default=None,
                   help=f"max log2 n (default 32; env {SCALE_CAP_ENV})")
    p.add_argument("--unsafe-scale", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("conjecture-scan", help="minimal covering prefix per discriminant")
    p.add_argument("--limit", type=int, default=100000, help="scan D in [-limit, -3]")
    add_common(p)
    p.set_defaults(func=cmd_conjecture_scan)

    p = sub.add_parser("verify-paper-run", help="check a published answer string")
    p.add_argument("which", choices=["curve80", "class160"])
    p.add_argument("--hex", type=str, default=None, help="override the published string")
    p.add_argument("--bit-order", default="both", choices=["msb", "lsb", "both"])
    add_common(p)
    p.set_defaults(func=cmd_verify_paper_run)

    p = sub.add_parser("toy", help="run the walkthrough instance")
    p.add_argument("--eta", default="toy-linear", choices=["toy-linear", "keyed-hash"])
    p.add_argument("--multiplier", type=int, default=96)
    p.add_argument("--expect-paper", action=argparse.BooleanOptionalAction, default=True,
                   help="compare the walk against the published one")
    add_common(p)
    p.set_defaults(func=cmd_toy)

    p = sub.add_parser("stats", help="expected collision statistics")
    p.add_argument("--group", type=str, default=None)
    p.add_argument("--n", type=int, default=None, help="group order override")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--ka", type=int, default=None)
    p.add_argument("--kb", type=int, default=None)
    add_common(p)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "stats" and args.k is None and (args.ka is None or args.kb is None):
        parser.error("stats needs --k or both --ka and --kb")
    if args.command == "stats" and args.group is None and args.n is None:
        parser.error("stats needs --group or --n")
    try:
        return args.func(args)
    except (UsageError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotFoundError as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except CapabilityError as exc:
        print(f"capability: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY


if __name__ == "__main__":
    sys.exit(main())
