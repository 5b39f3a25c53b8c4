"""CLI: figures plot-conjecture <csv> <out>; figures render-table <csv> <out>."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import SchemaError, plot_conjecture, render_table


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="figures")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot-conjecture", help="scatter of minimal k against log2 h")
    p.add_argument("csv", type=Path)
    p.add_argument("out", type=Path)
    p.set_defaults(fn=lambda a: plot_conjecture(a.csv, a.out))
    p = sub.add_parser("render-table", help="markdown comparison table")
    p.add_argument("csv", type=Path)
    p.add_argument("out", type=Path)
    p.set_defaults(fn=lambda a: render_table(a.csv, a.out))
    args = parser.parse_args(argv)
    try:
        count = args.fn(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out} ({count} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
