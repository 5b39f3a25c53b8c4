"""Rendering for the harness CSV outputs.

Input schemas (produced by the subsetprod CLI):
  conjecture scan: schema_version, d, h, minimal_k
  benchmark table: schema_version, group, log2n, k, d, exp_c, exp_rho,
                   obs_c, obs_rho, runs

Rendering is pure: the same CSV yields byte-identical output (no
timestamps, fixed SVG id salt).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List

SCAN_HEADER = ["schema_version", "d", "h", "minimal_k"]
TABLE_HEADER = [
    "schema_version", "group", "log2n", "k", "d",
    "exp_c", "exp_rho", "obs_c", "obs_rho", "runs",
]


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class ScanRow:
    d: int
    h: int
    minimal_k: int


@dataclass(frozen=True)
class TableRow:
    group: str
    log2n: float
    k: int
    d: float
    exp_c: float
    exp_rho: float
    obs_c: float
    obs_rho: float
    runs: int

    @property
    def rel_err_c(self) -> float:
        return abs(self.obs_c - self.exp_c) / self.exp_c

    @property
    def rel_err_rho(self) -> float:
        return abs(self.obs_rho - self.exp_rho) / self.exp_rho


def _check_header(path: Path, expected: List[str], actual: List[str]) -> None:
    if actual != expected:
        raise SchemaError(f"{path}: header {actual} does not match {expected}")


def load_scan(path: Path) -> List[ScanRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(path, SCAN_HEADER, header or [])
        rows = []
        for line in reader:
            if not line:
                continue
            try:
                rows.append(ScanRow(int(line[1]), int(line[2]), int(line[3])))
            except (IndexError, ValueError) as exc:
                raise SchemaError(f"{path}: bad scan row {line}") from exc
    return rows


def load_table(path: Path) -> List[TableRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(path, TABLE_HEADER, header or [])
        rows = []
        for line in reader:
            if not line:
                continue
            try:
                rows.append(
                    TableRow(
                        group=line[1],
                        log2n=float(line[2]),
                        k=int(line[3]),
                        d=float(line[4]),
                        exp_c=float(line[5]),
                        exp_rho=float(line[6]),
                        obs_c=float(line[7]),
                        obs_rho=float(line[8]),
                        runs=int(line[9]),
                    )
                )
            except (IndexError, ValueError) as exc:
                raise SchemaError(f"{path}: bad table row {line}") from exc
    return rows


def plot_conjecture(csv_path: Path, out_image: Path) -> int:
    """Scatter of (log2 h, minimal_k) with the k = log2 h and k = 2 log2 h
    reference lines; returns the number of points drawn."""
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "figures"
    import matplotlib.pyplot as plt

    rows = load_scan(csv_path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if rows:
        xs = [math.log2(r.h) if r.h > 1 else 0.0 for r in rows]
        ys = [r.minimal_k for r in rows]
        ax.scatter(xs, ys, s=4, alpha=0.25, linewidths=0, color="#1f3a6e", zorder=3)
        xmax = max(xs) * 1.05 + 0.2
    else:
        xmax = 10.0
    grid = [0.0, xmax]
    ax.plot(grid, grid, color="#777777", lw=1, label="k = log2 h")
    ax.plot(grid, [2 * x for x in grid], color="#bb4422", lw=1, label="k = 2 log2 h")
    ax.set_xlabel("log2 h")
    ax.set_ylabel("minimal k")
    ax.set_xlim(0, xmax)
    ax.set_ylim(0, max((r.minimal_k for r in rows), default=10) * 1.15 + 1)
    ax.legend(loc="upper left", frameon=False)
    fig.tight_layout()
    fig.savefig(out_image, format=out_image.suffix.lstrip(".") or "svg",
                metadata={"Date": None})
    plt.close(fig)
    return len(rows)


def render_table(csv_path: Path, out_path: Path) -> int:
    """Aligned markdown comparison table with relative-error columns;
    returns the number of body rows."""
    rows = load_table(csv_path)
    header = ["group", "log2n", "k", "d", "exp_c", "obs_c", "err_c",
              "exp_rho", "obs_rho", "err_rho", "runs"]
    body = [
        [
            r.group,
            f"{r.log2n:.2f}",
            str(r.k),
            f"{r.d:.2f}",
            f"{r.exp_c:.2f}",
            f"{r.obs_c:.2f}",
            f"{r.rel_err_c:.3f}",
            f"{r.exp_rho:.0f}",
            f"{r.obs_rho:.0f}",
            f"{r.rel_err_rho:.3f}",
            str(r.runs),
        ]
        for r in rows
    ]
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h)
              for i, h in enumerate(header)]
    lines = [
        "| " + " | ".join(h.ljust(w) for h, w in zip(header, widths)) + " |",
        "| " + " | ".join("-" * w for w in widths) + " |",
    ]
    for b in body:
        lines.append("| " + " | ".join(v.ljust(w) for v, w in zip(b, widths)) + " |")
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return len(body)
