import math
import subprocess
import sys
from pathlib import Path

import pytest

from figures.render import (
    SchemaError,
    load_scan,
    load_table,
    plot_conjecture,
    render_table,
)

RESULTS = Path(__file__).resolve().parents[2] / "results"

SCAN_CSV = "schema_version,d,h,minimal_k\n1,-23,3,2\n1,-3,1,0\n"
TABLE_CSV = (
    "schema_version,group,log2n,k,d,exp_c,exp_rho,obs_c,obs_rho,runs\n"
    "1,gl2:37,20.7972,42,2.0195,2.8689,4052.5,2.8400,4063.0,1000\n"
)
SYNTH_ROW = (
    "schema_version,group,log2n,k,d,exp_c,exp_rho,obs_c,obs_rho,runs\n"
    "1,zn:100,10,20,2.0,2.0,100,2.0,105,7\n"
)


def test_load_scan_and_point_values(tmp_path):
    p = tmp_path / "scan.csv"
    p.write_text(SCAN_CSV)
    rows = load_scan(p)
    assert (rows[0].d, rows[0].h, rows[0].minimal_k) == (-23, 3, 2)
    assert math.isclose(math.log2(rows[0].h), math.log2(3))


def test_schema_mismatch(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(SchemaError):
        load_scan(p)
    with pytest.raises(SchemaError):
        load_table(p)


def test_plot_empty_csv_exit_zero(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("schema_version,d,h,minimal_k\n")
    out = tmp_path / "empty.svg"
    assert plot_conjecture(p, out) == 0
    assert out.stat().st_size > 0


def test_plot_deterministic(tmp_path):
    p = tmp_path / "scan.csv"
    p.write_text(SCAN_CSV)
    out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
    plot_conjecture(p, out1)
    plot_conjecture(p, out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_plot_deterministic_across_processes(tmp_path):
    p = tmp_path / "scan.csv"
    p.write_text(SCAN_CSV)
    outs = [tmp_path / "p1.svg", tmp_path / "p2.svg"]
    for out in outs:
        proc = subprocess.run(
            [sys.executable, "-m", "figures.cli", "plot-conjecture", str(p), str(out)],
            capture_output=True,
        )
        assert proc.returncode == 0, proc.stderr
    assert outs[0].read_bytes() == outs[1].read_bytes()


def test_render_table_rel_error(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text(SYNTH_ROW)
    out = tmp_path / "t.md"
    assert render_table(p, out) == 1
    text = out.read_text()
    assert "0.050" in text  # |105 - 100| / 100
    lines = text.splitlines()
    assert lines[0].startswith("| group")
    assert len(lines) == 3


def test_render_table_single_row(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text(TABLE_CSV)
    out = tmp_path / "t.md"
    assert render_table(p, out) == 1
    out2 = tmp_path / "t2.md"
    render_table(p, out2)
    assert out.read_bytes() == out2.read_bytes()


def test_cli_roundtrip(tmp_path):
    p = tmp_path / "scan.csv"
    p.write_text(SCAN_CSV)
    out = tmp_path / "scan.svg"
    proc = subprocess.run(
        [sys.executable, "-m", "figures.cli", "plot-conjecture", str(p), str(out)],
        capture_output=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
    bad = tmp_path / "bad.csv"
    bad.write_text("x\n")
    proc = subprocess.run(
        [sys.executable, "-m", "figures.cli", "render-table", str(bad), str(out)],
        capture_output=True,
    )
    assert proc.returncode == 1


# -- acceptance: rendered artifacts from the real harness outputs -------------


def test_acceptance_scan_points_below_reference_line(tmp_path):
    scan_csv = RESULTS / "conjecture_scan.csv"
    assert scan_csv.exists(), (
        "missing results/conjecture_scan.csv; regenerate with "
        "`subsetprod conjecture-scan --limit 100000 --out results/conjecture_scan.csv`"
    )
    rows = load_scan(scan_csv)
    assert len(rows) > 30_000
    for r in rows:
        if r.h > 1:
            assert r.minimal_k <= 2 * math.log2(r.h) + 1e-9, r
    out1 = tmp_path / "scan1.svg"
    out2 = tmp_path / "scan2.svg"
    assert plot_conjecture(scan_csv, out1) == len(rows)
    plot_conjecture(scan_csv, out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_acceptance_table_relative_errors(tmp_path):
    table_csv = RESULTS / "table_desk.csv"
    assert table_csv.exists(), (
        "missing results/table_desk.csv; regenerate by running the primary "
        "acceptance suite (tests/test_acceptance.py::test_desk_scale_reproduction)"
    )
    rows = load_table(table_csv)
    assert len(rows) == 9
    for r in rows:
        assert r.rel_err_c <= 0.05, r
        assert r.rel_err_rho <= 0.05, r
    out1 = tmp_path / "t1.md"
    out2 = tmp_path / "t2.md"
    render_table(table_csv, out1)
    render_table(table_csv, out2)
    assert out1.read_bytes() == out2.read_bytes()
