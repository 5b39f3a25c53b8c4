"""Figure and table rendering for the subsetprod harness outputs."""

from .render import SchemaError, load_scan, load_table, plot_conjecture, render_table

__all__ = ["SchemaError", "load_scan", "load_table", "plot_conjecture", "render_table"]
