"""Experiment grids, the bench runner, CSV and plot data, and Markdown reports."""

from binbench.harness.csv_io import CSV_HEADER, read_csv, write_csv, write_records
from binbench.harness.grid import (
    ExperimentGrid,
    GridError,
    OptReference,
    Source,
    TrialRecord,
    default_reference,
    load_grid,
    resolve_source,
)
from binbench.harness.plot_data import GROUP_KEYS, SummaryRow, emit_plot_data, summarize
from binbench.harness.report import render_report, write_report
from binbench.harness.runner import (
    CellFailed,
    Reference,
    cell_arrivals,
    cell_seed,
    compute_reference,
    grid_cells,
    run_bench,
    run_cell,
)

__all__ = [
    "CSV_HEADER", "read_csv", "write_csv", "write_records",
    "ExperimentGrid", "GridError", "OptReference", "Source", "TrialRecord", "default_reference",
    "load_grid", "resolve_source",
    "GROUP_KEYS", "SummaryRow", "emit_plot_data", "summarize",
    "render_report", "write_report",
    "CellFailed", "Reference", "cell_arrivals", "cell_seed", "compute_reference", "grid_cells", "run_bench", "run_cell",
]
