"""Experiment execution: sweeps, latency fits, result files and session logs."""
from .measurements import MEASUREMENT_COLUMNS, MeasurementRow, read_measurements, read_samples
from .output import ensure_output_dir, render_plot_script, write_plot_script, write_table
from .runner import (
    ExperimentOutcome,
    RunOptions,
    cmd_case_study,
    cmd_key_distribution,
    cmd_latency,
    cmd_latency_sweep,
    cmd_overlap_table,
    key_distribution_table,
    overlap_table,
    run_spec,
)
from .session_logger import SessionLogger

__all__ = [
    "ExperimentOutcome",
    "MEASUREMENT_COLUMNS",
    "MeasurementRow",
    "RunOptions",
    "SessionLogger",
    "cmd_case_study",
    "cmd_key_distribution",
    "cmd_latency",
    "cmd_latency_sweep",
    "cmd_overlap_table",
    "ensure_output_dir",
    "key_distribution_table",
    "overlap_table",
    "read_measurements",
    "read_samples",
    "render_plot_script",
    "run_spec",
    "write_plot_script",
    "write_table",
]
