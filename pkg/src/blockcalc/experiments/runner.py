"""Experiment runner: case studies, overlap table and latency evaluations.

Every number written here comes straight from a library call; the runner only
chooses parameters, collects rows and writes files.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ..config.schema import ExperimentKind, ExperimentSpec, SweepParameter
from ..errors import ConfigError
from ..model.conflict import (
    AccessPattern,
    all_write,
    model_success_rate,
    pairwise_failure_probs,
    read_write,
    split_read_write,
)
from ..model.distributions import ZipfSpec, overlap_area, zipf_pmf
from ..model.latency import (
    BlockDesign,
    EnvironmentParams,
    FittedLatencyModel,
    expected_latency,
    fit_linear_coeffs,
    saturation_check,
    wait_time,
)
from ..simulation.clients import ClientBehavior, ClientKind
from ..simulation.core import SimConfig
from ..simulation.experiment import run_experiment
from .measurements import read_measurements, read_samples
from .output import ensure_output_dir, write_plot_script, write_table
from .session_logger import SessionLogger

logger = logging.getLogger(__name__)

CASE_STUDY_COLUMNS = ["value", "model", "p1", "p50", "p99"]
OVERLAP_COLUMNS = ["alpha", "p_ww_key_conflict", "p_ww", "overlap"]
LATENCY_SWEEP_COLUMNS = ["value", "wait", "latency", "saturated", "margin"]
LATENCY_FIT_COLUMNS = [
    "bs", "bto_seconds", "arrival_rate", "measured", "predicted", "relative_error", "saturated",
]
COEFFICIENT_COLUMNS = ["c0", "c1", "fit_residual", "samples"]
KEY_DISTRIBUTION_COLUMNS = ["alpha", "key", "forward", "reversed"]

_CLIENT_KINDS = {
    ExperimentKind.CASE1_ALL_WRITE: ClientKind.ALL_WRITE,
    ExperimentKind.CASE2_READ_WRITE: ClientKind.READ_THEN_WRITE_RETRY,
    ExperimentKind.CASE3_SPLIT_RW: ClientKind.INDEPENDENT_READ_WRITE,
}

_AXIS_LABELS = {
    SweepParameter.ALPHA: "alpha",
    SweepParameter.BS: "block size (BS)",
    SweepParameter.RANGE: "key range",
    SweepParameter.RP: "read probability (RP)",
    SweepParameter.ARRIVAL_RATE: "arrival rate (txn/s)",
}


class RunOptions(BaseModel):
    """Simulation knobs shared by every spec of one invocation."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=1, ge=0, lt=2**64)
    trials: int = Field(default=50, ge=1)
    ops: int = Field(default=1000, ge=1)
    workers: int = Field(default=1, ge=1)
    output_dir: Path = Path("results")
    bp_rate: float = Field(default=11.85, gt=0)


class ExperimentOutcome(BaseModel):
    name: str
    kind: str
    rows: int
    files: list[Path]


def case_pattern(kind: ExperimentKind, alpha: float, n_keys: int, rp: float) -> AccessPattern:
    """Access pattern of a case study at one parameter point."""
    keys = zipf_pmf(ZipfSpec(range=n_keys, alpha=alpha))
    if kind is ExperimentKind.CASE1_ALL_WRITE:
        return all_write(keys)
    if kind is ExperimentKind.CASE2_READ_WRITE:
        return read_write(keys, rp=rp)
    if kind is ExperimentKind.CASE3_SPLIT_RW:
        reversed_keys = zipf_pmf(ZipfSpec(range=n_keys, alpha=alpha, reversed=True))
        return split_read_write(keys, reversed_keys, rp=rp)
    raise ConfigError(f"{kind.value} is not a case study")


def _point_params(spec: ExperimentSpec, value: float) -> dict:
    params = {
        "alpha": spec.param("alpha"),
        "bs": spec.int_param("bs"),
        "range": spec.int_param("range"),
        "rp": spec.param("rp"),
        "arrival_rate": spec.param("arrival_rate"),
    }
    name = spec.sweep.parameter.value
    params[name] = int(value) if name in ("bs", "range") else float(value)
    if spec.kind is ExperimentKind.CASE1_ALL_WRITE:
        params["rp"] = 0.0
    return params


def case_study_point(
    kind: ExperimentKind,
    *,
    alpha: float,
    n_keys: int,
    bs: int,
    rp: float,
    options: RunOptions,
    num_clients: Optional[int] = None,
) -> dict:
    pattern = case_pattern(kind, alpha, n_keys, rp)
    config = SimConfig(
        behavior=ClientBehavior(kind=_CLIENT_KINDS[kind], pattern=pattern),
        bs=bs,
        num_clients=num_clients,
        total_operations=max(options.ops, bs),
        seed=options.seed,
    )
    summary = run_experiment(config, trials=options.trials, workers=options.workers)
    return {
        "model": model_success_rate(pattern, bs),
        "p1": summary.p1,
        "p50": summary.p50,
        "p99": summary.p99,
    }


def cmd_case_study(
    spec: ExperimentSpec, options: RunOptions, session: Optional[SessionLogger] = None
) -> ExperimentOutcome:
    """Model rate and simulated percentile band for every sweep value."""
    if spec.kind not in _CLIENT_KINDS:
        raise ConfigError(f"{spec.kind.value} is not a case study")
    out_dir = ensure_output_dir(spec.output_dir or options.output_dir)
    num_clients = spec.fixed.get("num_clients")

    rows = []
    for value in spec.sweep.values:
        # Every point reuses the master seed
        p = _point_params(spec, value)
        point = case_study_point(
            spec.kind,
            alpha=p["alpha"],
            n_keys=p["range"],
            bs=p["bs"],
            rp=p["rp"],
            options=options,
            num_clients=int(num_clients) if num_clients is not None else None,
        )
        rows.append({"value": value, **point})
        if session:
            session.log_point(spec.sweep.parameter.value, value, **point)
        logger.info("%s: %s=%s model=%.4f p50=%.4f", spec.name, spec.sweep.parameter.value,
                    value, point["model"], point["p50"])

    return _write_outputs(
        spec, out_dir, pd.DataFrame(rows, columns=CASE_STUDY_COLUMNS), "success_band", session
    )


def cmd_overlap_table(
    spec: ExperimentSpec, options: RunOptions, session: Optional[SessionLogger] = None
) -> ExperimentOutcome:
    """Write-write conflict probability and read/write overlap per alpha."""
    out_dir = ensure_output_dir(spec.output_dir or options.output_dir)
    frame = overlap_table(spec.sweep.values, spec.int_param("range"), spec.param("rp"))
    if session:
        for row in frame.to_dict("records"):
            session.log_point("alpha", row["alpha"], **row)
    return _write_outputs(spec, out_dir, frame, "overlap_table", session)


def overlap_table(alphas, n_keys: int = 100, rp: float = 0.5) -> pd.DataFrame:
    rows = []
    for alpha in alphas:
        forward = zipf_pmf(ZipfSpec(range=n_keys, alpha=alpha))
        backward = zipf_pmf(ZipfSpec(range=n_keys, alpha=alpha, reversed=True))
        fp = pairwise_failure_probs(split_read_write(forward, backward, rp=rp))
        rows.append(
            {
                "alpha": float(alpha),
                "p_ww_key_conflict": fp.ww_key_conflict,
                "p_ww": fp.p_ww,
                "overlap": overlap_area(forward, backward),
            }
        )
    return pd.DataFrame(rows, columns=OVERLAP_COLUMNS)


def cmd_key_distribution(
    spec: ExperimentSpec, options: RunOptions, session: Optional[SessionLogger] = None
) -> ExperimentOutcome:
    """Forward and reversed ranged Zipf PMFs, one block of rows per alpha."""
    out_dir = ensure_output_dir(spec.output_dir or options.output_dir)
    frame = key_distribution_table(spec.sweep.values, spec.int_param("range"))
    if session:
        for alpha, group in frame.groupby("alpha", sort=True):
            session.log_point("alpha", alpha, head=float(group["forward"].iloc[0]),
                              tail=float(group["forward"].iloc[-1]))
    style = "key_overlay" if spec.overlay else "key_distribution"
    return _write_outputs(spec, out_dir, frame, style, session)


def key_distribution_table(alphas, n_keys: int = 100) -> pd.DataFrame:
    frames = []
    for alpha in alphas:
        forward = zipf_pmf(ZipfSpec(range=n_keys, alpha=alpha))
        backward = zipf_pmf(ZipfSpec(range=n_keys, alpha=alpha, reversed=True))
        frames.append(
            pd.DataFrame(
                {
                    "alpha": float(alpha),
                    "key": forward.keys,
                    "forward": forward.probs,
                    "reversed": backward.probs,
                }
            )
        )
    return pd.concat(frames, ignore_index=True)[KEY_DISTRIBUTION_COLUMNS]


def cmd_latency_sweep(
    spec: ExperimentSpec, options: RunOptions, session: Optional[SessionLogger] = None
) -> ExperimentOutcome:
    """Predicted latency and saturation over a BS or arrival-rate sweep."""
    out_dir = ensure_output_dir(spec.output_dir or options.output_dir)
    if spec.measurements is not None:
        fitted = fit_linear_coeffs(read_samples(spec.measurements))
    else:
        fitted = FittedLatencyModel(c0=spec.param("c0"), c1=spec.param("c1"))
    bp_rate = spec.param("bp_rate")

    rows = []
    for value in spec.sweep.values:
        p = _point_params(spec, value)
        env = EnvironmentParams(arrival_rate_r=p["arrival_rate"])
        design = BlockDesign(batch_size_bs=p["bs"], batch_timeout_bto=spec.param("bto"))
        diag = saturation_check(env, design, bp_rate)
        rows.append(
            {
                "value": value,
                "wait": wait_time(env, design),
                "latency": expected_latency(env, design, fitted),
                "saturated": diag.saturated,
                "margin": diag.margin,
            }
        )
        if session:
            session.log_point(spec.sweep.parameter.value, value, **rows[-1])

    return _write_outputs(
        spec, out_dir, pd.DataFrame(rows, columns=LATENCY_SWEEP_COLUMNS), "latency_sweep", session
    )


def cmd_latency(
    measurements: Path,
    output_dir: Path,
    bp_rate: float,
    exclude_saturated: bool = False,
    name: str = "latency_fit",
    session: Optional[SessionLogger] = None,
) -> tuple[FittedLatencyModel, ExperimentOutcome]:
    """Fit the latency line to measurements and report per-row errors."""
    out_dir = ensure_output_dir(output_dir)
    records = read_measurements(measurements)
    samples = [r.to_sample() for r in records]
    flags = [saturation_check(s.env, s.design, bp_rate).saturated for s in samples]

    # Saturated rows queue at the peer, so they can be left out of the fit
    fit_samples = [s for s, flagged in zip(samples, flags) if not (exclude_saturated and flagged)]
    fitted = fit_linear_coeffs(fit_samples)
    if session:
        session.log_parameters(c0=fitted.c0, c1=fitted.c1, fit_residual=fitted.fit_residual)

    rows = []
    for record, sample, flagged in zip(records, samples, flags):
        predicted = expected_latency(sample.env, sample.design, fitted)
        measured = sample.measured_latency
        rows.append(
            {
                "bs": record.bs,
                "bto_seconds": record.bto_seconds,
                "arrival_rate": record.arrival_rate,
                "measured": measured,
                "predicted": predicted,
                "relative_error": (predicted - measured) / measured if measured > 0 else float("nan"),
                "saturated": flagged,
            }
        )
        if flagged and session:
            session.log_warning(
                f"bs={record.bs} at {record.arrival_rate} txn/s exceeds BS*BP_RATE; "
                "the model under-predicts queuing here"
            )

    outcome = _write_table_and_plot(
        name, "latency_fit", out_dir, pd.DataFrame(rows, columns=LATENCY_FIT_COLUMNS),
        "latency_fit", f"latency fit ({Path(measurements).name})", "", session,
    )
    coefficients = out_dir / f"{name}_coefficients.csv"
    write_table(
        pd.DataFrame(
            [[fitted.c0, fitted.c1, fitted.fit_residual, fitted.samples]],
            columns=COEFFICIENT_COLUMNS,
        ),
        coefficients,
    )
    if session:
        session.log_output(coefficients)
    outcome.files.append(coefficients)
    return fitted, outcome


_DISPATCH = {
    ExperimentKind.CASE1_ALL_WRITE: cmd_case_study,
    ExperimentKind.CASE2_READ_WRITE: cmd_case_study,
    ExperimentKind.CASE3_SPLIT_RW: cmd_case_study,
    ExperimentKind.OVERLAP_TABLE: cmd_overlap_table,
    ExperimentKind.LATENCY_SWEEP: cmd_latency_sweep,
    ExperimentKind.KEY_DISTRIBUTION: cmd_key_distribution,
}


def run_spec(
    spec: ExperimentSpec, options: RunOptions, session: Optional[SessionLogger] = None
) -> ExperimentOutcome:
    if session:
        session.log_spec(spec.name, spec.kind.value, spec.sweep.parameter.value, spec.sweep.values)
    return _DISPATCH[spec.kind](spec, options, session)


def _write_outputs(
    spec: ExperimentSpec,
    out_dir: Path,
    frame: pd.DataFrame,
    style: str,
    session: Optional[SessionLogger],
) -> ExperimentOutcome:
    return _write_table_and_plot(
        spec.name,
        spec.kind.value,
        out_dir,
        frame,
        style,
        f"{spec.name} ({spec.kind.value})",
        _AXIS_LABELS[spec.sweep.parameter],
        session,
    )


def _write_table_and_plot(
    name: str,
    kind: str,
    out_dir: Path,
    frame: pd.DataFrame,
    style: str,
    title: str,
    xlabel: str,
    session: Optional[SessionLogger],
) -> ExperimentOutcome:
    csv_path = write_table(frame, out_dir / f"{name}.csv")
    plot_path = write_plot_script(out_dir / f"{name}_plot.py", style, csv_path.name, title, xlabel)
    if session:
        session.log_output(csv_path)
        session.log_output(plot_path)
    return ExperimentOutcome(name=name, kind=kind, rows=len(frame), files=[csv_path, plot_path])
