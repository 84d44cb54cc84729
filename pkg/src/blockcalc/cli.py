"""CLI entry point."""
import functools
import logging
import sys
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from . import __version__
from .config.manager import ConfigManager
from .config.schema import DEFAULT_GRIDS, ExperimentKind, ExperimentSpec, Sweep, SweepParameter
from .errors import BlockCalcError, ConfigError
from .experiments.runner import (
    RunOptions,
    case_pattern,
    cmd_latency,
    cmd_overlap_table,
    overlap_table,
    run_spec,
)
from .experiments.session_logger import SessionLogger
from .history.database import RunHistory
from .model.conflict import success_rate_summary
from .model.distributions import round_half_up
from .model.latency import (
    BlockDesign,
    CostCoefficients,
    EnvironmentParams,
    FittedLatencyModel,
    expected_latency,
    fitted_from_costs,
    recommend_batch_size,
    saturation_check,
    wait_time,
)
from .simulation.clients import ClientBehavior, ClientKind
from .simulation.core import SimConfig, run_trial, trial_rng
from .simulation.experiment import run_experiment
from .simulation.trace import export_trace

console = Console()
err_console = Console(stderr=True)

KINDS = {
    "all-write": (ExperimentKind.CASE1_ALL_WRITE, ClientKind.ALL_WRITE),
    "read-write": (ExperimentKind.CASE2_READ_WRITE, ClientKind.READ_THEN_WRITE_RETRY),
    "split-rw": (ExperimentKind.CASE3_SPLIT_RW, ClientKind.INDEPENDENT_READ_WRITE),
}


def _setup_logging(level: str):
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def handle_errors(func):
    """Turn blockcalc and validation errors into a red message and an exit code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except BlockCalcError as e:
            err_console.print(f"[red]Error:[/red] {e}", highlight=False)
            sys.exit(e.exit_code)
        except ValidationError as e:
            err_console.print(f"[red]Invalid parameters:[/red] {e}", highlight=False)
            sys.exit(ConfigError.exit_code)

    return wrapper


def simulation_options(func):
    """--seed/--trials/--ops/--workers/--out, falling back to BLOCKCALC_* settings."""
    options = [
        click.option("--seed", type=int, default=None, help="Master seed"),
        click.option("--trials", type=click.IntRange(min=1), default=None, help="Trials per point"),
        click.option("--ops", type=click.IntRange(min=1), default=None, help="Validated operations per trial"),
        click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes"),
        click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None, help="Output directory"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run_options(settings, seed, trials, ops, workers, out_dir) -> RunOptions:
    return RunOptions(
        seed=settings.seed if seed is None else seed,
        trials=trials or settings.trials,
        ops=ops or settings.ops,
        workers=workers or settings.workers,
        output_dir=out_dir or settings.output_dir,
        bp_rate=settings.bp_rate,
    )


@contextmanager
def recorded_run(settings, command: str, target: Optional[str] = None, **params):
    """Session log plus history row around one invocation; yields (session, files)."""
    session = SessionLogger(command, settings.log_dir)
    session.log_parameters(**params)
    history = RunHistory(settings.history_path) if settings.history_enabled else None
    run_id = history.start_run(command, target, params, session.get_log_path()) if history else None
    files: list[Path] = []
    status = "error"
    try:
        yield session, files
        status = "ok"
    except Exception as e:
        session.log_exception(e)
        raise
    finally:
        session.log_session_end(status)
        if history:
            if files:
                history.add_files(run_id, files)
            history.finish_run(run_id, status)
            history.close()


@click.group()
@click.pass_context
def main(ctx):
    """blockcalc - block-creation design calculator and conflict simulator."""
    manager = ConfigManager()
    try:
        settings = manager.load()
    except ValidationError as e:
        err_console.print(f"[red]Invalid BLOCKCALC_* settings:[/red] {e}", highlight=False)
        sys.exit(ConfigError.exit_code)
    _setup_logging(settings.log_level)
    ctx.obj = manager


# ---------------------------------------------------------------- model


@main.group()
def model():
    """Evaluate the analytic models."""


@model.command("success")
@click.option("--kind", type=click.Choice(list(KINDS)), default="all-write", show_default=True)
@click.option("--alpha", type=float, default=1.03, show_default=True)
@click.option("--range", "n_keys", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--bs", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--rp", type=float, default=0.5, show_default=True, help="Read probability (ignored for all-write)")
@handle_errors
def model_success(kind, alpha, n_keys, bs, rp):
    """Pairwise failure probabilities and expected block success rate."""
    pattern = case_pattern(KINDS[kind][0], alpha, n_keys, rp)
    summary = success_rate_summary(pattern, bs)

    table = Table(title=f"{kind}: alpha={alpha} range={n_keys} BS={bs}")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for name, value in summary.items():
        table.add_row(name, f"{value:.6f}")
    console.print(table)


@model.command("latency")
@click.option("--bs", type=click.IntRange(min=1), required=True)
@click.option("--bto", type=float, default=2.0, show_default=True, help="Batch timeout (s)")
@click.option("--rate", type=float, required=True, help="Arrival rate (txn/s)")
@click.option("--c0", type=float, default=None, help="Fitted seconds per transaction")
@click.option("--c1", type=float, default=None, help="Fitted seconds per block")
@click.option("--m0", type=float, default=0.0, help="Block metadata bits")
@click.option("--c0-cycles", type=float, default=0.0, help="CPU cycles per block")
@click.option("--c1-cycles-per-bit", type=float, default=0.0, help="Signature cycles per bit")
@click.option("--ts", type=float, default=8000.0, show_default=True, help="Transaction size (bits)")
@click.option("--nb", type=float, default=1e9, show_default=True, help="Network bandwidth (bit/s)")
@click.option("--db", type=float, default=8e8, show_default=True, help="Disk bandwidth (bit/s)")
@click.option("--cs", type=float, default=2.2e9, show_default=True, help="CPU speed (cycles/s)")
@click.option("--bp-rate", type=float, default=None, help="Peer block processing rate (blocks/s)")
@click.option("--recommend", default=None, help="Comma-separated candidate batch sizes")
@click.pass_obj
@handle_errors
def model_latency(manager, bs, bto, rate, c0, c1, m0, c0_cycles, c1_cycles_per_bit,
                  ts, nb, db, cs, bp_rate, recommend):
    """Expected transaction latency and saturation diagnostic."""
    if (c0 is None) != (c1 is None):
        raise click.UsageError("--c0 and --c1 must be given together")
    settings = manager.load()
    bp_rate = bp_rate or settings.bp_rate

    env = EnvironmentParams(
        arrival_rate_r=rate, txn_size_ts=ts, net_bandwidth_nb=nb,
        disk_bandwidth_db=db, cpu_speed_cs=cs,
    )
    design = BlockDesign(batch_size_bs=bs, batch_timeout_bto=bto)
    if c0 is not None:
        fitted = FittedLatencyModel(c0=c0, c1=c1)
    else:
        fitted = fitted_from_costs(
            env, CostCoefficients(m0=m0, c0_cycles=c0_cycles, c1_cycles_per_bit=c1_cycles_per_bit)
        )

    diag = saturation_check(env, design, bp_rate)
    table = Table(title=f"BS={bs} BTO={bto}s R={rate} txn/s")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    table.add_row("wait (s)", f"{wait_time(env, design):.6f}")
    table.add_row("latency (s)", f"{expected_latency(env, design, fitted):.6f}")
    table.add_row("c0 (s/txn)", f"{fitted.c0:.6g}")
    table.add_row("c1 (s)", f"{fitted.c1:.6g}")
    table.add_row("margin R/(BS*BP_RATE)", f"{diag.margin:.4f}")
    table.add_row("saturated", "[red]yes[/red]" if diag.saturated else "no")
    console.print(table)
    if diag.saturated:
        console.print("[yellow]Arrival rate exceeds BS*BP_RATE; blocks queue at the peer "
                      "and the model under-predicts latency.[/yellow]")

    # Optional batch-size recommendation
    if recommend:
        try:
            candidates = [int(v) for v in recommend.split(",") if v.strip()]
        except ValueError:
            raise click.BadParameter("expected integers like 1,2,4,8", param_hint="--recommend")
        rec = recommend_batch_size(env, bto, fitted, candidates, bp_rate)
        note = " [red](every candidate saturates)[/red]" if rec.saturated else ""
        console.print(f"Recommended BS: [bold]{rec.bs}[/bold] ({rec.latency:.6f} s){note}")


# ------------------------------------------------------------- simulate


@main.command()
@click.option("--kind", type=click.Choice(list(KINDS)), default="all-write", show_default=True)
@click.option("--alpha", type=float, default=1.03, show_default=True)
@click.option("--range", "n_keys", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--bs", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--rp", type=float, default=0.5, show_default=True)
@click.option("--clients", type=click.IntRange(min=1), default=None, help="Clients (default max(BS, 16))")
@click.option("--trace", "trace_path", type=click.Path(path_type=Path), default=None,
              help="Write the blocks of trial 0 to this file")
@simulation_options
@click.pass_obj
@handle_errors
def simulate(manager, kind, alpha, n_keys, bs, rp, clients, trace_path,
             seed, trials, ops, workers, out_dir):
    """Run Monte Carlo trials and print the success-rate percentiles."""
    settings = manager.load()
    options = _run_options(settings, seed, trials, ops, workers, out_dir)
    experiment_kind, client_kind = KINDS[kind]
    pattern = case_pattern(experiment_kind, alpha, n_keys, rp)
    config = SimConfig(
        behavior=ClientBehavior(kind=client_kind, pattern=pattern),
        bs=bs,
        num_clients=clients,
        total_operations=options.ops,
        seed=options.seed,
    )

    # Log the run and record it in history
    with recorded_run(settings, "simulate", kind, alpha=alpha, range=n_keys, bs=bs, rp=rp,
                      clients=config.num_clients, **options.model_dump(mode="json")) as (session, files):
        summary = run_experiment(config, trials=options.trials, workers=options.workers)
        rates = success_rate_summary(pattern, bs)
        session.log_parameters(**summary.model_dump())

        if trace_path is not None:
            traces = []
            run_trial(config, trial_rng(options.seed, 0), traces)
            files.append(export_trace(traces, trace_path))
            session.log_output(trace_path)

    table = Table(title=f"{kind}: {options.trials} trials, {config.num_clients} clients")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    table.add_row("model rate", f"{rates['model_rate']:.6f}")
    table.add_row("exact i.i.d. rate", f"{rates['exact_rate']:.6f}")
    for name in ("p1", "p50", "p99", "mean", "std"):
        table.add_row(f"simulated {name}", f"{getattr(summary, name):.6f}")
    console.print(table)


# ----------------------------------------------------------- experiment


@main.command()
@click.argument("target")
@simulation_options
@click.pass_obj
@handle_errors
def experiment(manager, target, seed, trials, ops, workers, out_dir):
    """Run a preset (see `blockcalc presets`) or a YAML experiment file."""
    settings = manager.load()
    options = _run_options(settings, seed, trials, ops, workers, out_dir)
    specs = manager.resolve(target)

    outcomes = []
    with recorded_run(settings, "experiment", target, **options.model_dump(mode="json")) as (session, files):
        for spec in specs:
            console.print(f"Running [bold]{spec.name}[/bold] ({spec.kind.value}, "
                          f"{len(spec.sweep.values)} points)")
            outcome = run_spec(spec, options, session)
            files.extend(outcome.files)
            outcomes.append(outcome)

    table = Table(title=f"{target}: {len(outcomes)} table(s)")
    table.add_column("name")
    table.add_column("rows", justify="right")
    table.add_column("files")
    for outcome in outcomes:
        table.add_row(outcome.name, str(outcome.rows), ", ".join(p.name for p in outcome.files))
    console.print(table)
    console.print(f"Results in {options.output_dir}")


# ------------------------------------------------------------------ fit


@main.command()
@click.argument("measurements", type=click.Path(path_type=Path))
@click.option("--bp-rate", type=float, default=None, help="Peer block processing rate (blocks/s)")
@click.option("--exclude-saturated", is_flag=True, help="Leave saturated rows out of the fit")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None, help="Output directory")
@click.pass_obj
@handle_errors
def fit(manager, measurements, bp_rate, exclude_saturated, out_dir):
    """Fit latency = wait + c0*BS + c1 to a measurement file."""
    settings = manager.load()
    bp_rate = bp_rate or settings.bp_rate
    out_dir = out_dir or settings.output_dir

    with recorded_run(settings, "fit", str(measurements), bp_rate=bp_rate,
                      exclude_saturated=exclude_saturated, output_dir=str(out_dir)) as (session, files):
        fitted, outcome = cmd_latency(measurements, out_dir, bp_rate, exclude_saturated, session=session)
        files.extend(outcome.files)

    console.print(f"c0 = [bold]{fitted.c0:.6g}[/bold] s/txn, c1 = [bold]{fitted.c1:.6g}[/bold] s, "
                  f"RMSE = {fitted.fit_residual:.3g} s over {fitted.samples} samples")
    console.print(f"Wrote {', '.join(str(p) for p in outcome.files)}")


# -------------------------------------------------------------- overlap


@main.command()
@click.option("--alpha", "alphas", type=float, multiple=True, help="Alpha values (repeatable)")
@click.option("--range", "n_keys", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--rp", type=float, default=0.5, show_default=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None,
              help="Also write overlap.csv and its plot script here")
@handle_errors
def overlap(alphas, n_keys, rp, out_dir):
    """Write-write conflict and read/write overlap for reversed Zipf keys."""
    alphas = tuple(sorted(set(alphas))) or DEFAULT_GRIDS[SweepParameter.ALPHA]
    frame = overlap_table(alphas, n_keys, rp)

    table = Table(title=f"range={n_keys} RP={rp}")
    for column in ("alpha", "P(WW key conflict)", "p_ww", "overlap"):
        table.add_column(column, justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(
            f"{row.alpha:g}",
            f"{row.p_ww_key_conflict:.4f}",
            f"{row.p_ww:.4f}",
            f"{round_half_up(row.overlap, 2):.2f}",
        )
    console.print(table)

    if out_dir is not None:
        spec = ExperimentSpec(
            name="overlap",
            kind=ExperimentKind.OVERLAP_TABLE,
            sweep=Sweep(parameter=SweepParameter.ALPHA, values=alphas),
            fixed={"range": n_keys, "rp": rp},
        )
        outcome = cmd_overlap_table(spec, RunOptions(output_dir=out_dir))
        console.print(f"Wrote {', '.join(str(p) for p in outcome.files)}")


# ---------------------------------------------------------- bookkeeping


@main.group(invoke_without_command=True)
@click.pass_context
def presets(ctx):
    """List the built-in experiment presets."""
    if ctx.invoked_subcommand is not None:
        return
    from .config.presets import PRESET_DESCRIPTIONS, PRESETS

    table = Table(title="Presets")
    table.add_column("name")
    table.add_column("specs", justify="right")
    table.add_column("description")
    for name in ConfigManager.preset_names():
        table.add_row(name, str(len(PRESETS[name])), PRESET_DESCRIPTIONS.get(name, ""))
    console.print(table)


@presets.command("show")
@click.argument("name")
@click.pass_obj
@handle_errors
def presets_show(manager, name):
    """Print a preset as an editable YAML experiment file."""
    click.echo(manager.dump_preset(name), nl=False)


@main.command()
@click.option("--cleanup", "keep", type=click.IntRange(min=0), default=None,
              help="Delete all but the N most recent runs (starred runs are kept)")
@click.option("--star", "star_id", type=int, default=None, help="Star a run so cleanup keeps it")
@click.option("--limit", type=click.IntRange(min=1), default=20, show_default=True)
@click.pass_obj
@handle_errors
def history(manager, keep, star_id, limit):
    """List recent runs."""
    settings = manager.load()
    with RunHistory(settings.history_path) as db:
        if star_id is not None:
            if not db.star_run(star_id):
                raise ConfigError(f"no run with id {star_id}")
            console.print(f"Starred run {star_id}")
            return
        if keep is not None:
            deleted = db.cleanup_old_runs(keep_recent=keep)
            console.print(f"Deleted {deleted} old run(s)" if deleted else "No old runs to delete")
            return

        runs = db.get_recent_runs(limit=limit)
        if not runs:
            console.print("No runs recorded yet.")
            return

        table = Table(title="Recent runs")
        for column in ("id", "started", "command", "target", "status", "files"):
            table.add_column(column)
        for run in runs:
            started = datetime.fromisoformat(run["start_time"]).strftime("%Y-%m-%d %H:%M:%S")
            star = "* " if run["starred"] else ""
            table.add_row(
                f"{star}{run['id']}", started, run["command"], run["target"] or "",
                run["status"], str(run["file_count"]),
            )
        console.print(table)


@main.command()
def version():
    """Show version."""
    click.echo(f"blockcalc {__version__}")


if __name__ == "__main__":
    main()
