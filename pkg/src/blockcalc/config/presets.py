"""Named experiment presets mirroring the published figures and tables."""
from __future__ import annotations

from .schema import DEFAULT_GRIDS, ExperimentKind, ExperimentSpec, Sweep, SweepParameter


def _spec(
    name: str, kind: ExperimentKind, parameter: SweepParameter, overlay: bool = False, **fixed
) -> ExperimentSpec:
    return ExperimentSpec(
        name=name,
        kind=kind,
        sweep=Sweep(parameter=parameter, values=DEFAULT_GRIDS[parameter]),
        fixed=fixed,
        overlay=overlay,
    )


def _success_sweeps(prefix: str, kind: ExperimentKind) -> list[ExperimentSpec]:
    return [
        _spec(f"{prefix}_alpha", kind, SweepParameter.ALPHA, bs=8, range=100),
        _spec(f"{prefix}_bs", kind, SweepParameter.BS, alpha=1.03, range=100),
        _spec(f"{prefix}_range", kind, SweepParameter.RANGE, alpha=1.03, bs=8),
    ]


PRESETS: dict[str, list[ExperimentSpec]] = {
    "fig8": _success_sweeps("fig8", ExperimentKind.CASE1_ALL_WRITE),
    "fig9": _success_sweeps("fig9", ExperimentKind.CASE2_READ_WRITE),
    "fig11": [
        _spec("fig11_rp", ExperimentKind.CASE3_SPLIT_RW, SweepParameter.RP, alpha=1.03, bs=8, range=100),
        _spec("fig11_alpha", ExperimentKind.CASE3_SPLIT_RW, SweepParameter.ALPHA, rp=0.5, bs=8, range=100),
    ],
    "table3": [
        _spec("table3", ExperimentKind.OVERLAP_TABLE, SweepParameter.ALPHA, rp=0.5, range=100),
    ],
    "fig7": [
        _spec("fig7", ExperimentKind.KEY_DISTRIBUTION, SweepParameter.ALPHA, range=100),
    ],
    "fig10": [
        _spec("fig10", ExperimentKind.KEY_DISTRIBUTION, SweepParameter.ALPHA, overlay=True, range=100),
    ],
    # Illustrative coefficients; fit real ones with `blockcalc fit`.
    "fig1": [
        _spec(
            "fig1_bs",
            ExperimentKind.LATENCY_SWEEP,
            SweepParameter.BS,
            arrival_rate=8.0,
            bto=2.0,
            c0=0.003,
            c1=0.12,
            bp_rate=11.85,
        ),
    ],
}

PRESET_DESCRIPTIONS: dict[str, str] = {
    "fig8": "all-write clients; success rate vs alpha, BS and range",
    "fig9": "read-then-write clients with retries; success rate vs alpha, BS and range",
    "fig11": "reversed read/write key distributions; success rate vs RP and alpha",
    "table3": "write-write conflict probability and read/write overlap area vs alpha",
    "fig7": "ranged Zipf key PMFs, forward and reversed side by side, per alpha",
    "fig10": "forward (solid) and reversed (dashed) ranged Zipf key PMFs on one axis",
    "fig1": "predicted average latency vs BS at 8 txn/s",
}
