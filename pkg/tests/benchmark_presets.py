#!/usr/bin/env python3
"""
Preset Benchmark Script for blockcalc

Times the built-in presets and checks model/simulation agreement:
1. table3 reproduction (< 1 s)
2. fig11 alpha trend (< 1 min)
3. fig8 agreement band (< 5 min)
4. fig9 retry bias bound
5. fig7 key PMFs (< 1 s)

Usage:
    python tests/benchmark_presets.py [--out DIR]
"""

import argparse
import json
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pandas as pd

from blockcalc.config import PRESETS
from blockcalc.experiments import RunOptions, run_spec

TABLE3_WW = [0.0108, 0.0164, 0.0248, 0.0339, 0.0431]
TABLE3_OVERLAP = [0.75, 0.36, 0.16, 0.07, 0.03]
LIMITS = {"table3": 1.0, "fig7": 1.0, "fig11": 60.0, "fig8": 300.0, "fig9": 300.0}


def run_preset(name: str, out_dir: Path) -> tuple[float, list[pd.DataFrame]]:
    options = RunOptions(output_dir=out_dir)
    start = time.perf_counter()
    frames = []
    for spec in PRESETS[name]:
        run_spec(spec, options)
        frames.append(pd.read_csv(out_dir / f"{spec.name}.csv"))
    return time.perf_counter() - start, frames


def rises_then_falls(values) -> bool:
    peak = int(np.argmax(values))
    return 0 < peak < len(values) - 1 and all(np.diff(values[: peak + 1]) >= 0) and all(np.diff(values[peak:]) <= 0)


def check_table3(frames):
    (frame,) = frames
    return bool(
        np.all(np.abs(frame["p_ww_key_conflict"] - TABLE3_WW) <= 0.0005)
        and np.all(np.abs(frame["overlap"] - TABLE3_OVERLAP) <= 0.01)
    )


def check_fig11(frames):
    alpha = next(f for f in frames if len(f) == 5)
    return rises_then_falls(alpha["model"].to_numpy()) and rises_then_falls(alpha["p50"].to_numpy())


def check_fig8(frames):
    return all(
        ((f["model"] >= f["p1"] - 0.01) & (f["model"] <= f["p99"] + 0.01) & ((f["model"] - f["p50"]).abs() <= 0.03)).all()
        for f in frames
    )


def check_fig9(frames):
    in_bound = all(
        ((f["model"] >= f["p50"] - 0.005) & (f["model"] - f["p50"] <= 0.5 * (1.0 - f["model"]) + 0.01)).all()
        for f in frames
    )
    bs = next(f for f in frames if f["value"].max() == 64)
    low = bs[bs["value"] <= 8]
    return in_bound and bool(((low["model"] - low["p50"]).abs() <= 0.03).all())


def check_fig7(frames):
    (frame,) = frames
    return all(
        np.allclose(group["reversed"].to_numpy(), group["forward"].to_numpy()[::-1])
        for _, group in frame.groupby("alpha")
    )


CHECKS = {"table3": check_table3, "fig7": check_fig7, "fig11": check_fig11, "fig8": check_fig8, "fig9": check_fig9}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args()

    out_dir = args.out or Path(tempfile.mkdtemp(prefix="blockcalc-bench-"))
    results = {}
    for name, check in CHECKS.items():
        elapsed, frames = run_preset(name, out_dir)
        results[name] = {
            "seconds": round(elapsed, 2),
            "within_limit": elapsed < LIMITS[name],
            "agreement": check(frames),
        }
        print(f"{name:8s} {elapsed:8.2f}s  limit {LIMITS[name]:6.0f}s  agreement={results[name]['agreement']}")

    (out_dir / "benchmark_results.json").write_text(json.dumps(results, indent=2))
    print(f"\nResults saved to: {out_dir / 'benchmark_results.json'}")
    return 0 if all(r["within_limit"] and r["agreement"] for r in results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
