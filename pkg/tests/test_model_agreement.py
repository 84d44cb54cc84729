"""Model against simulation over the preset sweeps, at 50 trials x 1000 operations."""
import numpy as np
import pandas as pd
import pytest

from blockcalc.config import PRESETS
from blockcalc.experiments import RunOptions, run_spec

pytestmark = pytest.mark.slow


def _run_preset(name, out_dir):
    options = RunOptions(output_dir=out_dir)
    frames = {}
    for spec in PRESETS[name]:
        run_spec(spec, options)
        frames[spec.name] = pd.read_csv(out_dir / f"{spec.name}.csv")
    return frames


def _rises_then_falls(values):
    values = np.asarray(values)
    peak = int(np.argmax(values))
    steps = np.diff(values)
    return 0 < peak < len(values) - 1 and np.all(steps[:peak] >= 0) and np.all(steps[peak:] <= 0)


def test_all_write_model_inside_band_at_every_point(tmp_path):
    frames = _run_preset("fig8", tmp_path)
    assert set(frames) == {"fig8_alpha", "fig8_bs", "fig8_range"}
    for name, frame in frames.items():
        assert (frame["model"] >= frame["p1"] - 0.01).all(), name
        assert (frame["model"] <= frame["p99"] + 0.01).all(), name
        assert ((frame["model"] - frame["p50"]).abs() <= 0.03).all(), name


def test_retry_bias_keeps_model_above_median(tmp_path):
    frames = _run_preset("fig9", tmp_path)
    for name, frame in frames.items():
        gap = frame["model"] - frame["p50"]
        # Retries inflate conflicts, so the median sits below the model...
        assert (gap >= -0.005).all(), name
        # ...by an amount that grows with the model's own failure rate.
        assert (gap <= 0.5 * (1.0 - frame["model"]) + 0.01).all(), name

    low_contention = frames["fig9_bs"][frames["fig9_bs"]["value"] <= 8]
    assert ((low_contention["model"] - low_contention["p50"]) <= 0.03).all()


def test_retry_bias_grows_with_block_size(tmp_path):
    frame = _run_preset("fig9", tmp_path)["fig9_bs"].set_index("value")
    gap = frame["model"] - frame["p50"]
    assert gap[1] == 0.0
    assert gap[64] > gap[16] > 0.0


def test_split_rw_median_rises_then_falls_with_alpha(tmp_path):
    frame = _run_preset("fig11", tmp_path)["fig11_alpha"]
    assert _rises_then_falls(frame["model"])
    assert _rises_then_falls(frame["p50"])
