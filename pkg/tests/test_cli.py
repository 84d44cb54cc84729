import pandas as pd
import pytest
from click.testing import CliRunner

from blockcalc import __version__
from blockcalc.cli import main

from conftest import synthetic_rows, write_measurements


@pytest.fixture
def runner(home_dir):
    return CliRunner()


def test_version(runner):
    result = runner.invoke(main, ["version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_model_success(runner):
    result = runner.invoke(main, ["model", "success", "--kind", "split-rw", "--alpha", "1.05"])
    assert result.exit_code == 0, result.output
    assert "ww_key_conflict" in result.output
    assert "model_rate" in result.output


def test_model_success_rejects_bad_alpha(runner):
    result = runner.invoke(main, ["model", "success", "--alpha", "1.0"])
    assert result.exit_code == 2


def test_model_latency(runner):
    result = runner.invoke(
        main, ["model", "latency", "--bs", "10", "--bto", "2", "--rate", "8", "--c0", "0.01", "--c1", "0.05"]
    )
    assert result.exit_code == 0, result.output
    assert "0.775000" in result.output


def test_model_latency_saturation_and_recommendation(runner):
    result = runner.invoke(
        main,
        ["model", "latency", "--bs", "1", "--rate", "16", "--c0", "0.003", "--c1", "0.12",
         "--recommend", "1,2,4,8"],
    )
    assert result.exit_code == 0, result.output
    assert "yes" in result.output
    assert "Recommended BS: 2" in result.output


def test_model_latency_needs_both_coefficients(runner):
    result = runner.invoke(main, ["model", "latency", "--bs", "1", "--rate", "8", "--c0", "0.1"])
    assert result.exit_code == 2


def test_simulate_with_trace(runner, tmp_path):
    trace = tmp_path / "trace.csv"
    result = runner.invoke(
        main,
        ["simulate", "--bs", "4", "--range", "10", "--trials", "3", "--ops", "40", "--trace", str(trace)],
    )
    assert result.exit_code == 0, result.output
    assert "simulated p50" in result.output
    assert len(pd.read_csv(trace)) == 40


def test_experiment_preset(runner, tmp_path, home_dir):
    out = tmp_path / "results"
    result = runner.invoke(main, ["experiment", "table3", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert (out / "table3.csv").exists()
    assert (out / "table3_plot.py").exists()
    assert list((home_dir / "logs").glob("experiment_*.log"))

    listing = runner.invoke(main, ["history"])
    assert listing.exit_code == 0
    assert "table3" in listing.output


def test_experiment_file(runner, tmp_path):
    spec = tmp_path / "exp.yaml"
    spec.write_text(
        "name: tiny\nkind: case1_all_write\nsweep: {parameter: bs, values: [1, 2]}\n",
        encoding="utf-8",
    )
    out = tmp_path / "out"
    result = runner.invoke(
        main, ["experiment", str(spec), "--out", str(out), "--trials", "2", "--ops", "20"]
    )
    assert result.exit_code == 0, result.output
    assert pd.read_csv(out / "tiny.csv")["value"].tolist() == [1.0, 2.0]


def test_experiment_unknown_target(runner):
    result = runner.invoke(main, ["experiment", "no-such-preset"])
    assert result.exit_code == 2


def test_fit(runner, tmp_path):
    path = write_measurements(tmp_path / "m.csv", synthetic_rows())
    out = tmp_path / "fit"
    result = runner.invoke(main, ["fit", str(path), "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert (out / "latency_fit_coefficients.csv").exists()
    assert "c0 = 0.003" in result.output


def test_fit_empty_file_is_a_data_error(runner, tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("", encoding="utf-8")
    result = runner.invoke(main, ["fit", str(path), "--out", str(tmp_path)])
    assert result.exit_code == 3


def test_overlap(runner, tmp_path):
    result = runner.invoke(main, ["overlap", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert "0.75" in result.output
    assert len(pd.read_csv(tmp_path / "overlap.csv")) == 5


def test_presets(runner):
    result = runner.invoke(main, ["presets"])
    assert result.exit_code == 0
    for name in ("fig1", "fig7", "fig8", "fig9", "fig10", "fig11", "table3"):
        assert name in result.output

    shown = runner.invoke(main, ["presets", "show", "fig11"])
    assert shown.exit_code == 0
    assert "case3_split_rw" in shown.output

    missing = runner.invoke(main, ["presets", "show", "fig2"])
    assert missing.exit_code == 2


def test_history_cleanup(runner, tmp_path):
    for _ in range(3):
        runner.invoke(main, ["overlap"])
        runner.invoke(main, ["experiment", "table3", "--out", str(tmp_path)])
    result = runner.invoke(main, ["history", "--cleanup", "1"])
    assert result.exit_code == 0
    assert "Deleted 2 old run(s)" in result.output


def test_history_star_unknown_run(runner):
    result = runner.invoke(main, ["history", "--star", "999"])
    assert result.exit_code == 2
    assert "Starred" not in result.output


def test_simulate_read_write_rejects_uneven_mix(runner):
    result = runner.invoke(main, ["simulate", "--kind", "read-write", "--rp", "0.9", "--trials", "1", "--ops", "8"])
    assert result.exit_code == 2
