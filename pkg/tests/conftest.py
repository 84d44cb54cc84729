"""Shared fixtures."""
from pathlib import Path

import pytest

from blockcalc.model.distributions import ZipfSpec, zipf_pmf

TABLE3_ALPHAS = (1.01, 1.03, 1.05, 1.07, 1.09)
TABLE3_WW = (0.0108, 0.0164, 0.0248, 0.0339, 0.0431)
TABLE3_OVERLAP = (0.75, 0.36, 0.16, 0.07, 0.03)


@pytest.fixture
def zipf100():
    return zipf_pmf(ZipfSpec(range=100, alpha=1.03))


@pytest.fixture
def zipf100_reversed():
    return zipf_pmf(ZipfSpec(range=100, alpha=1.03, reversed=True))


@pytest.fixture
def home_dir(tmp_path, monkeypatch) -> Path:
    """Point BLOCKCALC_HOME_DIR at a temp dir so logs and history stay out of ~."""
    home = tmp_path / "home"
    monkeypatch.setenv("BLOCKCALC_HOME_DIR", str(home))
    return home


def write_measurements(path: Path, rows, header="bs,bto_seconds,arrival_rate,measured_latency_seconds"):
    lines = [header] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def synthetic_rows(c0=0.003, c1=0.12, rate=8.0, bto=2.0, sizes=(1, 2, 4, 8, 16, 32)):
    return [(bs, bto, rate, min(bto, bs / rate) / 2 + c0 * bs + c1) for bs in sizes]
