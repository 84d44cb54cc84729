"""Repeated trials and percentile aggregation."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigError
from .core import SimConfig, TrialSummary, run_trial, trial_rng

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 50
PERCENTILES = (1, 50, 99)


class PercentileSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    p1: float = Field(ge=0.0, le=1.0)
    p50: float = Field(ge=0.0, le=1.0)
    p99: float = Field(ge=0.0, le=1.0)
    trials: int = Field(ge=1)
    mean: float = 0.0
    std: float = 0.0

    @model_validator(mode="after")
    def _ordered(self):
        if not self.p1 <= self.p50 <= self.p99:
            raise ValueError("percentiles must satisfy p1 <= p50 <= p99")
        return self

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.p1 - slack <= value <= self.p99 + slack


def _run_indexed_trial(args: tuple[SimConfig, int]) -> TrialSummary:
    # Module level so ProcessPoolExecutor can pickle it.
    config, trial = args
    return run_trial(config, trial_rng(config.seed, trial))


def run_trials(config: SimConfig, trials: int, workers: int = 1) -> list[TrialSummary]:
    """Per-trial summaries in trial order, independent of the worker count."""
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    jobs = [(config, i) for i in range(trials)]
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_indexed_trial, jobs))
    return [_run_indexed_trial(job) for job in jobs]


def summarize(rates) -> PercentileSummary:
    """Nearest-rank percentiles ("inverted_cdf" in numpy terms)."""
    rates = np.sort(np.asarray(rates, dtype=np.float64))
    p1, p50, p99 = (float(np.percentile(rates, q, method="inverted_cdf")) for q in PERCENTILES)
    return PercentileSummary(
        p1=p1,
        p50=p50,
        p99=p99,
        trials=int(rates.size),
        mean=float(rates.mean()),
        std=float(rates.std(ddof=1)) if rates.size > 1 else 0.0,
    )


def run_experiment(
    config: SimConfig, trials: int = DEFAULT_TRIALS, workers: int = 1
) -> PercentileSummary:
    summaries = run_trials(config, trials, workers)
    summary = summarize([s.rate for s in summaries])
    logger.debug(
        "bs=%d trials=%d: p1=%.4f p50=%.4f p99=%.4f",
        config.bs, trials, summary.p1, summary.p50, summary.p99,
    )
    return summary
