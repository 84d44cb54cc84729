"""Configuration schema: process settings and experiment specs."""
from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class ExperimentKind(str, Enum):
    CASE1_ALL_WRITE = "case1_all_write"
    CASE2_READ_WRITE = "case2_read_write"
    CASE3_SPLIT_RW = "case3_split_rw"
    LATENCY_SWEEP = "latency_sweep"
    OVERLAP_TABLE = "overlap_table"
    KEY_DISTRIBUTION = "key_distribution"


class SweepParameter(str, Enum):
    ALPHA = "alpha"
    BS = "bs"
    RANGE = "range"
    RP = "rp"
    ARRIVAL_RATE = "arrival_rate"


SWEEPABLE: dict[ExperimentKind, frozenset[SweepParameter]] = {
    ExperimentKind.CASE1_ALL_WRITE: frozenset({SweepParameter.ALPHA, SweepParameter.BS, SweepParameter.RANGE}),
    ExperimentKind.CASE2_READ_WRITE: frozenset({SweepParameter.ALPHA, SweepParameter.BS, SweepParameter.RANGE}),
    ExperimentKind.CASE3_SPLIT_RW: frozenset(
        {SweepParameter.ALPHA, SweepParameter.BS, SweepParameter.RANGE, SweepParameter.RP}
    ),
    ExperimentKind.LATENCY_SWEEP: frozenset({SweepParameter.BS, SweepParameter.ARRIVAL_RATE}),
    ExperimentKind.OVERLAP_TABLE: frozenset({SweepParameter.ALPHA}),
    ExperimentKind.KEY_DISTRIBUTION: frozenset({SweepParameter.ALPHA}),
}

# Values the figures hold fixed while another parameter is swept.
DEFAULT_FIXED: dict[str, float] = {
    "alpha": 1.03,
    "bs": 8,
    "range": 100,
    "rp": 0.5,
    "arrival_rate": 8.0,
    "bto": 2.0,
    "c0": 0.003,
    "c1": 0.12,
    "bp_rate": 11.85,
}
FIXED_PARAMETERS = frozenset(DEFAULT_FIXED) | {"num_clients"}
INTEGER_PARAMETERS = frozenset({"bs", "range", "num_clients"})

DEFAULT_GRIDS: dict[SweepParameter, tuple[float, ...]] = {
    SweepParameter.ALPHA: (1.01, 1.03, 1.05, 1.07, 1.09),
    SweepParameter.BS: (1, 2, 4, 8, 16, 32, 64),
    SweepParameter.RANGE: (25, 50, 100, 200, 400),
    SweepParameter.RP: (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    SweepParameter.ARRIVAL_RATE: (8, 16, 32),
}


class Sweep(BaseModel):
    model_config = ConfigDict(frozen=True)

    parameter: SweepParameter
    values: tuple[float, ...] = Field(min_length=1)

    @field_validator("values")
    @classmethod
    def _increasing(cls, values):
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        return values

    @model_validator(mode="after")
    def _integral(self):
        if self.parameter.value in INTEGER_PARAMETERS:
            if any(v != int(v) or v < 1 for v in self.values):
                raise ValueError(f"{self.parameter.value} sweep values must be positive integers")
        return self


class ExperimentSpec(BaseModel):
    """One sweep of one experiment kind; produces one result table."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(pattern=r"^[A-Za-z0-9_.-]+$")
    kind: ExperimentKind
    sweep: Sweep
    fixed: dict[str, float] = Field(default_factory=dict)
    measurements: Optional[Path] = None
    output_dir: Optional[Path] = None
    # key_distribution only: forward and reversed curves on one axis.
    overlay: bool = False

    @field_validator("fixed")
    @classmethod
    def _known_fixed(cls, fixed):
        unknown = sorted(set(fixed) - FIXED_PARAMETERS)
        if unknown:
            raise ValueError(f"unknown fixed parameters: {', '.join(unknown)}")
        return fixed

    @model_validator(mode="after")
    def _sweepable(self):
        allowed = SWEEPABLE[self.kind]
        if self.sweep.parameter not in allowed:
            names = ", ".join(sorted(p.value for p in allowed))
            raise ValueError(
                f"{self.kind.value} cannot sweep {self.sweep.parameter.value} (allowed: {names})"
            )
        # Read-then-write clients alternate reads and writes.
        if self.kind is ExperimentKind.CASE2_READ_WRITE and self.param("rp") != 0.5:
            raise ValueError(f"{self.kind.value} simulates rp=0.5; got fixed rp={self.param('rp')}")
        return self

    def param(self, name: str) -> float:
        """A fixed parameter, falling back to the figure defaults."""
        return self.fixed.get(name, DEFAULT_FIXED.get(name))

    def int_param(self, name: str) -> int:
        return int(self.param(name))


class ExperimentFile(BaseModel):
    experiments: list[ExperimentSpec] = Field(min_length=1)


class BlockCalcSettings(BaseSettings):
    """Process-wide settings from BLOCKCALC_* variables or a .env file."""

    model_config = SettingsConfigDict(env_prefix="BLOCKCALC_", env_file=".env", extra="ignore")

    seed: int = Field(default=1, ge=0, lt=2**64)
    trials: int = Field(default=50, ge=1)
    ops: int = Field(default=1000, ge=1)
    workers: int = Field(default=1, ge=1)
    output_dir: Path = Path("results")
    home_dir: Path = Path.home() / ".blockcalc"
    log_level: str = "INFO"
    bp_rate: float = Field(default=11.85, gt=0)
    history_enabled: bool = True

    @property
    def log_dir(self) -> Path:
        return self.home_dir / "logs"

    @property
    def history_path(self) -> Path:
        return self.home_dir / "history.db"
