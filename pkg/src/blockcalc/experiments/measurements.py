"""Latency measurement files: one averaged measurement per row."""
from __future__ import annotations

import re
from pathlib import Path
from typing import Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import MeasurementParseError
from ..model.latency import BlockDesign, EnvironmentParams, LatencySample

MEASUREMENT_COLUMNS = ["bs", "bto_seconds", "arrival_rate", "measured_latency_seconds"]
_PANDAS_LINE = re.compile(r"line (\d+)")


class MeasurementRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    bs: int = Field(ge=1)
    bto_seconds: float = Field(gt=0)
    arrival_rate: float = Field(gt=0)
    measured_latency_seconds: float = Field(ge=0)

    def to_sample(self) -> LatencySample:
        return LatencySample(
            design=BlockDesign(batch_size_bs=self.bs, batch_timeout_bto=self.bto_seconds),
            env=EnvironmentParams(arrival_rate_r=self.arrival_rate),
            measured_latency=self.measured_latency_seconds,
        )


def _first_error(e: ValidationError) -> str:
    err = e.errors()[0]
    where = ".".join(str(p) for p in err["loc"])
    return f"{where}: {err['msg']}"


def read_measurements(path: Union[str, Path]) -> list[MeasurementRow]:
    """Parse a measurement file; errors carry the 1-based line (header = 1)."""
    path = Path(path)
    try:
        frame = pd.read_csv(
            path, dtype=str, keep_default_na=False, skip_blank_lines=False, encoding="utf-8"
        )
    except pd.errors.EmptyDataError:
        raise MeasurementParseError("empty measurement file", line=1) from None
    except pd.errors.ParserError as e:
        match = _PANDAS_LINE.search(str(e))
        raise MeasurementParseError(
            str(e).strip(), line=int(match.group(1)) if match else None
        ) from e
    except (OSError, UnicodeDecodeError) as e:
        raise MeasurementParseError(f"cannot read {path}: {e}") from e

    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in MEASUREMENT_COLUMNS if c not in frame.columns]
    if missing:
        raise MeasurementParseError(f"missing column(s): {', '.join(missing)}", line=1)

    rows = []
    for offset, record in enumerate(frame[MEASUREMENT_COLUMNS].to_dict("records")):
        line = offset + 2
        values = {k: ("" if pd.isna(v) else str(v).strip()) for k, v in record.items()}
        if not any(values.values()):
            continue
        empty = [k for k, v in values.items() if v == ""]
        if empty:
            raise MeasurementParseError(f"missing value for {', '.join(empty)}", line=line)
        try:
            rows.append(MeasurementRow.model_validate(values))
        except ValidationError as e:
            raise MeasurementParseError(_first_error(e), line=line) from None

    if not rows:
        raise MeasurementParseError("no measurement rows", line=1)
    return rows


def read_samples(path: Union[str, Path]) -> list[LatencySample]:
    return [row.to_sample() for row in read_measurements(path)]
