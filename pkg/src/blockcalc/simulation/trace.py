"""Block trace export for debugging simulations."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Union

import pandas as pd

from .block import BlockTrace

TRACE_COLUMNS = ["block_index", "slot", "client", "op", "key", "attempt", "verdict"]


def traces_to_frame(traces: Iterable[BlockTrace]) -> pd.DataFrame:
    rows = [
        (trace.index, slot, txn.client_id, txn.op.value, txn.key, txn.attempt, verdict.value)
        for trace in traces
        for slot, (txn, verdict) in enumerate(zip(trace.txns, trace.verdicts), start=1)
    ]
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def export_trace(traces: Iterable[BlockTrace], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    traces_to_frame(traces).to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    return path
