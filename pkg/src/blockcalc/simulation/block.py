"""Transactions, block validation and the exhaustive enumeration oracle."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from ..errors import ConfigError
from ..model.conflict import AccessPattern

MAX_ENUMERATED_SEQUENCES = 100_000


class Op(str, Enum):
    READ = "Read"
    WRITE = "Write"


class Verdict(str, Enum):
    SUCCESS = "Success"
    RW_FAIL = "RWFail"
    WR_FAIL = "WRFail"
    WW_FAIL = "WWFail"


@dataclass(frozen=True)
class Transaction:
    client_id: int
    op: Op
    key: int
    attempt: int = 1

    def retried(self) -> "Transaction":
        return Transaction(self.client_id, self.op, self.key, self.attempt + 1)


@dataclass(frozen=True)
class BlockTrace:
    txns: tuple[Transaction, ...]
    verdicts: tuple[Verdict, ...]
    index: int = field(default=0, compare=False)

    @property
    def successes(self) -> int:
        return sum(v is Verdict.SUCCESS for v in self.verdicts)


def validate_block(txns: Sequence[Transaction], index: int = 0) -> BlockTrace:
    """Apply the intra-block failure rules to an ordered block.

    Slot j fails when any earlier slot conflicts with it, failed or not. The
    verdict names the conflict with the earliest such slot: for a write that is
    the first access of its key, for a read the first write of its key.
    """
    if not txns:
        raise ConfigError("cannot validate an empty block")

    first_access: dict[int, Op] = {}
    first_write: set[int] = set()
    verdicts = []

    for txn in txns:
        # A write conflicts with any earlier access of its key
        if txn.op is Op.WRITE:
            earliest = first_access.get(txn.key)
            if earliest is None:
                verdicts.append(Verdict.SUCCESS)
            elif earliest is Op.READ:
                verdicts.append(Verdict.RW_FAIL)
            else:
                verdicts.append(Verdict.WW_FAIL)
            first_write.add(txn.key)
        else:
            # A read only conflicts with an earlier write
            verdicts.append(Verdict.WR_FAIL if txn.key in first_write else Verdict.SUCCESS)
        first_access.setdefault(txn.key, txn.op)

    return BlockTrace(txns=tuple(txns), verdicts=tuple(verdicts), index=index)


def _typed_keys(pattern: AccessPattern) -> list[tuple[Op, int, float]]:
    typed = []
    for key, p in pattern.read_keys.as_mapping().items():
        if pattern.rp * p > 0.0:
            typed.append((Op.READ, key, pattern.rp * p))
    for key, p in pattern.write_keys.as_mapping().items():
        if pattern.wp * p > 0.0:
            typed.append((Op.WRITE, key, pattern.wp * p))
    return typed


def enumerate_block_successes(pattern: AccessPattern, bs: int) -> float:
    """Expected successes per block by enumerating every typed-key sequence.

    Each sequence is weighted by its probability and validated with
    `validate_block`. Only for tiny instances.
    """
    if bs < 1:
        raise ConfigError(f"block size must be >= 1, got {bs}")
    typed = _typed_keys(pattern)
    if len(typed) ** bs > MAX_ENUMERATED_SEQUENCES:
        raise ConfigError(
            f"{len(typed)}**{bs} sequences exceed the enumeration limit "
            f"of {MAX_ENUMERATED_SEQUENCES}"
        )

    terms = []
    for seq in itertools.product(typed, repeat=bs):
        weight = math.prod(w for _, _, w in seq)
        trace = validate_block([Transaction(slot, op, key) for slot, (op, key, _) in enumerate(seq)])
        terms.append(weight * trace.successes)
    return math.fsum(terms)
