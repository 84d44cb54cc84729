"""Single Monte Carlo trial of block assembly and validation."""
from __future__ import annotations

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigError
from .block import BlockTrace, validate_block
from .clients import ClientBehavior, create_client

logger = logging.getLogger(__name__)

DEFAULT_TOTAL_OPERATIONS = 1000
DEFAULT_MIN_CLIENTS = 16


def default_num_clients(bs: int) -> int:
    return max(bs, DEFAULT_MIN_CLIENTS)


def trial_seed_sequence(master_seed: int, trial: int) -> np.random.SeedSequence:
    """Seed of trial `trial`; identical to SeedSequence(master_seed).spawn(n)[trial]."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(trial,))


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(trial_seed_sequence(master_seed, trial))


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    behavior: ClientBehavior
    bs: int = Field(ge=1)
    num_clients: int = Field(ge=1)
    total_operations: int = Field(default=DEFAULT_TOTAL_OPERATIONS, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="before")
    @classmethod
    def _default_clients(cls, data):
        if isinstance(data, dict) and data.get("num_clients") is None and "bs" in data:
            data = {**data, "num_clients": default_num_clients(int(data["bs"]))}
        return data

    @model_validator(mode="after")
    def _check_sizes(self):
        if self.num_clients < self.bs:
            raise ValueError(
                f"num_clients ({self.num_clients}) must be >= bs ({self.bs}) so a block "
                "never holds two transactions of one client"
            )
        if self.total_operations < self.bs:
            raise ValueError(
                f"total_operations ({self.total_operations}) must be >= bs ({self.bs})"
            )
        return self


class TrialSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    successes: int = Field(ge=0)
    validated: int = Field(ge=1)
    rate: float = Field(ge=0.0, le=1.0)


def run_trial(
    config: SimConfig,
    rng: Optional[np.random.Generator] = None,
    traces: Optional[list[BlockTrace]] = None,
) -> TrialSummary:
    """Run closed-loop clients until at least `total_operations` slots are validated.

    Every block draws `bs` distinct clients uniformly at random; slot order is
    the draw order. Without `rng` the trial uses trial 0 of `config.seed`.
    Pass a list as `traces` to collect every validated block.
    """
    if config.num_clients < config.bs:
        raise ConfigError(f"num_clients ({config.num_clients}) < bs ({config.bs})")
    if rng is None:
        # Same stream as trial 0 of run_trials.
        rng = trial_rng(config.seed, 0)

    # Initialize one client per id; each holds at most one pending transaction
    clients = [create_client(config.behavior, cid) for cid in range(config.num_clients)]
    successes = validated = block_index = 0

    while validated < config.total_operations:
        chosen = rng.choice(config.num_clients, size=config.bs, replace=False)
        block = [clients[cid].next_transaction(rng) for cid in chosen.tolist()]
        trace = validate_block(block, index=block_index)

        # Report verdicts back so clients can retry or move on
        for txn, verdict in zip(trace.txns, trace.verdicts):
            clients[txn.client_id].on_verdict(verdict)
        successes += trace.successes
        validated += config.bs
        block_index += 1
        if traces is not None:
            traces.append(trace)

    logger.debug(
        "trial done: %d blocks, %d/%d successful", block_index, successes, validated
    )
    return TrialSummary(successes=successes, validated=validated, rate=successes / validated)
