"""Closed-loop client behaviors."""
from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..model.conflict import AccessPattern
from ..model.distributions import sample_key
from .block import Op, Transaction, Verdict

READ_THEN_WRITE_RP = 0.5


class ClientKind(str, Enum):
    ALL_WRITE = "AllWrite"
    READ_THEN_WRITE_RETRY = "ReadThenWriteRetry"
    INDEPENDENT_READ_WRITE = "IndependentReadWrite"


class ClientBehavior(BaseModel):
    """How every client in a simulation picks its transactions."""

    model_config = ConfigDict(frozen=True)

    kind: ClientKind
    pattern: AccessPattern

    @model_validator(mode="after")
    def _check_pattern(self):
        if self.kind is ClientKind.ALL_WRITE and self.pattern.rp != 0.0:
            raise ValueError("AllWrite clients need rp == 0")
        if self.kind is ClientKind.READ_THEN_WRITE_RETRY:
            if not self.pattern.shared_keys:
                raise ValueError("ReadThenWriteRetry clients need read_keys == write_keys")
            # Reads and writes alternate, so half of all submissions are reads.
            if self.pattern.rp != READ_THEN_WRITE_RP:
                raise ValueError(
                    f"ReadThenWriteRetry clients read half the time; rp must be "
                    f"{READ_THEN_WRITE_RP}, got {self.pattern.rp}"
                )
        return self


class Client(ABC):
    """A client with at most one transaction in flight."""

    def __init__(self, client_id: int, pattern: AccessPattern):
        self.client_id = client_id
        self.pattern = pattern
        self.pending: Optional[Transaction] = None

    def next_transaction(self, rng: np.random.Generator) -> Transaction:
        """The in-flight transaction, generated on first demand."""
        if self.pending is None:
            self.pending = self.generate(rng)
        return self.pending

    @abstractmethod
    def generate(self, rng: np.random.Generator) -> Transaction:
        """Draw a fresh transaction."""

    @abstractmethod
    def on_verdict(self, verdict: Verdict) -> None:
        """React to the validation result of the in-flight transaction."""


class AllWriteClient(Client):
    def generate(self, rng):
        return Transaction(self.client_id, Op.WRITE, sample_key(self.pattern.write_keys, rng))

    def on_verdict(self, verdict):
        self.pending = None


class IndependentReadWriteClient(Client):
    """Each transaction independently reads (with probability rp) or writes."""

    def generate(self, rng):
        if rng.random() < self.pattern.rp:
            return Transaction(self.client_id, Op.READ, sample_key(self.pattern.read_keys, rng))
        return Transaction(self.client_id, Op.WRITE, sample_key(self.pattern.write_keys, rng))

    def on_verdict(self, verdict):
        self.pending = None


class ReadThenWriteRetryClient(Client):
    """Reads a key, then writes the same key; resubmits until each succeeds."""

    def generate(self, rng):
        return Transaction(self.client_id, Op.READ, sample_key(self.pattern.read_keys, rng))

    def on_verdict(self, verdict):
        txn = self.pending
        if verdict is not Verdict.SUCCESS:
            self.pending = txn.retried()
        elif txn.op is Op.READ:
            self.pending = Transaction(self.client_id, Op.WRITE, txn.key)
        else:
            self.pending = None


_CLIENT_TYPES: dict[ClientKind, type[Client]] = {
    ClientKind.ALL_WRITE: AllWriteClient,
    ClientKind.READ_THEN_WRITE_RETRY: ReadThenWriteRetryClient,
    ClientKind.INDEPENDENT_READ_WRITE: IndependentReadWriteClient,
}


def create_client(behavior: ClientBehavior, client_id: int) -> Client:
    """Create a client instance for the behavior kind."""
    try:
        client_type = _CLIENT_TYPES[behavior.kind]
    except KeyError:
        raise ValueError(f"Unknown client kind: {behavior.kind}") from None
    return client_type(client_id, behavior.pattern)
