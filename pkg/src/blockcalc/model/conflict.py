"""Closed-form intra-block transaction success model.

For an ordered pair (a, b) in one block, b fails when a read a key b writes
(RWFail), wrote a key b reads (WRFail) or wrote a key b writes (WWFail). Slot k
succeeds when it conflicts with none of its k - 1 predecessors, counting
predecessors that failed themselves.
"""
from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigError
from .distributions import ProbabilityVector

logger = logging.getLogger(__name__)

WP_TOLERANCE = 1e-12


class AccessPattern(BaseModel):
    """Read/write mix and key distributions of one client population."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rp: float = Field(ge=0.0, le=1.0)
    wp: float = Field(ge=0.0, le=1.0)
    read_keys: ProbabilityVector
    write_keys: ProbabilityVector

    @model_validator(mode="before")
    @classmethod
    def _default_wp(cls, data):
        if isinstance(data, dict) and data.get("wp") is None and "rp" in data:
            data = {**data, "wp": 1.0 - float(data["rp"])}
        return data

    @model_validator(mode="after")
    def _check_wp(self):
        if abs(self.wp - (1.0 - self.rp)) > WP_TOLERANCE:
            raise ValueError(f"wp must equal 1 - rp ({1.0 - self.rp}), got {self.wp}")
        return self

    @property
    def shared_keys(self) -> bool:
        return self.read_keys == self.write_keys


def all_write(write_keys: ProbabilityVector) -> AccessPattern:
    return AccessPattern(rp=0.0, read_keys=write_keys, write_keys=write_keys)


def read_write(keys: ProbabilityVector, rp: float = 0.5) -> AccessPattern:
    return AccessPattern(rp=rp, read_keys=keys, write_keys=keys)


def split_read_write(
    read_keys: ProbabilityVector, write_keys: ProbabilityVector, rp: float = 0.5
) -> AccessPattern:
    return AccessPattern(rp=rp, read_keys=read_keys, write_keys=write_keys)


class FailureProbs(BaseModel):
    """Pairwise failure probabilities of a later transaction b."""

    model_config = ConfigDict(frozen=True)

    p_rw: float = Field(ge=0.0, le=1.0)
    p_wr: float = Field(ge=0.0, le=1.0)
    p_ww: float = Field(ge=0.0, le=1.0)
    p_b_fail: float = Field(ge=0.0, le=1.0)
    # Collision probability of two writes; the WP**2-free form of p_ww.
    ww_key_conflict: float = Field(default=0.0, ge=0.0, le=1.0)

    @classmethod
    def from_total(cls, p_b_fail: float) -> "FailureProbs":
        """Failure probabilities known only through their sum."""
        return cls(p_rw=0.0, p_wr=0.0, p_ww=p_b_fail, p_b_fail=p_b_fail)


def _key_overlap(p: ProbabilityVector, q: ProbabilityVector) -> float:
    """Sum over shared keys of p(i) * q(i); keys missing on one side count as 0."""
    _, ip, iq = np.intersect1d(p.keys, q.keys, assume_unique=True, return_indices=True)
    return math.fsum((p.probs[ip] * q.probs[iq]).tolist())


def pairwise_failure_probs(pattern: AccessPattern) -> FailureProbs:
    rp, wp = pattern.rp, pattern.wp
    read_write_overlap = _key_overlap(pattern.read_keys, pattern.write_keys)
    ww_key_conflict = math.fsum((pattern.write_keys.probs ** 2).tolist())

    p_rw = rp * wp * read_write_overlap
    p_wr = wp * rp * read_write_overlap
    p_ww = wp * wp * ww_key_conflict
    p_b_fail = p_rw + p_wr + p_ww
    if p_b_fail > 1.0 + WP_TOLERANCE:
        raise ConfigError(f"pairwise failure probability {p_b_fail} exceeds 1")

    return FailureProbs(
        p_rw=p_rw,
        p_wr=p_wr,
        p_ww=p_ww,
        p_b_fail=min(p_b_fail, 1.0),
        ww_key_conflict=ww_key_conflict,
    )


def kth_txn_success_prob(fp: FailureProbs, k: int) -> float:
    if k < 1:
        raise ConfigError(f"slot index k must be >= 1, got {k}")
    return (1.0 - fp.p_b_fail) ** (k - 1)


def _geometric_sum(p_fail: float, bs: int) -> float:
    """sum_{k=1..bs} (1 - p_fail)**(k - 1) without cancellation for tiny p_fail."""
    if p_fail == 0.0:
        return float(bs)
    if p_fail >= 1.0:
        return 1.0
    return -math.expm1(bs * math.log1p(-p_fail)) / p_fail


def expected_block_successes(fp: FailureProbs, bs: int) -> float:
    if bs < 1:
        raise ConfigError(f"block size must be >= 1, got {bs}")
    return _geometric_sum(fp.p_b_fail, bs)


def model_success_rate(pattern: AccessPattern, bs: int) -> float:
    fp = pairwise_failure_probs(pattern)
    rate = expected_block_successes(fp, bs) / bs
    logger.debug("model rate bs=%d p_b_fail=%.6g -> %.6f", bs, fp.p_b_fail, rate)
    return rate


def typed_key_conflicts(pattern: AccessPattern) -> tuple[np.ndarray, np.ndarray]:
    """Weight and conflict probability of every typed key (op, key).

    Reads come first, then writes. For a read of key i an earlier transaction
    conflicts when it writes i; for a write of key i, when it touches i at all.
    """
    rp, wp = pattern.rp, pattern.wp
    reads, writes = pattern.read_keys, pattern.write_keys

    write_prob_of_read_keys = writes.probs_of(reads.keys)
    read_prob_of_write_keys = reads.probs_of(writes.keys)

    weights = np.concatenate([rp * reads.probs, wp * writes.probs])
    conflicts = np.concatenate(
        [
            wp * write_prob_of_read_keys,
            rp * read_prob_of_write_keys + wp * writes.probs,
        ]
    )
    keep = weights > 0.0
    return weights[keep], np.clip(conflicts[keep], 0.0, 1.0)


def exact_block_successes(pattern: AccessPattern, bs: int) -> float:
    """Exact expected successes per block for i.i.d. slots.

    Differs from `expected_block_successes` only when the chance that an earlier
    transaction conflicts depends on what the later one drew; there the
    closed form is a lower bound.
    """
    if bs < 1:
        raise ConfigError(f"block size must be >= 1, got {bs}")
    weights, conflicts = typed_key_conflicts(pattern)
    terms = [w * _geometric_sum(f, bs) for w, f in zip(weights.tolist(), conflicts.tolist())]
    return math.fsum(terms)


def exact_success_rate(pattern: AccessPattern, bs: int) -> float:
    return exact_block_successes(pattern, bs) / bs


def success_rate_summary(pattern: AccessPattern, bs: int, fp: Optional[FailureProbs] = None) -> dict:
    fp = fp or pairwise_failure_probs(pattern)
    expected = expected_block_successes(fp, bs)
    return {
        "p_rw": fp.p_rw,
        "p_wr": fp.p_wr,
        "p_ww": fp.p_ww,
        "p_b_fail": fp.p_b_fail,
        "ww_key_conflict": fp.ww_key_conflict,
        "expected_successes": expected,
        "model_rate": expected / bs,
        "exact_rate": exact_success_rate(pattern, bs),
    }
