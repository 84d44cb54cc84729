"""Ranged Zipfian key distributions.

A ranged Zipfian distribution over keys 1..range gives key n a weight of
alpha**-n (forward) or alpha**-(range + 1 - n) (reversed). Probability vectors
double as the key -> probability maps used for read and write keys.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import trapezoid

from ..errors import ConfigError, DistributionMismatchError

NORMALIZATION_TOLERANCE = 1e-12


class ZipfSpec(BaseModel):
    """Parameters of a ranged, optionally reversed, Zipfian distribution."""

    model_config = ConfigDict(frozen=True)

    range: int = Field(ge=1, description="Number of keys; keys are 1..range")
    alpha: float = Field(gt=1.0, description="Skewness base")
    reversed: bool = False


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Probabilities over an explicit, ordered key list.

    The cumulative table used for sampling is built once, at construction.
    """

    keys: np.ndarray
    probs: np.ndarray
    cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        keys = np.asarray(self.keys, dtype=np.int64)
        probs = np.asarray(self.probs, dtype=np.float64)

        if probs.ndim != 1 or probs.size == 0:
            raise ConfigError("probability vector must be a non-empty 1-D sequence")
        if keys.shape != probs.shape:
            raise DistributionMismatchError(
                f"{keys.size} keys given for {probs.size} probabilities"
            )
        if np.unique(keys).size != keys.size:
            raise ConfigError("probability vector keys must be distinct")
        if np.any(probs < 0.0) or np.any(probs > 1.0):
            raise ConfigError("probabilities must lie in [0, 1]")
        total = math.fsum(probs.tolist())
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ConfigError(f"probabilities sum to {total!r}, not 1")

        cdf = np.cumsum(probs)
        cdf[-1] = 1.0
        for arr in (keys, probs, cdf):
            arr.setflags(write=False)

        object.__setattr__(self, "keys", keys)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "cdf", cdf)

    @classmethod
    def from_probs(
        cls, probs: Sequence[float], keys: Optional[Iterable[int]] = None
    ) -> "ProbabilityVector":
        probs = np.asarray(probs, dtype=np.float64)
        if keys is None:
            keys = np.arange(1, probs.size + 1)
        return cls(keys=np.asarray(list(keys)), probs=probs)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]) -> "ProbabilityVector":
        items = sorted(mapping.items())
        return cls.from_probs([p for _, p in items], [k for k, _ in items])

    @classmethod
    def uniform(cls, keys: Iterable[int]) -> "ProbabilityVector":
        keys = np.asarray(list(keys), dtype=np.int64)
        return cls(keys=keys, probs=np.full(keys.size, 1.0 / keys.size))

    def __len__(self) -> int:
        return int(self.probs.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProbabilityVector):
            return NotImplemented
        return np.array_equal(self.keys, other.keys) and np.array_equal(
            self.probs, other.probs
        )

    __hash__ = None

    def as_mapping(self) -> dict[int, float]:
        return dict(zip(self.keys.tolist(), self.probs.tolist()))

    def prob(self, key: int) -> float:
        """Probability of `key`; zero for keys outside the vector."""
        return float(self.probs_of([key])[0])

    def probs_of(self, keys: Iterable[int]) -> np.ndarray:
        """Probabilities of many keys at once, by binary search over the sorted keys."""
        keys = np.asarray(keys, dtype=np.int64)
        order = np.argsort(self.keys, kind="stable")
        sorted_keys = self.keys[order]
        pos = np.minimum(np.searchsorted(sorted_keys, keys), sorted_keys.size - 1)
        hit = sorted_keys[pos] == keys
        return np.where(hit, self.probs[order[pos]], 0.0)


def zipf_pmf(spec: ZipfSpec) -> ProbabilityVector:
    """Exact PMF of a ranged Zipfian distribution.

    The normalizer is an exactly rounded sum (`math.fsum`), which matters when
    alpha is close to 1 and the range is large. The reversed PMF is the forward
    one mirrored, so the two agree bit for bit under n -> range + 1 - n.
    """
    exponents = np.arange(1, spec.range + 1, dtype=np.float64)
    weights = np.exp(-exponents * math.log(spec.alpha))
    probs = weights / math.fsum(weights.tolist())
    if spec.reversed:
        probs = probs[::-1].copy()
    return ProbabilityVector.from_probs(probs)


def uniform_pmf(n_keys: int) -> ProbabilityVector:
    if n_keys < 1:
        raise ConfigError(f"range must be >= 1, got {n_keys}")
    return ProbabilityVector.uniform(range_keys(n_keys))


def range_keys(n_keys: int) -> np.ndarray:
    return np.arange(1, n_keys + 1, dtype=np.int64)


def sample_key(pmf: ProbabilityVector, rng: np.random.Generator) -> int:
    """Draw one key by inverse-CDF lookup; consumes exactly one uniform."""
    u = rng.random()
    idx = int(np.searchsorted(pmf.cdf, u, side="right"))
    return int(pmf.keys[min(idx, pmf.keys.size - 1)])


def sample_keys(pmf: ProbabilityVector, rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.random(n)
    idx = np.searchsorted(pmf.cdf, u, side="right")
    np.minimum(idx, pmf.keys.size - 1, out=idx)
    return pmf.keys[idx]


def trapezoid_area(p: ProbabilityVector) -> float:
    """Composite trapezoidal integral of a PMF over its integer key grid."""
    return float(trapezoid(p.probs, dx=1.0))


def overlap_area(p: ProbabilityVector, q: ProbabilityVector) -> float:
    """Area under min(p, q) on the key grid, by the composite trapezoidal rule."""
    if len(p) != len(q):
        raise DistributionMismatchError(
            f"cannot overlap vectors of length {len(p)} and {len(q)}"
        )
    if not np.array_equal(p.keys, q.keys):
        raise DistributionMismatchError("overlap needs both vectors on the same keys")
    return float(trapezoid(np.minimum(p.probs, q.probs), dx=1.0))


def round_half_up(value: float, digits: int = 2) -> float:
    """Round like a printed table does (0.125 -> 0.13), not banker's rounding."""
    scale = 10 ** digits
    return math.floor(value * scale + 0.5) / scale
