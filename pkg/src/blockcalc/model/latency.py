"""Average transaction latency of block creation.

Latency = batching wait + block I/O + block CPU, where the wait is
min(BTO, BS / R) / 2. I/O and CPU can be given as cycle/bit cost coefficients
or as a line c0 * BS + c1 fitted from measurements.
"""
from __future__ import annotations

import logging
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import ConfigError, DegenerateFitError, InsufficientSamplesError

logger = logging.getLogger(__name__)

# Peer-side block processing for BS=1 on the reference Fabric test network.
PEER_BLOCK_PROCESSING_MS = 84.32
REFERENCE_BP_RATE = 11.85
BLOCK_PROCESSING_BREAKDOWN_MS = {
    "state_validation": 0.09,
    "block_and_private_data_commit": 49.83,
    "state_commit": 15.75,
    "history_db": 15.79,
}
# The breakdown sums to 81.46 ms, not PEER_BLOCK_PROCESSING_MS; both are kept as measured.


class SignatureFunction(str, Enum):
    SHA256 = "SHA256"
    MD5 = "MD5"


class EnvironmentParams(BaseModel):
    """Environmental parameters: workload and hardware."""

    model_config = ConfigDict(frozen=True)

    arrival_rate_r: float = Field(gt=0, description="Transactions per second")
    txn_size_ts: float = Field(default=8000.0, ge=1, description="Bits per transaction")
    net_bandwidth_nb: float = Field(default=1e9, ge=1, description="Bits per second")
    disk_bandwidth_db: float = Field(default=8e8, ge=1, description="Bits per second")
    cpu_speed_cs: float = Field(default=2.2e9, ge=1, description="Cycles per second")


class BlockDesign(BaseModel):
    """Design parameters of the orderer's block cutter."""

    model_config = ConfigDict(frozen=True)

    batch_size_bs: int = Field(ge=1)
    batch_timeout_bto: float = Field(gt=0, description="Seconds")
    signature_fn: SignatureFunction = SignatureFunction.SHA256


class CostCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    m0: float = Field(default=0.0, ge=0, description="Block metadata size in bits")
    c0_cycles: float = Field(default=0.0, ge=0, description="Fixed CPU cycles per block")
    c1_cycles_per_bit: float = Field(default=0.0, ge=0, description="Signature cycles per data bit")


class FittedLatencyModel(BaseModel):
    """I/O + CPU time as c0 * BS + c1, in seconds."""

    model_config = ConfigDict(frozen=True)

    c0: float
    c1: float
    fit_residual: float = Field(default=0.0, ge=0)
    samples: int = 0
    distinct_bs: int = 0


class LatencySample(BaseModel):
    model_config = ConfigDict(frozen=True)

    design: BlockDesign
    env: EnvironmentParams
    measured_latency: float = Field(ge=0)


class SaturationDiagnostic(BaseModel):
    model_config = ConfigDict(frozen=True)

    saturated: bool
    margin: float


class BatchSizeRecommendation(BaseModel):
    model_config = ConfigDict(frozen=True)

    bs: int
    latency: float
    saturated: bool
    evaluated: dict[int, float]


def wait_time(env: EnvironmentParams, design: BlockDesign) -> float:
    """Mean time a transaction waits for its block to be cut."""
    fill_time = design.batch_size_bs / env.arrival_rate_r
    return min(design.batch_timeout_bto, fill_time) / 2.0


def _block_bits(env: EnvironmentParams, design: BlockDesign, coeffs: CostCoefficients) -> float:
    return coeffs.m0 + design.batch_size_bs * env.txn_size_ts


def io_time(env: EnvironmentParams, design: BlockDesign, coeffs: CostCoefficients) -> float:
    bits = _block_bits(env, design, coeffs)
    return bits / env.disk_bandwidth_db + bits / env.net_bandwidth_nb


def cpu_time(env: EnvironmentParams, design: BlockDesign, coeffs: CostCoefficients) -> float:
    data_bits = design.batch_size_bs * env.txn_size_ts
    return (coeffs.c0_cycles + coeffs.c1_cycles_per_bit * data_bits) / env.cpu_speed_cs


def expected_latency(
    env: EnvironmentParams, design: BlockDesign, fitted: FittedLatencyModel
) -> float:
    return wait_time(env, design) + fitted.c0 * design.batch_size_bs + fitted.c1


def expected_latency_from_costs(
    env: EnvironmentParams, design: BlockDesign, coeffs: CostCoefficients
) -> float:
    return wait_time(env, design) + io_time(env, design, coeffs) + cpu_time(env, design, coeffs)


def fitted_from_costs(env: EnvironmentParams, coeffs: CostCoefficients) -> FittedLatencyModel:
    """Rewrite cycle/bit coefficients as the per-BS line of the fitted form.

    io + cpu = BS * TS * (1/DB + 1/NB + c1_cycles_per_bit/CS)
             + m0 * (1/DB + 1/NB) + c0_cycles/CS
    """
    per_bit_io = 1.0 / env.disk_bandwidth_db + 1.0 / env.net_bandwidth_nb
    slope = env.txn_size_ts * (per_bit_io + coeffs.c1_cycles_per_bit / env.cpu_speed_cs)
    intercept = coeffs.m0 * per_bit_io + coeffs.c0_cycles / env.cpu_speed_cs
    return FittedLatencyModel(c0=slope, c1=intercept)


def fit_linear_coeffs(samples: Sequence[LatencySample]) -> FittedLatencyModel:
    """Least-squares fit of (latency - wait) = c0 * BS + c1.

    The known wait term is removed first, so the fit is a plain 1-D line and is
    solved with the closed-form normal equations.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise InsufficientSamplesError(f"need at least 2 samples, got {len(samples)}")

    x = np.array([s.design.batch_size_bs for s in samples], dtype=np.float64)
    y = np.array(
        [s.measured_latency - wait_time(s.env, s.design) for s in samples], dtype=np.float64
    )
    distinct = np.unique(x).size
    if distinct < 2:
        raise DegenerateFitError(f"all samples use BS={int(x[0])}; need 2 distinct values")

    x_mean, y_mean = x.mean(), y.mean()
    dx = x - x_mean
    slope = float(np.dot(dx, y - y_mean) / np.dot(dx, dx))
    intercept = float(y_mean - slope * x_mean)
    residuals = y - (slope * x + intercept)
    rmse = float(np.sqrt(np.mean(residuals ** 2)))

    logger.debug(
        "fitted c0=%.6g c1=%.6g rmse=%.3g over %d samples", slope, intercept, rmse, len(samples)
    )
    return FittedLatencyModel(
        c0=slope, c1=intercept, fit_residual=rmse, samples=len(samples), distinct_bs=distinct
    )


def saturation_check(
    env: EnvironmentParams, design: BlockDesign, bp_rate: float
) -> SaturationDiagnostic:
    """Flag R > BS * BP_RATE, where blocks queue and the model under-predicts."""
    if bp_rate <= 0:
        raise ConfigError(f"bp_rate must be positive, got {bp_rate}")
    capacity = design.batch_size_bs * bp_rate
    margin = env.arrival_rate_r / capacity
    return SaturationDiagnostic(saturated=env.arrival_rate_r > capacity, margin=margin)


def bp_rate_from_processing_time(seconds: float) -> float:
    if seconds <= 0:
        raise ConfigError(f"processing time must be positive, got {seconds}")
    return 1.0 / seconds


def recommend_batch_size(
    env: EnvironmentParams,
    bto: float,
    fitted: FittedLatencyModel,
    candidates: Iterable[int],
    bp_rate: Optional[float] = None,
) -> BatchSizeRecommendation:
    """Pick the batch size with the lowest predicted latency.

    Candidates that saturate the peer at `bp_rate` are skipped; when all of them
    do, the least saturated one is returned with saturated=True.
    """
    candidates = sorted(set(int(c) for c in candidates))
    if not candidates:
        raise ConfigError("no candidate batch sizes given")

    evaluated: dict[int, float] = {}
    margins: dict[int, float] = {}
    for bs in candidates:
        design = BlockDesign(batch_size_bs=bs, batch_timeout_bto=bto)
        evaluated[bs] = expected_latency(env, design, fitted)
        margins[bs] = saturation_check(env, design, bp_rate).margin if bp_rate else 0.0

    stable = [bs for bs in candidates if margins[bs] <= 1.0]
    if stable:
        best = min(stable, key=lambda bs: (evaluated[bs], bs))
        saturated = False
    else:
        best = min(candidates, key=lambda bs: (margins[bs], bs))
        saturated = True

    return BatchSizeRecommendation(
        bs=best, latency=evaluated[best], saturated=saturated, evaluated=evaluated
    )
