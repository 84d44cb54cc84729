"""Analytic models: key distributions, conflict success rate, latency."""
from .conflict import (
    AccessPattern,
    FailureProbs,
    all_write,
    exact_block_successes,
    exact_success_rate,
    expected_block_successes,
    kth_txn_success_prob,
    model_success_rate,
    pairwise_failure_probs,
    read_write,
    split_read_write,
)
from .distributions import (
    ProbabilityVector,
    ZipfSpec,
    overlap_area,
    sample_key,
    sample_keys,
    trapezoid_area,
    uniform_pmf,
    zipf_pmf,
)
from .latency import (
    BlockDesign,
    CostCoefficients,
    EnvironmentParams,
    FittedLatencyModel,
    LatencySample,
    cpu_time,
    expected_latency,
    expected_latency_from_costs,
    fit_linear_coeffs,
    io_time,
    recommend_batch_size,
    saturation_check,
)

__all__ = [
    "AccessPattern",
    "BlockDesign",
    "CostCoefficients",
    "EnvironmentParams",
    "FailureProbs",
    "FittedLatencyModel",
    "LatencySample",
    "ProbabilityVector",
    "ZipfSpec",
    "all_write",
    "cpu_time",
    "exact_block_successes",
    "exact_success_rate",
    "expected_block_successes",
    "expected_latency",
    "expected_latency_from_costs",
    "fit_linear_coeffs",
    "io_time",
    "kth_txn_success_prob",
    "model_success_rate",
    "overlap_area",
    "pairwise_failure_probs",
    "read_write",
    "recommend_batch_size",
    "sample_key",
    "sample_keys",
    "saturation_check",
    "split_read_write",
    "trapezoid_area",
    "uniform_pmf",
    "zipf_pmf",
]
