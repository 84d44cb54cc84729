import math

import numpy as np
import pytest

from blockcalc.errors import ConfigError, DegenerateFitError, InsufficientSamplesError
from blockcalc.model.latency import (
    BLOCK_PROCESSING_BREAKDOWN_MS,
    PEER_BLOCK_PROCESSING_MS,
    REFERENCE_BP_RATE,
    BlockDesign,
    CostCoefficients,
    EnvironmentParams,
    FittedLatencyModel,
    LatencySample,
    bp_rate_from_processing_time,
    cpu_time,
    expected_latency,
    expected_latency_from_costs,
    fit_linear_coeffs,
    fitted_from_costs,
    io_time,
    recommend_batch_size,
    saturation_check,
    wait_time,
)


def _design(bs, bto=2.0):
    return BlockDesign(batch_size_bs=bs, batch_timeout_bto=bto)


def _samples(c0, c1, sizes=(1, 2, 4, 8, 16, 32), rate=8.0, bto=2.0, noise=None):
    env = EnvironmentParams(arrival_rate_r=rate)
    samples = []
    for i, bs in enumerate(sizes):
        latency = expected_latency(env, _design(bs, bto), FittedLatencyModel(c0=c0, c1=c1))
        if noise is not None:
            latency += noise[i]
        samples.append(LatencySample(design=_design(bs, bto), env=env, measured_latency=max(latency, 0.0)))
    return samples


def test_io_time():
    env = EnvironmentParams(arrival_rate_r=1, txn_size_ts=1000, disk_bandwidth_db=1e6, net_bandwidth_nb=1e6)
    assert io_time(env, _design(10), CostCoefficients()) == pytest.approx(0.02)
    coeffs = CostCoefficients(m0=512)
    assert io_time(env, _design(10), coeffs) == pytest.approx(2 * (512 + 10 * 1000) / 1e6)


def test_cpu_time():
    env = EnvironmentParams(arrival_rate_r=1, cpu_speed_cs=1e9)
    assert cpu_time(env, _design(4), CostCoefficients(c0_cycles=1e6)) == pytest.approx(0.001)
    # Signature cost equal to the fixed cost doubles the time.
    env = EnvironmentParams(arrival_rate_r=1, txn_size_ts=100, cpu_speed_cs=1e9)
    coeffs = CostCoefficients(c0_cycles=1e6, c1_cycles_per_bit=1e6 / (4 * 100))
    assert cpu_time(env, _design(4), coeffs) == pytest.approx(2e6 / 1e9)


def test_expected_latency_example():
    env = EnvironmentParams(arrival_rate_r=8)
    fitted = FittedLatencyModel(c0=0.01, c1=0.05)
    assert wait_time(env, _design(10)) == pytest.approx(0.625)
    assert expected_latency(env, _design(10), fitted) == pytest.approx(0.775)


def test_wait_is_capped_by_timeout():
    env = EnvironmentParams(arrival_rate_r=1)
    assert wait_time(env, _design(100, bto=2.0)) == 1.0
    assert wait_time(env, _design(100, bto=1e12)) == 50.0


def test_fitted_form_matches_cost_form():
    env = EnvironmentParams(arrival_rate_r=16)
    coeffs = CostCoefficients(m0=4096, c0_cycles=3e6, c1_cycles_per_bit=12)
    fitted = fitted_from_costs(env, coeffs)
    for bs in (1, 7, 64):
        assert expected_latency(env, _design(bs), fitted) == pytest.approx(
            expected_latency_from_costs(env, _design(bs), coeffs), rel=1e-12
        )


def test_fit_recovers_exact_line():
    fitted = fit_linear_coeffs(_samples(0.003, 0.12))
    assert fitted.c0 == pytest.approx(0.003, abs=1e-9)
    assert fitted.c1 == pytest.approx(0.12, abs=1e-9)
    assert fitted.fit_residual < 1e-9
    assert (fitted.samples, fitted.distinct_bs) == (6, 6)


def test_fit_two_samples_interpolates():
    fitted = fit_linear_coeffs(_samples(0.01, 0.2, sizes=(3, 9)))
    assert fitted.c0 == pytest.approx(0.01)
    assert fitted.fit_residual == pytest.approx(0.0, abs=1e-12)


def test_fit_with_noise():
    rng = np.random.default_rng(2024)
    sizes = tuple(int(s) for s in rng.choice([1, 2, 4, 8, 16, 32, 64], size=300))
    noise = rng.normal(0.0, 0.01, size=len(sizes))
    fitted = fit_linear_coeffs(_samples(0.003, 0.12, sizes=sizes, noise=noise))
    assert 0.005 <= fitted.fit_residual <= 0.02

    x = np.array(sizes, dtype=float)
    slope_se = 0.01 / math.sqrt(np.sum((x - x.mean()) ** 2))
    assert abs(fitted.c0 - 0.003) < 3 * slope_se


def test_fit_errors():
    with pytest.raises(InsufficientSamplesError):
        fit_linear_coeffs(_samples(0.003, 0.12, sizes=(4,)))
    with pytest.raises(DegenerateFitError):
        fit_linear_coeffs(_samples(0.003, 0.12, sizes=(4, 4, 4)))


@pytest.mark.parametrize(
    "bs,rate,saturated",
    [(1, 16, True), (2, 16, False), (1, 8, False)],
)
def test_saturation_check(bs, rate, saturated):
    diag = saturation_check(EnvironmentParams(arrival_rate_r=rate), _design(bs), REFERENCE_BP_RATE)
    assert diag.saturated is saturated
    assert diag.margin == pytest.approx(rate / (bs * REFERENCE_BP_RATE))


def test_saturation_margin_example():
    diag = saturation_check(EnvironmentParams(arrival_rate_r=16), _design(1), 11.85)
    assert diag.margin == pytest.approx(1.35, abs=0.01)
    with pytest.raises(ConfigError):
        saturation_check(EnvironmentParams(arrival_rate_r=16), _design(1), 0.0)


def test_reference_constants():
    assert bp_rate_from_processing_time(PEER_BLOCK_PROCESSING_MS / 1000) == pytest.approx(11.86, abs=0.01)
    assert sum(BLOCK_PROCESSING_BREAKDOWN_MS.values()) == pytest.approx(81.46)


def test_recommend_batch_size():
    fitted = FittedLatencyModel(c0=0.003, c1=0.12)
    sizes = [32, 1, 2, 4, 8, 16]

    low = recommend_batch_size(EnvironmentParams(arrival_rate_r=8), 2.0, fitted, sizes, REFERENCE_BP_RATE)
    assert (low.bs, low.saturated) == (1, False)
    assert sorted(low.evaluated) == [1, 2, 4, 8, 16, 32]

    # BS=1 saturates the peer at 16 txn/s.
    high = recommend_batch_size(EnvironmentParams(arrival_rate_r=16), 2.0, fitted, sizes, REFERENCE_BP_RATE)
    assert (high.bs, high.saturated) == (2, False)

    flooded = recommend_batch_size(EnvironmentParams(arrival_rate_r=1000), 2.0, fitted, [1, 2], REFERENCE_BP_RATE)
    assert (flooded.bs, flooded.saturated) == (2, True)

    with pytest.raises(ConfigError):
        recommend_batch_size(EnvironmentParams(arrival_rate_r=8), 2.0, fitted, [])


def test_parameter_validation():
    with pytest.raises(ValueError):
        BlockDesign(batch_size_bs=0, batch_timeout_bto=2.0)
    with pytest.raises(ValueError):
        EnvironmentParams(arrival_rate_r=0)


def test_latency_non_decreasing_in_batch_size():
    env = EnvironmentParams(arrival_rate_r=8)
    fitted = FittedLatencyModel(c0=0.003, c1=0.12)
    latencies = [expected_latency(env, _design(bs, 2.0), fitted) for bs in range(1, 129)]
    assert all(b >= a for a, b in zip(latencies, latencies[1:]))


def test_wait_is_continuous_at_the_timeout():
    env = EnvironmentParams(arrival_rate_r=4)
    # BS / R == BTO: the full-batch and timeout branches meet.
    assert wait_time(env, _design(10, bto=2.5)) == pytest.approx(1.25)
    assert wait_time(env, _design(10, bto=1e12)) == pytest.approx(1.25)
    assert wait_time(env, _design(10, bto=2.5 + 1e-9)) == pytest.approx(1.25)
    assert wait_time(env, _design(10, bto=2.5 - 1e-9)) == pytest.approx(1.25)


def test_fit_ignores_sample_order():
    rng = np.random.default_rng(5)
    samples = _samples(0.003, 0.12, noise=rng.normal(0.0, 0.01, size=6))
    fitted = fit_linear_coeffs(samples)
    shuffled = fit_linear_coeffs([samples[i] for i in rng.permutation(len(samples))])
    assert shuffled.c0 == pytest.approx(fitted.c0, rel=1e-9, abs=1e-12)
    assert shuffled.c1 == pytest.approx(fitted.c1, rel=1e-9, abs=1e-12)


def test_fit_minimizes_squared_error():
    rng = np.random.default_rng(11)
    samples = _samples(0.003, 0.12, sizes=(1, 2, 4, 8, 16, 32, 64), noise=rng.normal(0.0, 0.02, size=7))
    fitted = fit_linear_coeffs(samples)

    def sse(c0, c1):
        model = FittedLatencyModel(c0=c0, c1=c1)
        return sum((s.measured_latency - expected_latency(s.env, s.design, model)) ** 2 for s in samples)

    best = sse(fitted.c0, fitted.c1)
    for d0 in (-1e-4, 0.0, 1e-4):
        for d1 in (-1e-3, 0.0, 1e-3):
            if d0 or d1:
                assert best < sse(fitted.c0 + d0, fitted.c1 + d1)
