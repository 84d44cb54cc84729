#!/usr/bin/env python3
"""Basic test to verify imports and core functionality."""
import sys


def test_imports():
    """Test that all modules can be imported."""
    print("Testing imports...")

    from blockcalc.cli import main  # noqa: F401
    from blockcalc.config import ConfigManager  # noqa: F401
    from blockcalc.experiments import run_spec  # noqa: F401
    from blockcalc.history import RunHistory  # noqa: F401
    from blockcalc.model import model_success_rate  # noqa: F401
    from blockcalc.simulation import run_experiment  # noqa: F401

    print("✓ All imports successful")


def test_config():
    """Test configuration system."""
    print("\nTesting configuration...")

    from blockcalc.config import ConfigManager

    manager = ConfigManager()
    assert "table3" in manager.preset_names()
    assert manager.resolve("fig8")[0].int_param("range") == 100

    print(f"✓ Presets loaded: {', '.join(manager.preset_names())}")


def test_models():
    """Test the analytic models."""
    print("\nTesting models...")

    from blockcalc.model import (
        BlockDesign,
        EnvironmentParams,
        FittedLatencyModel,
        all_write,
        expected_latency,
        model_success_rate,
        uniform_pmf,
    )

    assert abs(model_success_rate(all_write(uniform_pmf(2)), 2) - 0.75) < 1e-12

    env = EnvironmentParams(arrival_rate_r=8)
    design = BlockDesign(batch_size_bs=10, batch_timeout_bto=2.0)
    latency = expected_latency(env, design, FittedLatencyModel(c0=0.01, c1=0.05))
    assert abs(latency - 0.775) < 1e-12

    print(f"✓ Models working (latency {latency:.3f} s)")


def test_simulation():
    """Test one small simulation."""
    print("\nTesting simulation...")

    from blockcalc.model import all_write, uniform_pmf
    from blockcalc.simulation import ClientBehavior, ClientKind, SimConfig, run_experiment

    config = SimConfig(
        behavior=ClientBehavior(kind=ClientKind.ALL_WRITE, pattern=all_write(uniform_pmf(1))),
        bs=4,
        total_operations=100,
    )
    summary = run_experiment(config, trials=3)
    assert summary.p50 == 0.25

    print(f"✓ Simulation working (p50 {summary.p50})")


def main():
    """Run all tests."""
    print("=" * 60)
    print("blockcalc - Basic Functionality Tests")
    print("=" * 60)

    results = []
    for test in (test_imports, test_config, test_models, test_simulation):
        try:
            test()
            results.append(True)
        except Exception as e:
            print(f"✗ {test.__name__} failed: {e}")
            results.append(False)

    print("\n" + "=" * 60)
    passed = sum(results)
    total = len(results)
    print(f"Results: {passed}/{total} tests passed")
    print("=" * 60)

    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
