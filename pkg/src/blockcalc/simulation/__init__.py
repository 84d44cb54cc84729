"""Monte Carlo block-validation simulator."""
from .block import (
    BlockTrace,
    Op,
    Transaction,
    Verdict,
    enumerate_block_successes,
    validate_block,
)
from .clients import ClientBehavior, ClientKind, create_client
from .core import SimConfig, TrialSummary, default_num_clients, run_trial, trial_rng, trial_seed_sequence
from .experiment import PercentileSummary, run_experiment, run_trials, summarize
from .trace import export_trace

__all__ = [
    "BlockTrace",
    "ClientBehavior",
    "ClientKind",
    "Op",
    "PercentileSummary",
    "SimConfig",
    "Transaction",
    "TrialSummary",
    "Verdict",
    "create_client",
    "default_num_clients",
    "enumerate_block_successes",
    "export_trace",
    "run_experiment",
    "run_trial",
    "run_trials",
    "summarize",
    "trial_rng",
    "trial_seed_sequence",
    "validate_block",
]
