"""Randomized and exact verification sweeps."""

from stmod.harness.trials import TrialPool, TrialResult, TrialState
from stmod.harness.verify import (
    SearchConfig,
    classify_gh,
    verify_adjunction,
    verify_all,
    verify_counterexamples,
    verify_decomposition,
    verify_no_ghosts,
    verify_syzygies,
    verify_tate_fullness,
)

__all__ = [
    "SearchConfig",
    "TrialPool",
    "TrialResult",
    "TrialState",
    "classify_gh",
    "verify_adjunction",
    "verify_all",
    "verify_counterexamples",
    "verify_decomposition",
    "verify_no_ghosts",
    "verify_syzygies",
    "verify_tate_fullness",
]
