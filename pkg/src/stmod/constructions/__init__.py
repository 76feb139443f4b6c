"""Explicit ghost maps and the subgroups that carry them."""

from stmod.constructions.bundles import (
    CounterexampleBundle,
    c2xc2_in_c2cubed_ghost,
    c4_in_c8_ghost,
    central_ghost,
    cyclic_length2_ghost,
    induced_ghost,
    rank2_ghost,
    verify_central_square,
)
from stmod.constructions.subgroups import (
    FailureSubgroup,
    classify_gh,
    find_gh_failure_subgroup,
    ghost_for_group,
)

__all__ = [
    "CounterexampleBundle",
    "FailureSubgroup",
    "c2xc2_in_c2cubed_ghost",
    "c4_in_c8_ghost",
    "central_ghost",
    "classify_gh",
    "cyclic_length2_ghost",
    "find_gh_failure_subgroup",
    "ghost_for_group",
    "induced_ghost",
    "rank2_ghost",
    "verify_central_square",
]
