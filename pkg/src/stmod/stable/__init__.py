"""The stable module category stmod(kG) of a finite p-group."""

from stmod.stable.category import (
    ProjectiveSplitting,
    StableHomSpace,
    StableIsoResult,
    StableIsoStatus,
    is_stable_iso,
    is_stably_trivial,
    omega,
    omega_inverse,
    omega_map,
    omega_power,
    omega_power_map,
    phom_space,
    projective_free_core,
    projective_rank,
    split_projective,
    stable_hom,
)
from stmod.stable.ghosts import Certificate, GhostVerdict, VerdictKind, is_dual_ghost, is_ghost
from stmod.stable.tate import (
    TateClass,
    TateCohomology,
    graded_compose,
    multiplication_matrix,
    omega_k,
    tate_cohomology,
)

__all__ = [
    "Certificate",
    "GhostVerdict",
    "ProjectiveSplitting",
    "StableHomSpace",
    "StableIsoResult",
    "StableIsoStatus",
    "TateClass",
    "TateCohomology",
    "VerdictKind",
    "graded_compose",
    "is_dual_ghost",
    "is_ghost",
    "is_stable_iso",
    "is_stably_trivial",
    "multiplication_matrix",
    "omega",
    "omega_inverse",
    "omega_k",
    "omega_map",
    "omega_power",
    "omega_power_map",
    "phom_space",
    "projective_free_core",
    "projective_rank",
    "split_projective",
    "stable_hom",
]
