"""Exact linear algebra, finite groups and kG-modules."""

from .exactlin import Matrix, PrimeField, kernel_basis, rank, rref, solve
from .groups import CentralElement, Group, Subgroup, center, cyclic, direct_product, subgroup
from .reps import HomSpace, JordanType, Module, ModuleMap

__all__ = [
    "CentralElement",
    "Group",
    "HomSpace",
    "JordanType",
    "Matrix",
    "Module",
    "ModuleMap",
    "PrimeField",
    "Subgroup",
    "center",
    "cyclic",
    "direct_product",
    "kernel_basis",
    "rank",
    "rref",
    "solve",
    "subgroup",
]
