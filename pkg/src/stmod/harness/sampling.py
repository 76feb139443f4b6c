"""Random modules for the verification sweeps."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from stmod.algebra.exactlin import PrimeField, random_invertible
from stmod.algebra.groups import Group, is_cyclic
from stmod.algebra.reps import (
    Module,
    change_basis,
    direct_sum_all,
    module_from_jordan_type,
    regular_module,
)
from stmod.stable.tate import omega_k


@lru_cache(maxsize=64)
def partitions(max_part: int, max_total: int) -> tuple[tuple[int, ...], ...]:
    """All non-empty partitions with parts ≤ ``max_part`` and total ≤ ``max_total``."""
    out: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...], largest: int, remaining: int) -> None:
        if prefix:
            out.append(prefix)
        for part in range(min(largest, remaining), 0, -1):
            extend(prefix + (part,), part, remaining - part)

    extend((), max_part, max_total)
    return tuple(out)


def random_partition(max_part: int, max_total: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniform over :func:`partitions`."""
    choices = partitions(max_part, max_total)
    return choices[int(rng.integers(len(choices)))]


def conjugate_randomly(M: Module, rng: np.random.Generator) -> Module:
    if M.dim == 0:
        return M
    return change_basis(M, random_invertible(M.field, M.dim, rng))


def random_cyclic_module(
    G: Group, F: PrimeField, dim_bound: int, rng: np.random.Generator
) -> Module:
    """A random Jordan type, realized and then hidden by a random change of basis."""
    sizes = random_partition(G.order, dim_bound, rng)
    return conjugate_randomly(module_from_jordan_type(G, F, sizes), rng)


def _building_blocks(G: Group, F: PrimeField, dim_bound: int) -> list[Module]:
    blocks = [omega_k(G, i, F) for i in (0, 1, -1, 2, -2)]
    blocks.append(regular_module(G, F))
    return [b for b in blocks if 0 < b.dim <= dim_bound]


def random_module(G: Group, F: PrimeField, dim_bound: int, rng: np.random.Generator) -> Module:
    """Random module of dimension ≤ ``dim_bound``.

    Cyclic groups use random Jordan types; other groups use random sums of
    small syzygies of k and free modules.
    """
    if is_cyclic(G):
        return random_cyclic_module(G, F, dim_bound, rng)
    blocks = _building_blocks(G, F, dim_bound)
    chosen: list[Module] = []
    total = 0
    while True:
        fitting = [b for b in blocks if total + b.dim <= dim_bound]
        if not fitting or (chosen and rng.random() < 0.3):
            break
        block = fitting[int(rng.integers(len(fitting)))]
        chosen.append(block)
        total += block.dim
    return conjugate_randomly(direct_sum_all(chosen).module, rng)


def suspension_sums(
    G: Group, F: PrimeField, degrees: tuple[int, ...], max_summands: int
) -> list[Module]:
    """Every direct sum of 1..max_summands modules ``Ω^i k`` with i from ``degrees``."""
    out = []
    for count in range(1, max_summands + 1):
        for combo in combinations_with_replacement(degrees, count):
            parts = [omega_k(G, i, F) for i in combo]
            name = "⊕".join(f"Ω^{i}k" for i in combo)
            out.append(direct_sum_all(parts).module.with_name(name))
    return out
