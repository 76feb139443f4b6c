"""Locating the subgroups on which the generating hypothesis breaks."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import structlog

from stmod.algebra.exactlin import PrimeField
from stmod.algebra.groups import (
    MAX_GROUP_ORDER,
    CentralElement,
    Group,
    Subgroup,
    cyclic_generator,
    is_p_group,
    subgroup,
)
from stmod.algebra.reps import cyclic_module
from stmod.constructions.bundles import (
    CounterexampleBundle,
    central_ghost,
    induced_ghost,
    rank2_bundle,
)
from stmod.errors import GroupTableError, HypothesisError, PGroupRequiredError, StableCategoryError
from stmod.stable.ghosts import DEFAULT_BOUND

logger = structlog.get_logger(__name__)


class FailureKind(str, Enum):
    CYCLIC = "cyclic"
    RANK_TWO = "elementary_abelian_rank2"


@dataclass(frozen=True, eq=False)
class FailureSubgroup:
    """A subgroup over which an explicit nontrivial ghost exists."""

    kind: FailureKind
    subgroup: Subgroup
    generators: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.subgroup.order


def _check_p_group(G: Group, p: int) -> None:
    if not is_p_group(G, p):
        raise PGroupRequiredError(f"{G.name} (order {G.order}) is not a {p}-group")
    if G.order == 1:
        raise StableCategoryError("the trivial group has a degenerate stable category")
    if G.order > MAX_GROUP_ORDER:
        raise GroupTableError(f"exhaustive subgroup search is limited to order {MAX_GROUP_ORDER}")


def find_gh_failure_subgroup(G: Group, p: int) -> FailureSubgroup | None:
    """A cyclic subgroup of order ≥ 4 or a subgroup ≅ C_p × C_p, by exhaustive search.

    Returns ``None`` exactly when G is C2 or C3. Smaller subgroups are
    preferred, then smaller generator indices.
    """
    _check_p_group(G, p)
    orders = [G.element_order(g) for g in range(G.order)]
    cyclic_candidates = sorted((o, g) for g, o in enumerate(orders) if o >= 4)
    if cyclic_candidates:
        order, g = cyclic_candidates[0]
        # a C_p×C_p of order p² < order is a smaller witness
        if p * p >= order or not _has_rank2(G, p, orders):
            logger.debug("gh_failure_subgroup_found", kind="cyclic", order=order)
            return FailureSubgroup(FailureKind.CYCLIC, subgroup(G, [g]), (g,))
    rank2 = _rank2_pair(G, p, orders)
    if rank2 is not None:
        logger.debug("gh_failure_subgroup_found", kind="rank2", order=p * p)
        return FailureSubgroup(FailureKind.RANK_TWO, subgroup(G, list(rank2)), rank2)
    if G.order in (2, 3):
        return None
    raise StableCategoryError(f"no failure subgroup found in {G.name}, which is neither C2 nor C3")


def _rank2_pair(G: Group, p: int, orders: list[int]) -> tuple[int, int] | None:
    of_order_p = [g for g, o in enumerate(orders) if o == p]
    for a in of_order_p:
        span = {G.power(a, k) for k in range(p)}
        for b in of_order_p:
            if b <= a or b in span:
                continue
            if G.mul(a, b) == G.mul(b, a):
                return (a, b)
    return None


def _has_rank2(G: Group, p: int, orders: list[int]) -> bool:
    return _rank2_pair(G, p, orders) is not None


def classify_gh(G: Group, p: int) -> bool:
    """True iff every ghost in stmod(kG) is stably trivial, i.e. G is C2 or C3."""
    _check_p_group(G, p)
    return (G.order, p) in {(2, 2), (3, 3)}


def ghost_for_group(G: Group, p: int, bound: int = DEFAULT_BOUND) -> CounterexampleBundle:
    """A verified nontrivial ghost over G, built on a failure subgroup and induced up.

    Raises:
        HypothesisError: if G is C2 or C3, where no such ghost exists
    """
    witness = find_gh_failure_subgroup(G, p)
    if witness is None:
        raise HypothesisError(f"every ghost over {G.name} is stably trivial")
    S = witness.subgroup
    local = S.group
    F = PrimeField(p)
    if witness.kind == FailureKind.CYCLIC:
        sigma = cyclic_generator(local)
        base = central_ghost(
            local,
            CentralElement(local, sigma),
            cyclic_module(local, 2, F),
            bound,
            f"cyclic_length2_ghost({local.order})",
        )
    else:
        base = rank2_bundle(local, F, S.local(witness.generators[0]), bound, f"rank2_ghost({p})")
    if not S.is_proper():
        return base
    return induced_ghost(S, base, bound, f"induced({base.name} → {G.name})")
