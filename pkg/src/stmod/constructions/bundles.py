"""Explicit ghost maps, each shipped with claims that were checked on construction."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from typing import Any

import structlog

from stmod.algebra.exactlin import PrimeField
from stmod.algebra.groups import (
    CentralElement,
    Group,
    Subgroup,
    cyclic,
    cyclic_generator,
    direct_product,
    prime_power,
    subgroup,
)
from stmod.algebra.reps import (
    Module,
    ModuleMap,
    cyclic_module,
    element_map,
    induce,
    induce_map,
    induction_retract,
    restrict_map,
    trivial_module,
)
from stmod.errors import HypothesisError, ModuleValidationError, StableCategoryError
from stmod.stable.category import is_stably_trivial, omega_power_map, phom_space
from stmod.stable.ghosts import DEFAULT_BOUND, GhostVerdict, is_ghost
from stmod.stable.tate import omega_k, tate_cohomology

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class CounterexampleBundle:
    """A map together with its verified ghost verdict and stable nontriviality.

    ``stable_class`` holds the nonzero coordinates of the map (or of the map it
    was checked through, see ``nontriviality_check``) in a stable hom basis.
    """

    name: str
    group: Group
    module: Module
    map: ModuleMap
    ghost: GhostVerdict
    stably_nontrivial: bool
    nontriviality_check: str
    stable_class: tuple[int, ...] = ()
    central_element: int | None = None
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        """A ghost that is not stably trivial."""
        return self.ghost.is_ghost and self.stably_nontrivial


def _stable_class(f: ModuleMap) -> tuple[int, ...]:
    return phom_space(f.source, f.target).coordinates(f)


def central_ghost(
    G: Group, x: CentralElement, M: Module, bound: int = DEFAULT_BOUND, name: str | None = None
) -> CounterexampleBundle:
    """Multiplication by ``x − 1`` on M, ghost by the central-element argument."""
    if x.group != G or M.group != G:
        raise ModuleValidationError("central element and module must live over the same group")
    phi = element_map(M, x.index)
    verdict = is_ghost(phi, bound, certificates=[x])
    nontrivial = not is_stably_trivial(phi)
    bundle = CounterexampleBundle(
        name=name or f"central_ghost({G.name}, x={x.index})",
        group=G,
        module=M,
        map=phi,
        ghost=verdict,
        stably_nontrivial=nontrivial,
        nontriviality_check="direct",
        stable_class=_stable_class(phi) if nontrivial else (),
        central_element=x.index,
    )
    logger.info(
        "ghost_bundle_built",
        bundle=bundle.name,
        module_dim=M.dim,
        verdict=verdict.kind.value,
        nontrivial=nontrivial,
    )
    return bundle


def cyclic_length2_map(n: int) -> ModuleMap:
    """``σ − 1`` on the length-two cyclic module over C_n, with no hypothesis checks."""
    pp = prime_power(n)
    if pp is None:
        raise HypothesisError(f"n must be a prime power, got {n}")
    G = cyclic(n)
    M = cyclic_module(G, 2, PrimeField(pp[0]))
    return element_map(M, cyclic_generator(G))


def cyclic_length2_ghost(n: int, bound: int = DEFAULT_BOUND) -> CounterexampleBundle:
    """The ghost ``σ − 1`` on the module generated by U with ``(σ−1)²U = 0``.

    Raises:
        HypothesisError: if n is not a prime power or n < 4
    """
    pp = prime_power(n)
    if pp is None:
        raise HypothesisError(f"n must be a prime power, got {n}")
    if n < 4:
        raise HypothesisError(
            f"C{n} is too small: this is where we use the hypothesis |G| ≥ 4 "
            "(the map factors through the projective cover)"
        )
    phi = cyclic_length2_map(n)
    G = phi.source.group
    bundle = central_ghost(
        G, CentralElement(G, cyclic_generator(G)), phi.source, bound, f"cyclic_length2_ghost({n})"
    )
    return _with_metadata(bundle, period=2, p=pp[0])


def _with_metadata(bundle: CounterexampleBundle, **extra: Any) -> CounterexampleBundle:
    return replace(bundle, metadata={**bundle.metadata, **extra})


def rank2_group(p: int) -> Group:
    return direct_product(cyclic(p), cyclic(p))


def rank2_ghost(
    p: int, h_generator: int | None = None, bound: int = DEFAULT_BOUND
) -> CounterexampleBundle:
    """``x − 1`` on ``k_H↑^G`` for G = C_p × C_p and H of order p.

    By default H is the first factor (generator index p) and x generates the
    second factor (index 1).
    """
    G = rank2_group(p)
    return rank2_bundle(G, PrimeField(p), p if h_generator is None else h_generator, bound)


def rank2_bundle(
    G: Group, F: PrimeField, h_generator: int, bound: int = DEFAULT_BOUND, name: str | None = None
) -> CounterexampleBundle:
    """The rank-two construction on any group shaped like C_p × C_p."""
    if not 0 <= h_generator < G.order:
        raise HypothesisError(f"generator index {h_generator} is not an element of {G.name}")
    H = subgroup(G, [h_generator])
    if H.is_trivial() or not H.is_proper():
        raise HypothesisError("H must be a non-trivial proper subgroup")
    if not H.is_normal():
        raise HypothesisError("H must be normal")
    x_index = next(g for g in range(G.order) if not H.contains(g))
    x = CentralElement(G, x_index)
    M = induce(H, trivial_module(H.group, F)).with_name("k_H↑")
    phi = element_map(M, x.index)
    verdict = is_ghost(phi, bound, certificates=[x])
    # the restriction to H is a map between trivial modules, nonzero iff stably nonzero
    restricted = restrict_map(phi, H)
    nontrivial = not is_stably_trivial(restricted)
    bundle = CounterexampleBundle(
        name=name or f"rank2_ghost({F.p})",
        group=G,
        module=M,
        map=phi,
        ghost=verdict,
        stably_nontrivial=nontrivial,
        nontriviality_check="restriction",
        stable_class=_stable_class(restricted) if nontrivial else (),
        central_element=x.index,
        metadata={"subgroup": list(H.members), "h_generator": h_generator},
    )
    logger.info(
        "ghost_bundle_built",
        bundle=bundle.name,
        module_dim=M.dim,
        verdict=verdict.kind.value,
        nontrivial=nontrivial,
    )
    return bundle


def induced_ghost(
    S: Subgroup, bundle: CounterexampleBundle, bound: int = DEFAULT_BOUND, name: str | None = None
) -> CounterexampleBundle:
    """``φ↑^G`` for a ghost φ over H, re-verified over G.

    Nontriviality is read off the H-retraction ``π∘(φ↑^G↓_H)∘ι = φ``.

    Raises:
        ModuleValidationError: if the bundle does not live over ``S``
    """
    if bundle.group != S.group:
        raise ModuleValidationError(
            f"bundle lives over {bundle.group.name}, not over the subgroup {S.group.name}"
        )
    G = S.parent
    phi = bundle.map
    induced = induce_map(S, phi)
    certificates: list[CentralElement] = []
    parent_x: int | None = None
    if bundle.central_element is not None:
        candidate = S.embed(bundle.central_element)
        if (G.table[candidate, :] == G.table[:, candidate]).all():
            parent_x = candidate
            certificates.append(CentralElement(G, candidate))
    verdict = is_ghost(induced, bound, certificates=certificates)
    iota, _ = induction_retract(S, phi.source)
    _, pi = induction_retract(S, phi.target)
    if pi @ restrict_map(induced, S) @ iota != phi:
        raise StableCategoryError("induction retraction does not recover the original map")
    nontrivial = not is_stably_trivial(induced)
    if bundle.stably_nontrivial and not nontrivial:
        raise StableCategoryError("a retract of the induced map is nontrivial but the map is not")
    result = CounterexampleBundle(
        name=name or f"induced({bundle.name} → {G.name})",
        group=G,
        module=induced.source,
        map=induced,
        ghost=verdict,
        stably_nontrivial=nontrivial,
        nontriviality_check="induction-retract",
        stable_class=_stable_class(induced) if nontrivial else (),
        central_element=parent_x,
        metadata={"subgroup": list(S.members), "from": bundle.name, "retract_verified": True},
    )
    logger.info(
        "ghost_bundle_built",
        bundle=result.name,
        module_dim=result.module.dim,
        verdict=verdict.kind.value,
        nontrivial=nontrivial,
    )
    return result


def c4_in_c8_ghost(bound: int = DEFAULT_BOUND) -> CounterexampleBundle:
    """The C4 length-two ghost induced along ⟨σ²⟩ ≤ C8."""
    G = cyclic(8)
    S = subgroup(G, [2])
    local = S.group
    M = cyclic_module(local, 2, PrimeField(2))
    base = central_ghost(
        local, CentralElement(local, cyclic_generator(local)), M, bound, "cyclic_length2_ghost(4)"
    )
    return induced_ghost(S, base, bound, "induced_ghost(C4 ≤ C8)")


def c2xc2_in_c2cubed_ghost(bound: int = DEFAULT_BOUND) -> CounterexampleBundle:
    """rank2_ghost(2) induced along C2×C2 ≤ C2×C2×C2."""
    G = direct_product(rank2_group(2), cyclic(2))
    S = subgroup(G, [2, 4])
    base = rank2_bundle(S.group, PrimeField(2), 2, bound, "rank2_ghost(2)")
    return induced_ghost(S, base, bound, "induced_ghost(C2xC2 ≤ C2xC2xC2)")


@dataclass(frozen=True)
class CentralSquareResult:
    """Outcome of checking ``(x−1)∘f = f∘(x−1)`` with ``(x−1)`` stably zero on Ω^n k."""

    degrees: tuple[int, ...]
    classes_checked: int
    failures: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_central_square(
    bundle: CounterexampleBundle, degrees: Iterable[int] = range(-2, 3)
) -> CentralSquareResult:
    """Check the commuting square behind the central-element argument degree by degree.

    For each class ``f: Ω^n k → M``: ``(x−1)_M ∘ f = f ∘ (x−1)_{Ω^n k}`` exactly,
    ``(x−1)`` on Ω^n k agrees stably with ``Ω^n`` of ``(x−1) = 0`` on k, and
    hence the composite is stably trivial.
    """
    if bundle.central_element is None:
        raise HypothesisError(f"{bundle.name} is not built from a central element")
    G, M = bundle.group, bundle.module
    x = bundle.central_element
    k = trivial_module(G, M.field)
    degrees = tuple(degrees)
    checked = 0
    failures: list[int] = []
    for n in degrees:
        shifted = omega_k(G, n, M.field)
        on_shifted = element_map(shifted, x)
        transported = omega_power_map(element_map(k, x), n)
        ok = is_stably_trivial(on_shifted) and is_stably_trivial(transported)
        for cls in tate_cohomology(G, M, n).classes:
            checked += 1
            square = element_map(M, x) @ cls.rep == cls.rep @ on_shifted
            if not (square and ok and is_stably_trivial(element_map(M, x) @ cls.rep)):
                ok = False
        if not ok:
            failures.append(n)
    logger.debug("central_square_checked", bundle=bundle.name, classes=checked)
    return CentralSquareResult(degrees, checked, tuple(failures))
