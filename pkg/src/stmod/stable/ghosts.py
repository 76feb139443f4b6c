"""Ghost and dual-ghost detection.

A map is a ghost when it kills every Tate cohomology class, i.e. every stable
map out of every Ω^i k. Only finitely many degrees can be tested, so a
verdict either finds a witness, applies a structural certificate that makes
the bounded search complete, or reports the bound it reached.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any

import structlog

from stmod.algebra.groups import CentralElement, is_cyclic
from stmod.algebra.reps import Module, ModuleMap
from stmod.errors import ModuleValidationError, StableCategoryError
from stmod.stable.category import phom_space, require_stmod
from stmod.stable.tate import omega_k, tate_cohomology

logger = structlog.get_logger(__name__)

DEFAULT_BOUND = 4


class VerdictKind(str, Enum):
    NON_GHOST = "non_ghost"
    GHOST_CERTIFIED = "ghost_certified"
    GHOST_UP_TO_BOUND = "ghost_up_to_bound"


class Certificate(str, Enum):
    """Why a bounded ghost check is complete."""

    CENTRAL_ELEMENT = "central-element"
    PERIODICITY = "periodicity"


@dataclass(frozen=True, eq=False)
class GhostVerdict:
    """Outcome of a (dual) ghost check.

    For ``NON_GHOST`` the ``witness`` is a map ``Ω^degree k → M`` (ghost) or
    ``N → Ω^degree k`` (dual ghost) whose composite with the tested map is
    stably nontrivial.
    """

    kind: VerdictKind
    bound: int
    degree: int | None = None
    witness: ModuleMap | None = None
    certificate: Certificate | None = None
    period: int | None = None
    central_element: int | None = None
    degrees_checked: tuple[int, ...] = ()

    @property
    def is_ghost(self) -> bool:
        return self.kind != VerdictKind.NON_GHOST

    @property
    def is_certified(self) -> bool:
        return self.kind == VerdictKind.GHOST_CERTIFIED

    def summary(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind.value, "bound": self.bound}
        if self.degree is not None:
            out["degree"] = self.degree
        if self.certificate is not None:
            out["certificate"] = self.certificate.value
        if self.period is not None:
            out["period"] = self.period
        if self.central_element is not None:
            out["central_element"] = self.central_element
        return out


def degree_order(bound: int) -> Iterator[int]:
    """0, 1, −1, 2, −2, ... up to ±bound."""
    yield 0
    for d in range(1, bound + 1):
        yield d
        yield -d


def _check_bound(bound: int) -> None:
    if bound < 0:
        raise StableCategoryError(f"degree bound must be non-negative, got {bound}")


def _periodicity(f: ModuleMap, bound: int) -> int | None:
    """Ω-period of k when G is cyclic and the bound covers a full period."""
    G = f.source.group
    if not is_cyclic(G):
        return None
    period = 1 if G.order == 2 else 2
    return period if bound >= period - 1 else None


def _central_certificate(
    f: ModuleMap, certificates: Sequence[CentralElement]
) -> CentralElement | None:
    """A hinted central x with ``f = x − 1`` on a single module."""
    if f.source != f.target:
        return None
    M: Module = f.source
    for x in certificates:
        if x.group != M.group:
            raise ModuleValidationError("central element lives in a different group")
        if f.mat == M.act(x.index) - M.act(0):
            return x
    return None


def _ghost_verdict(
    f: ModuleMap, bound: int, certificates: Sequence[CentralElement], checked: tuple[int, ...]
) -> GhostVerdict:
    x = _central_certificate(f, certificates)
    if x is not None:
        return GhostVerdict(
            VerdictKind.GHOST_CERTIFIED,
            bound,
            certificate=Certificate.CENTRAL_ELEMENT,
            central_element=x.index,
            degrees_checked=checked,
        )
    period = _periodicity(f, bound)
    if period is not None:
        return GhostVerdict(
            VerdictKind.GHOST_CERTIFIED,
            bound,
            certificate=Certificate.PERIODICITY,
            period=period,
            degrees_checked=checked,
        )
    return GhostVerdict(VerdictKind.GHOST_UP_TO_BOUND, bound, degrees_checked=checked)


def is_ghost(
    f: ModuleMap, bound: int = DEFAULT_BOUND, certificates: Sequence[CentralElement] = ()
) -> GhostVerdict:
    """Test whether ``f_*: Ĥ^i(G, M) → Ĥ^i(G, N)`` vanishes for ``|i| ≤ bound``.

    Args:
        f: the map ``M → N``
        bound: largest absolute degree examined
        certificates: central elements x for which ``f = x − 1`` would certify ghostness

    Returns:
        GhostVerdict: NON_GHOST with a witness class, or a ghost verdict

    Raises:
        StableCategoryError: if ``bound`` is negative or G is trivial
    """
    _check_bound(bound)
    G = f.source.group
    require_stmod(G, f.field)
    checked: list[int] = []
    for i in degree_order(bound):
        tate = tate_cohomology(G, f.source, i)
        target = phom_space(tate.space.source, f.target)
        for cls in tate.classes:
            if not target.contains(f @ cls.rep):
                logger.debug("ghost_witness_found", degree=i, source_dim=f.source.dim)
                return GhostVerdict(
                    VerdictKind.NON_GHOST,
                    bound,
                    degree=i,
                    witness=cls.rep,
                    degrees_checked=tuple(checked + [i]),
                )
        checked.append(i)
    return _ghost_verdict(f, bound, certificates, tuple(checked))


def is_dual_ghost(
    f: ModuleMap, bound: int = DEFAULT_BOUND, certificates: Sequence[CentralElement] = ()
) -> GhostVerdict:
    """Whether ``h ↦ h∘f`` kills every stable ``h: N → Ω^i k`` for ``|i| ≤ bound``."""
    _check_bound(bound)
    G = f.source.group
    require_stmod(G, f.field)
    checked: list[int] = []
    for i in degree_order(bound):
        shifted_k = omega_k(G, i, f.field)
        outgoing = phom_space(f.target, shifted_k)
        pulled = phom_space(f.source, shifted_k)
        for h in outgoing.representatives:
            if not pulled.contains(h @ f):
                logger.debug("dual_ghost_witness_found", degree=i, target_dim=f.target.dim)
                return GhostVerdict(
                    VerdictKind.NON_GHOST,
                    bound,
                    degree=i,
                    witness=h,
                    degrees_checked=tuple(checked + [i]),
                )
        checked.append(i)
    return _ghost_verdict(f, bound, certificates, tuple(checked))
