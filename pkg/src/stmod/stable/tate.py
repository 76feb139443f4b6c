"""Tate cohomology ``Ĥ^i(G, M) = stable Hom(Ω^i k, M)`` and its graded product."""

from __future__ import annotations

from dataclasses import dataclass

import structlog

from stmod.algebra.exactlin import Matrix, PrimeField
from stmod.algebra.groups import Group
from stmod.algebra.reps import Module, ModuleMap, identity_map, trivial_module
from stmod.caching import WriteOnceCache
from stmod.errors import StableCategoryError
from stmod.stable.category import (
    StableHomSpace,
    field_for,
    is_stable_iso,
    omega,
    omega_inverse,
    omega_power_map,
    phom_space,
    projective_rank,
    require_stmod,
    split_projective,
)

logger = structlog.get_logger(__name__)

IDENTIFICATION_ATTEMPTS = 50

_OMEGA_K: WriteOnceCache[tuple[str, int, int], Module] = WriteOnceCache("omega_k")
_IDENTIFICATIONS: WriteOnceCache[tuple[str, str], ModuleMap] = WriteOnceCache("identification")
_SHIFTED: WriteOnceCache[tuple[int, str, bytes, int], ModuleMap] = WriteOnceCache("shifted_class")


def omega_k(G: Group, i: int, F: PrimeField | None = None) -> Module:
    """The fixed model of Ω^i k for every integer i.

    Ω^0 k is k; positive degrees iterate Ω and negative ones Ω⁻¹ from the
    neighbouring degree, so the same degree always yields the same module.
    """
    F = F or field_for(G)
    require_stmod(G, F)
    return _OMEGA_K.get_or_compute((G.digest, F.p, i), lambda: _compute_omega_k(G, F, i))


def _compute_omega_k(G: Group, F: PrimeField, i: int) -> Module:
    if i == 0:
        return trivial_module(G, F)
    if i > 0:
        M = omega(omega_k(G, i - 1, F))
    else:
        M = omega_inverse(omega_k(G, i + 1, F))
    if projective_rank(M):
        logger.warning("omega_k_projective_summand", degree=i, dim=M.dim)
        M = split_projective(M).core
    logger.debug("omega_k_computed", group=G.name, degree=i, dim=M.dim)
    return M.with_name(f"Ω^{i}k")


@dataclass(frozen=True, eq=False)
class TateClass:
    """A class in Ĥ^degree(G, M), represented by a map ``Ω^degree k → M``."""

    degree: int
    rep: ModuleMap

    @property
    def module(self) -> Module:
        return self.rep.target

    def is_zero(self) -> bool:
        return phom_space(self.rep.source, self.rep.target).contains(self.rep)


@dataclass(frozen=True, eq=False)
class TateCohomology:
    """Ĥ^degree(G, M) with a basis of classes."""

    module: Module
    degree: int
    space: StableHomSpace

    @property
    def dim(self) -> int:
        return self.space.stable_dim

    @property
    def classes(self) -> tuple[TateClass, ...]:
        return tuple(TateClass(self.degree, rep) for rep in self.space.representatives)

    def coordinates(self, cls: TateClass) -> tuple[int, ...]:
        if cls.degree != self.degree:
            raise StableCategoryError(
                f"class of degree {cls.degree} is not in degree {self.degree}"
            )
        return self.space.coordinates(cls.rep)


def tate_cohomology(G: Group, M: Module, i: int) -> TateCohomology:
    """Ĥ^i(G, M) as the stable hom space from the model Ω^i k."""
    if M.group != G:
        raise StableCategoryError(f"module lives over {M.group.name}, not {G.name}")
    source = omega_k(G, i, M.field)
    return TateCohomology(module=M, degree=i, space=phom_space(source, M))


def identification(A: Module, B: Module) -> ModuleMap:
    """A fixed stable isomorphism ``A → B``; identity when the modules coincide."""
    if A == B:
        return identity_map(A)
    return _IDENTIFICATIONS.get_or_compute((A.digest, B.digest), lambda: _identify(A, B))


def _identify(A: Module, B: Module) -> ModuleMap:
    result = is_stable_iso(A, B, attempts=IDENTIFICATION_ATTEMPTS)
    if result.forward is None:
        raise StableCategoryError(
            f"could not identify modules of dims {A.dim} and {B.dim} ({result.status.value})"
        )
    return result.forward


def _shifted(alpha: TateClass, j: int) -> ModuleMap:
    """``Ω^j(α)`` precomposed with the identification ``Ω^{i+j}k → Ω^j(Ω^i k)``."""
    G, F = alpha.rep.source.group, alpha.rep.field
    moved = omega_power_map(alpha.rep, j)
    start = identification(omega_k(G, alpha.degree + j, F), moved.source)
    return moved @ start


def graded_compose(alpha: TateClass, beta: TateClass) -> TateClass:
    """``α·β ∈ Ĥ^{i+j}(G, M)`` for ``α ∈ Ĥ^i(G, k)`` and ``β ∈ Ĥ^j(G, M)``.

    Computed as ``β ∘ Ω^j(α)`` after identifying ``Ω^j(Ω^i k)`` with ``Ω^{i+j}k``.

    Raises:
        StableCategoryError: if α does not land in the trivial module or the
            classes are not represented on the stored models of Ω^i k
    """
    G, F = beta.rep.source.group, beta.rep.field
    k = trivial_module(G, F)
    if alpha.rep.target != k:
        raise StableCategoryError("left factor must be a class with values in the trivial module")
    for cls in (alpha, beta):
        if cls.rep.source != omega_k(G, cls.degree, F):
            raise StableCategoryError(
                f"degree {cls.degree} class is not defined on Ω^{cls.degree}k"
            )
    j = beta.degree
    key = (alpha.degree, alpha.rep.source.digest, alpha.rep.mat.data.tobytes(), j)
    shifted = _SHIFTED.get_or_compute(key, lambda: _shifted(alpha, j))
    # Ω^j k is the stored model, so the shifted map already lands on β's source
    to_beta = identification(shifted.target, beta.rep.source)
    return TateClass(alpha.degree + j, beta.rep @ to_beta @ shifted)


def multiplication_matrix(alpha: TateClass, M: Module, j: int) -> Matrix:
    """Matrix of ``β ↦ α·β`` from Ĥ^j(G, M) to Ĥ^{i+j}(G, M) in their class bases."""
    G = M.group
    domain = tate_cohomology(G, M, j)
    codomain = tate_cohomology(G, M, alpha.degree + j)
    columns = [codomain.coordinates(graded_compose(alpha, beta)) for beta in domain.classes]
    rows = [[col[r] for col in columns] for r in range(codomain.dim)]
    return Matrix.from_rows(M.field, rows, cols=domain.dim) if rows else Matrix.zeros(
        M.field, 0, domain.dim
    )
