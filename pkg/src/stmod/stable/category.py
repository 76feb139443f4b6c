"""Stable module category: maps modulo projectives, syzygies, stable isomorphism."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
import structlog

from stmod.algebra.exactlin import (
    Matrix,
    PrimeField,
    column_space_basis,
    hstack,
    kernel_basis,
    rank,
    solve,
    solve_matrix,
)
from stmod.algebra.groups import Group, is_cyclic, is_p_group, prime_power
from stmod.algebra.reps import (
    CoverData,
    HomSpace,
    Module,
    ModuleMap,
    check_compatible,
    coordinate_selection,
    dual,
    dual_map,
    free_module,
    hom_space,
    identity_map,
    jordan_basis,
    projective_cover,
    submodule,
)
from stmod.caching import WriteOnceCache
from stmod.errors import ModuleValidationError, PGroupRequiredError, StableCategoryError

logger = structlog.get_logger(__name__)

__all__ = [
    "CoverData",
    "ProjectiveSplitting",
    "StableHomSpace",
    "StableIsoResult",
    "StableIsoStatus",
    "field_for",
    "is_stable_iso",
    "is_stably_trivial",
    "omega",
    "omega_inverse",
    "omega_inverse_map",
    "omega_map",
    "omega_power",
    "omega_power_map",
    "phom_space",
    "projective_free_core",
    "projective_rank",
    "require_stmod",
    "split_projective",
    "stable_hom",
]


def require_stmod(G: Group, F: PrimeField) -> None:
    """stmod(kG) is only meaningful (and non-degenerate) for a non-trivial p-group."""
    if G.order == 1:
        raise StableCategoryError("stmod(kG) is degenerate for the trivial group")
    if not is_p_group(G, F.p):
        raise PGroupRequiredError(f"{G.name} (order {G.order}) is not a {F.p}-group")


def field_for(G: Group) -> PrimeField:
    """The prime field whose characteristic divides |G|."""
    pp = prime_power(G.order)
    if pp is None:
        raise PGroupRequiredError(f"{G.name} has order {G.order}, not a prime power")
    return PrimeField(pp[0])


def _vec_columns(
    field: PrimeField, maps: list[ModuleMap] | tuple[ModuleMap, ...], n: int
) -> Matrix:
    if not maps:
        return Matrix.zeros(field, n, 0)
    return Matrix(field, np.stack([f.mat.vec() for f in maps], axis=1))


@dataclass(frozen=True, eq=False)
class StableHomSpace:
    """Hom(M, N) together with its subspace PHom(M, N) of maps factoring through projectives.

    ``representatives`` are hom-basis maps completing ``phom_basis`` to a basis
    of Hom(M, N); their classes form a basis of the stable hom space.
    """

    hom: HomSpace
    phom_basis: tuple[ModuleMap, ...]
    representatives: tuple[ModuleMap, ...]

    @property
    def source(self) -> Module:
        return self.hom.source

    @property
    def target(self) -> Module:
        return self.hom.target

    @property
    def stable_dim(self) -> int:
        return len(self.representatives)

    @property
    def phom_dim(self) -> int:
        return len(self.phom_basis)

    @cached_property
    def _phom_vectors(self) -> Matrix:
        return _vec_columns(self.source.field, self.phom_basis, self.source.dim * self.target.dim)

    @cached_property
    def _full_vectors(self) -> Matrix:
        n = self.source.dim * self.target.dim
        return _vec_columns(self.source.field, self.phom_basis + self.representatives, n)

    def contains(self, f: ModuleMap) -> bool:
        """True iff ``f`` factors through a projective."""
        self._check_map(f)
        if f.is_zero():
            return True
        if not self.phom_basis:
            return False
        return solve(self._phom_vectors, f.mat.vec().tolist()) is not None

    def coordinates(self, f: ModuleMap) -> tuple[int, ...]:
        """Coordinates of the stable class of ``f`` in the ``representatives`` basis."""
        self._check_map(f)
        if not self.representatives:
            return ()
        x = solve(self._full_vectors, f.mat.vec().tolist())
        if x is None:
            raise ModuleValidationError("map does not lie in the hom space")
        return tuple(int(c) for c in x.data[self.phom_dim :, 0])

    def combination(self, coeffs: tuple[int, ...] | list[int]) -> ModuleMap:
        F = self.source.field
        n = self.source.dim * self.target.dim
        reps = _vec_columns(F, self.representatives, n)
        vec = (reps.data @ np.asarray(coeffs, dtype=np.int64)) % F.p if coeffs else np.zeros(n)
        return ModuleMap(
            self.source, self.target, Matrix.from_vec(F, vec, self.target.dim, self.source.dim)
        )

    def _check_map(self, f: ModuleMap) -> None:
        if f.source != self.source or f.target != self.target:
            raise ModuleValidationError("map does not belong to this stable hom space")


_PHOM: WriteOnceCache[tuple[str, str], StableHomSpace] = WriteOnceCache("phom_space")


def phom_space(M: Module, N: Module) -> StableHomSpace:
    """PHom(M, N) as ``{π_N ∘ g : g ∈ Hom(M, P(N))}`` and the stable quotient."""
    check_compatible(M, N)
    require_stmod(M.group, M.field)
    return _PHOM.get_or_compute((M.digest, N.digest), lambda: _compute_phom(M, N))


stable_hom = phom_space


def _compute_phom(M: Module, N: Module) -> StableHomSpace:
    F = M.field
    hom = hom_space(M, N)
    cover = projective_cover(N)
    lifts = hom_space(M, cover.P)
    n = M.dim * N.dim
    spanning = _vec_columns(F, [cover.pi @ g for g in lifts.basis], n)
    phom_vecs = column_space_basis(spanning) if spanning.cols else spanning
    phom_basis = tuple(
        ModuleMap(M, N, Matrix.from_vec(F, phom_vecs.data[:, j], N.dim, M.dim))
        for j in range(phom_vecs.cols)
    )
    current = phom_vecs
    r = phom_vecs.cols
    reps: list[ModuleMap] = []
    for f in hom.basis:
        if r == hom.dim:
            break
        candidate = hstack([current, Matrix(F, f.mat.vec().reshape(n, 1))])
        cr = rank(candidate)
        if cr > r:
            current, r = candidate, cr
            reps.append(f)
    logger.debug(
        "phom_space_computed",
        source_dim=M.dim,
        target_dim=N.dim,
        hom_dim=hom.dim,
        phom_dim=len(phom_basis),
    )
    return StableHomSpace(hom=hom, phom_basis=phom_basis, representatives=tuple(reps))


def is_stably_trivial(f: ModuleMap) -> bool:
    """True iff ``f`` factors through a projective module."""
    return phom_space(f.source, f.target).contains(f)


# Syzygies


def omega(M: Module) -> Module:
    """Kernel of the minimal projective cover."""
    return projective_cover(M).omega


def omega_inverse(M: Module) -> Module:
    """``Ω⁻¹M := (Ω(M*))*``, using that kG is self-injective."""
    return dual(omega(dual(M)))


def omega_map(f: ModuleMap) -> ModuleMap:
    """Ωf: restriction to kernels of a lift ``F: P(M) → P(N)`` with ``π_N∘F = f∘π_M``."""
    cover_m, cover_n = projective_cover(f.source), projective_cover(f.target)
    lift = _lift_along_covers(f, cover_m, cover_n)
    restricted = solve_matrix(cover_n.ker_embed.mat, lift.mat @ cover_m.ker_embed.mat)
    if restricted is None:
        raise StableCategoryError("lift does not map kernel into kernel")
    return ModuleMap(cover_m.omega, cover_n.omega, restricted)


def _lift_along_covers(f: ModuleMap, cover_m: CoverData, cover_n: CoverData) -> ModuleMap:
    F = f.field
    G = f.source.group
    n, t = G.order, cover_m.rank
    cols = np.zeros((cover_n.P.dim, t * n), dtype=np.int64)
    if t:
        images = solve_matrix(cover_n.pi.mat, f.mat @ cover_m.tops)
        if images is None:
            raise StableCategoryError("projective cover map is not surjective")
        for i in range(t):
            y = images.data[:, i]
            for h in range(n):
                cols[:, i * n + h] = (cover_n.P.act(h).data @ y) % F.p
    return ModuleMap(cover_m.P, cover_n.P, Matrix(F, cols))


def omega_inverse_map(f: ModuleMap) -> ModuleMap:
    return dual_map(omega_map(dual_map(f)))


def omega_power(M: Module, j: int) -> Module:
    """Ω^j M for any integer j, iterating Ω or Ω⁻¹."""
    for _ in range(abs(j)):
        M = omega(M) if j > 0 else omega_inverse(M)
    return M


def omega_power_map(f: ModuleMap, j: int) -> ModuleMap:
    for _ in range(abs(j)):
        f = omega_map(f) if j > 0 else omega_inverse_map(f)
    return f


# Projective summands


def _norm_matrix(M: Module) -> Matrix:
    return Matrix(M.field, M.stack.sum(axis=0))


def projective_rank(M: Module) -> int:
    """Number of free summands: the rank of the norm element Σ_g g acting on M."""
    require_stmod(M.group, M.field)
    if M.dim == 0:
        return 0
    return rank(_norm_matrix(M))


@dataclass(frozen=True, eq=False)
class ProjectiveSplitting:
    """``M ≅ core ⊕ kG^free_rank`` with explicit maps.

    ``embed: core → M`` and ``project: M → core`` satisfy ``project∘embed = id``;
    ``embed∘project`` differs from ``id_M`` by a map factoring through ``kG^free_rank``.
    """

    module: Module
    core: Module
    embed: ModuleMap
    project: ModuleMap
    free_rank: int


_SPLITTINGS: WriteOnceCache[str, ProjectiveSplitting] = WriteOnceCache("projective_splitting")


def split_projective(M: Module) -> ProjectiveSplitting:
    require_stmod(M.group, M.field)
    return _SPLITTINGS.get_or_compute(M.digest, lambda: _compute_splitting(M))


def _compute_splitting(M: Module) -> ProjectiveSplitting:
    r = projective_rank(M)
    if r == 0:
        ident = identity_map(M)
        return ProjectiveSplitting(M, M, ident, ident, 0)
    G, F = M.group, M.field
    n = G.order
    norm = _norm_matrix(M)
    # generators whose norm images are independent span a free submodule
    chosen: list[int] = []
    current = Matrix.zeros(F, M.dim, 0)
    for j in range(M.dim):
        if len(chosen) == r:
            break
        candidate = hstack([current, Matrix(F, norm.data[:, [j]])])
        if rank(candidate) > len(chosen):
            current = candidate
            chosen.append(j)
    free = free_module(G, F, r)
    cols = np.zeros((M.dim, r * n), dtype=np.int64)
    for i, j in enumerate(chosen):
        for h in range(n):
            cols[:, i * n + h] = M.act(h).data[:, j]
    iota = ModuleMap(free, M, Matrix(F, cols))
    # self-injectivity: the identity of kG^r extends along iota
    to_free = hom_space(M, free)
    system = _vec_columns(F, [b @ iota for b in to_free.basis], free.dim * free.dim)
    coeffs = solve(system, Matrix.identity(F, free.dim).vec().tolist())
    if coeffs is None:
        raise StableCategoryError("free submodule does not split off")
    retraction = to_free.combination([int(c) for c in coeffs.data[:, 0]])
    core, embed = submodule(M, kernel_basis(retraction.mat), name=f"core({M.name})")
    idempotent = identity_map(M) - iota @ retraction
    proj = solve_matrix(embed.mat, idempotent.mat)
    if proj is None:
        raise StableCategoryError("complement projection does not land in the core")
    logger.debug("projective_split", dim=M.dim, free_rank=r, core_dim=core.dim)
    return ProjectiveSplitting(M, core, embed, ModuleMap(M, core, proj), r)


def projective_free_core(M: Module) -> Module:
    """M with all free summands removed."""
    return split_projective(M).core


# Stable isomorphism


class StableIsoStatus(str, Enum):
    """Outcome of a stable isomorphism test."""

    ISOMORPHIC = "isomorphic"
    NOT_ISOMORPHIC = "not_isomorphic"
    NOT_FOUND = "not_found"


@dataclass(frozen=True, eq=False)
class StableIsoResult:
    """Verdict plus witnesses ``forward: M → N``, ``backward: N → M`` when isomorphic."""

    status: StableIsoStatus
    definitive: bool
    method: str
    forward: ModuleMap | None = None
    backward: ModuleMap | None = None

    @property
    def is_iso(self) -> bool:
        return self.status == StableIsoStatus.ISOMORPHIC

    def __bool__(self) -> bool:
        return self.is_iso


def is_stable_iso(M: Module, N: Module, attempts: int = 20, seed: int = 0) -> StableIsoResult:
    """Decide M ≅ N in stmod(kG).

    Definitive for cyclic groups (Jordan blocks) and whenever the projective-free
    cores differ in dimension; otherwise a seeded random search whose failure is
    reported as ``not_found``.
    """
    check_compatible(M, N)
    require_stmod(M.group, M.field)
    if is_cyclic(M.group):
        return _cyclic_stable_iso(M, N)
    split_m, split_n = split_projective(M), split_projective(N)
    core_m, core_n = split_m.core, split_n.core
    if core_m.dim != core_n.dim:
        return StableIsoResult(StableIsoStatus.NOT_ISOMORPHIC, True, "core-dimension")
    if core_m == core_n:
        return StableIsoResult(
            StableIsoStatus.ISOMORPHIC,
            True,
            "equal-core",
            split_n.embed @ split_m.project,
            split_m.embed @ split_n.project,
        )
    forward_space = hom_space(core_m, core_n)
    if forward_space.dim == 0:
        return StableIsoResult(StableIsoStatus.NOT_ISOMORPHIC, True, "no-maps")
    backward_space = hom_space(core_n, core_m)
    phom_mm = phom_space(core_m, core_m)
    phom_nn = phom_space(core_n, core_n)
    rng = np.random.default_rng(seed)
    F = M.field
    for attempt in range(attempts):
        coeffs = rng.integers(0, F.p, size=forward_space.dim).tolist()
        f = forward_space.combination(coeffs)
        g = _stable_left_inverse(f, backward_space, phom_mm)
        if g is None:
            continue
        if phom_nn.contains(f @ g - identity_map(core_n)):
            logger.debug("stable_iso_found", attempt=attempt, dim=core_m.dim)
            return StableIsoResult(
                StableIsoStatus.ISOMORPHIC,
                False,
                "random-search",
                split_n.embed @ f @ split_m.project,
                split_m.embed @ g @ split_n.project,
            )
    logger.info("stable_iso_not_found", attempts=attempts, dim=core_m.dim)
    return StableIsoResult(StableIsoStatus.NOT_FOUND, False, "random-search")


def _stable_left_inverse(
    f: ModuleMap, backward: HomSpace, phom_source: StableHomSpace
) -> ModuleMap | None:
    """Some g with ``g∘f ≡ id`` modulo PHom, found by one linear solve."""
    F = f.field
    M = f.source
    n = M.dim * M.dim
    columns = [b @ f for b in backward.basis] + list(phom_source.phom_basis)
    system = _vec_columns(F, columns, n)
    x = solve(system, Matrix.identity(F, M.dim).vec().tolist())
    if x is None:
        return None
    return backward.combination([int(c) for c in x.data[: backward.dim, 0]])


def _cyclic_stable_iso(M: Module, N: Module) -> StableIsoResult:
    n = M.group.order
    jm, jn = jordan_basis(M), jordan_basis(N)
    if jm.jordan.non_projective(n) != jn.jordan.non_projective(n):
        return StableIsoResult(StableIsoStatus.NOT_ISOMORPHIC, True, "jordan")
    F = M.field
    # blocks are sorted longest first, so the free blocks fill the leading coordinates
    start_m = jm.jordan.projective_count(n) * n
    start_n = jn.jordan.projective_count(n) * n
    sel_m = coordinate_selection(F, M.dim, list(range(start_m, M.dim)))
    sel_n = coordinate_selection(F, N.dim, list(range(start_n, N.dim)))
    forward = jn.to_module.mat @ sel_n.T @ sel_m @ jm.from_module.mat
    backward = jm.to_module.mat @ sel_m.T @ sel_n @ jn.from_module.mat
    return StableIsoResult(
        StableIsoStatus.ISOMORPHIC,
        True,
        "jordan",
        ModuleMap(M, N, forward),
        ModuleMap(N, M, backward),
    )
