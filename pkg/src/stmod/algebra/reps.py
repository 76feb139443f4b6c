"""Finite-dimensional kG-modules as matrix representations.

A module stores one matrix per group element. Every constructor validates the
full multiplication rule ``action(g)·action(h) = action(gh)``; maps validate
the intertwiner identity on a generating set, which implies it for all of G.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
import structlog

from stmod.algebra.exactlin import (
    Matrix,
    PrimeField,
    block_diag,
    column_space_basis,
    hstack,
    inverse,
    kernel_basis,
    rank,
    solve_matrix,
)
from stmod.algebra.groups import Group, Subgroup, cyclic_generator, is_cyclic, is_p_group
from stmod.caching import WriteOnceCache
from stmod.errors import ModuleValidationError, PGroupRequiredError

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class Module:
    """A kG-module: one invertible matrix per group element."""

    group: Group
    field: PrimeField
    action: tuple[Matrix, ...]
    name: str = ""

    def __post_init__(self) -> None:
        G, F = self.group, self.field
        if len(self.action) != G.order:
            raise ModuleValidationError(
                f"expected {G.order} action matrices, got {len(self.action)}"
            )
        d = self.action[0].rows
        for g, mat in enumerate(self.action):
            if mat.field != F or mat.shape != (d, d):
                raise ModuleValidationError(
                    f"action of element {g} is not a {d}x{d} matrix over {F}"
                )
        if self.action[0] != Matrix.identity(F, d):
            raise ModuleValidationError("identity element does not act as the identity")
        stack = self.stack
        for g in range(G.order):
            products = (stack[g] @ stack) % F.p
            if not np.array_equal(products, stack[G.table[g]]):
                h = int(np.flatnonzero((products != stack[G.table[g]]).any(axis=(1, 2)))[0])
                raise ModuleValidationError(
                    f"action(g)·action(h) != action(gh) for g={g}, h={h}"
                )

    @property
    def dim(self) -> int:
        return self.action[0].rows

    @cached_property
    def stack(self) -> np.ndarray:
        """All action matrices as one ``(|G|, d, d)`` array."""
        d = self.action[0].rows
        if d == 0:
            return np.zeros((self.group.order, 0, 0), dtype=np.int64)
        return np.stack([m.data for m in self.action])

    @cached_property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(self.group.digest.encode())
        h.update(str(self.field.p).encode())
        h.update(str(self.dim).encode())
        h.update(self.stack.tobytes())
        return h.hexdigest()[:20]

    def act(self, g: int) -> Matrix:
        return self.action[g]

    def same_category(self, other: Module) -> bool:
        return self.group == other.group and self.field == other.field

    def with_name(self, name: str) -> Module:
        return Module(self.group, self.field, self.action, name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Module):
            return NotImplemented
        return (
            self.same_category(other)
            and self.dim == other.dim
            and bool(np.array_equal(self.stack, other.stack))
        )

    def __hash__(self) -> int:
        return hash(self.digest)

    def __repr__(self) -> str:
        label = f"{self.name}, " if self.name else ""
        return f"Module({label}{self.group.name}, {self.field}, dim={self.dim})"


def check_compatible(M: Module, N: Module) -> None:
    if not M.same_category(N):
        raise ModuleValidationError(
            f"modules live over different groups or fields: {M!r} vs {N!r}"
        )


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """A kG-linear map ``source → target`` with matrix ``target.dim × source.dim``."""

    source: Module
    target: Module
    mat: Matrix

    def __post_init__(self) -> None:
        check_compatible(self.source, self.target)
        if self.mat.shape != (self.target.dim, self.source.dim):
            raise ModuleValidationError(
                f"map matrix has shape {self.mat.shape}, "
                f"expected ({self.target.dim}, {self.source.dim})"
            )
        for g in self.source.group.generators:
            if self.mat @ self.source.act(g) != self.target.act(g) @ self.mat:
                raise ModuleValidationError(f"map does not intertwine the action of element {g}")

    @property
    def field(self) -> PrimeField:
        return self.source.field

    def __matmul__(self, other: ModuleMap) -> ModuleMap:
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise ModuleValidationError("composition of maps with mismatched modules")
        return ModuleMap(other.source, self.target, self.mat @ other.mat)

    def __add__(self, other: ModuleMap) -> ModuleMap:
        self._check_parallel(other)
        return ModuleMap(self.source, self.target, self.mat + other.mat)

    def __sub__(self, other: ModuleMap) -> ModuleMap:
        self._check_parallel(other)
        return ModuleMap(self.source, self.target, self.mat - other.mat)

    def scale(self, c: int) -> ModuleMap:
        return ModuleMap(self.source, self.target, self.mat.scale(c))

    def _check_parallel(self, other: ModuleMap) -> None:
        if other.source != self.source or other.target != self.target:
            raise ModuleValidationError("maps have different sources or targets")

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.mat == other.mat

    def __hash__(self) -> int:
        return hash((self.source.digest, self.target.digest, self.mat))


@dataclass(frozen=True)
class HomSpace:
    """A basis of Hom_kG(source, target)."""

    source: Module
    target: Module
    basis: tuple[ModuleMap, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def vectors(self) -> Matrix:
        """Basis maps flattened (row-major) into the columns of one matrix."""
        n = self.source.dim * self.target.dim
        if not self.basis:
            return Matrix.zeros(self.source.field, n, 0)
        return Matrix(self.source.field, np.stack([f.mat.vec() for f in self.basis], axis=1))

    def combination(self, coeffs: Sequence[int]) -> ModuleMap:
        F = self.source.field
        vec = (self.vectors.data @ np.asarray(coeffs, dtype=np.int64)) % F.p
        return ModuleMap(
            self.source, self.target, Matrix.from_vec(F, vec, self.target.dim, self.source.dim)
        )


@dataclass(frozen=True)
class JordanType:
    """Multiset of Jordan block sizes of σ−1 on a module over a cyclic p-group."""

    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sizes", tuple(sorted(self.sizes, reverse=True)))

    @property
    def dim(self) -> int:
        return sum(self.sizes)

    def counts(self) -> Counter[int]:
        return Counter(self.sizes)

    def union(self, other: JordanType) -> JordanType:
        return JordanType(self.sizes + other.sizes)

    def non_projective(self, group_order: int) -> JordanType:
        """Blocks that are not free kG-summands (size < |G|)."""
        return JordanType(tuple(s for s in self.sizes if s < group_order))

    def projective_count(self, group_order: int) -> int:
        return sum(1 for s in self.sizes if s == group_order)


class Submodule(NamedTuple):
    module: Module
    embedding: ModuleMap


class DirectSum(NamedTuple):
    module: Module
    inclusions: tuple[ModuleMap, ...]
    projections: tuple[ModuleMap, ...]


@dataclass(frozen=True, eq=False)
class CoverData:
    """Projective cover ``pi: P ↠ M`` with kernel embedding ``ΩM → P``.

    ``tops`` holds the chosen generators of M modulo its radical; ``pi`` sends
    the identity basis vector of the i-th free summand to ``tops[:, i]``.
    """

    P: Module
    pi: ModuleMap
    ker_embed: ModuleMap
    tops: Matrix

    @property
    def omega(self) -> Module:
        return self.ker_embed.source

    @property
    def rank(self) -> int:
        return self.tops.cols


# Constructors


def module_from_generators(
    G: Group,
    F: PrimeField,
    generators: Mapping[int, Matrix],
    name: str = "",
    dim: int | None = None,
) -> Module:
    """Expand generator matrices to a full element → matrix table, then validate.

    ``dim``, when given, must match every generator and sizes a module with no generators.
    """
    dims = {m.rows for m in generators.values()}
    if dim is not None and dims - {dim}:
        raise ModuleValidationError(f"generator sizes {sorted(dims)} do not match dim {dim}")
    dims = dims or {dim or 0}
    if len(dims) != 1:
        raise ModuleValidationError("generator matrices have different sizes")
    d = dims.pop()
    for g in generators:
        G.check_element(g)
    table: dict[int, Matrix] = {0: Matrix.identity(F, d)}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, mat in generators.items():
                y = G.mul(s, x)
                if y not in table:
                    table[y] = mat @ table[x]
                    nxt.append(y)
        frontier = nxt
    if len(table) != G.order:
        raise ModuleValidationError(
            f"generator elements {sorted(generators)} do not generate {G.name}"
        )
    return Module(G, F, tuple(table[g] for g in range(G.order)), name)


def zero_module(G: Group, F: PrimeField) -> Module:
    return Module(G, F, tuple(Matrix.zeros(F, 0, 0) for _ in range(G.order)), "0")


def trivial_module(G: Group, F: PrimeField) -> Module:
    """The trivial module k: every element acts as [1]."""
    return Module(G, F, tuple(Matrix.identity(F, 1) for _ in range(G.order)), "k")


def regular_module(G: Group, F: PrimeField) -> Module:
    """kG with g acting by left multiplication, ``g·e_h = e_{gh}``."""
    n = G.order
    action = []
    for g in range(n):
        perm = np.zeros((n, n), dtype=np.int64)
        perm[G.table[g], np.arange(n)] = 1
        action.append(Matrix(F, perm))
    return Module(G, F, tuple(action), "kG")


def free_module(G: Group, F: PrimeField, rank_: int) -> Module:
    """kG^rank, basis index ``copy·|G| + h``."""
    if rank_ == 0:
        return zero_module(G, F)
    return direct_sum_all([regular_module(G, F)] * rank_).module.with_name(f"kG^{rank_}")


def require_p_group(G: Group, F: PrimeField) -> None:
    if not is_p_group(G, F.p):
        raise PGroupRequiredError(f"{G.name} (order {G.order}) is not a {F.p}-group")


def _cyclic_p_group_generator(G: Group, F: PrimeField) -> int:
    if not is_cyclic(G):
        raise PGroupRequiredError(f"{G.name} is not cyclic")
    require_p_group(G, F)
    return cyclic_generator(G)


def cyclic_module(G: Group, length: int, F: PrimeField | None = None) -> Module:
    """Basis ``U, (σ−1)U, ..., (σ−1)^{ℓ−1}U`` with ``(σ−1)^ℓ U = 0``."""
    if F is None:
        F = PrimeField(_smallest_prime_factor(G.order))
    sigma = _cyclic_p_group_generator(G, F)
    if not 1 <= length <= G.order:
        raise ModuleValidationError(f"cyclic module length must be in 1..{G.order}, got {length}")
    nil = np.zeros((length, length), dtype=np.int64)
    nil[np.arange(1, length), np.arange(length - 1)] = 1
    S = Matrix(F, np.eye(length, dtype=np.int64) + nil)
    return module_from_generators(G, F, {sigma: S}, name=f"L{length}")


def _smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise PGroupRequiredError("the trivial group has no characteristic to infer")
    return next(d for d in range(2, n + 1) if n % d == 0)


def module_from_jordan_type(G: Group, F: PrimeField, sizes: Sequence[int]) -> Module:
    if not sizes:
        return zero_module(G, F)
    return direct_sum_all([cyclic_module(G, s, F) for s in sizes]).module


def change_basis(M: Module, T: Matrix) -> Module:
    """The module with action ``T⁻¹·action(g)·T``; ``T`` maps new coordinates to old."""
    T_inv = inverse(T)
    return Module(M.group, M.field, tuple(T_inv @ a @ T for a in M.action), M.name)


def direct_sum_all(modules: Sequence[Module]) -> DirectSum:
    first = modules[0]
    for M in modules[1:]:
        check_compatible(first, M)
    G, F = first.group, first.field
    action = tuple(block_diag([M.act(g) for M in modules]) for g in range(G.order))
    total = Module(G, F, action, "⊕".join(M.name or "?" for M in modules))
    inclusions, projections = [], []
    offset = 0
    for M in modules:
        inc = np.zeros((total.dim, M.dim), dtype=np.int64)
        inc[offset : offset + M.dim, :] = np.eye(M.dim, dtype=np.int64)
        inclusions.append(ModuleMap(M, total, Matrix(F, inc)))
        projections.append(ModuleMap(total, M, Matrix(F, inc.T)))
        offset += M.dim
    return DirectSum(total, tuple(inclusions), tuple(projections))


def direct_sum(M: Module, N: Module) -> Module:
    """Block-diagonal action on ``M ⊕ N``."""
    return direct_sum_all([M, N]).module


def dual(M: Module) -> Module:
    """``action_{M*}(g) = transpose(action_M(g⁻¹))``."""
    G = M.group
    action = tuple(M.act(G.inverse(g)).T for g in range(G.order))
    return Module(G, M.field, action, f"{M.name}*" if M.name else "")


# Maps


def identity_map(M: Module) -> ModuleMap:
    return ModuleMap(M, M, Matrix.identity(M.field, M.dim))


def zero_map(M: Module, N: Module) -> ModuleMap:
    return ModuleMap(M, N, Matrix.zeros(M.field, N.dim, M.dim))


def element_map(M: Module, x: int) -> ModuleMap:
    """Multiplication by ``x − 1``; kG-linear whenever x is central."""
    return ModuleMap(M, M, M.act(x) - Matrix.identity(M.field, M.dim))


def direct_sum_map(f: ModuleMap, g: ModuleMap) -> ModuleMap:
    return ModuleMap(
        direct_sum(f.source, g.source), direct_sum(f.target, g.target), block_diag([f.mat, g.mat])
    )


def dual_map(f: ModuleMap) -> ModuleMap:
    """``f*: N* → M*`` for ``f: M → N``."""
    return ModuleMap(dual(f.target), dual(f.source), f.mat.T)


def hom_space(M: Module, N: Module) -> HomSpace:
    """Basis of Hom_kG(M, N) from the stacked intertwiner equations ``X·M(s) = N(s)·X``."""
    check_compatible(M, N)
    F = M.field
    dm, dn = M.dim, N.dim
    if dm == 0 or dn == 0:
        return HomSpace(M, N, ())
    eye_m = np.eye(dm, dtype=np.int64)
    eye_n = np.eye(dn, dtype=np.int64)
    blocks = [
        np.kron(eye_n, M.act(s).data.T) - np.kron(N.act(s).data, eye_m)
        for s in M.group.generators
    ]
    if not blocks:
        system = Matrix.zeros(F, 0, dm * dn)
    else:
        system = Matrix(F, np.vstack(blocks))
    K = kernel_basis(system)
    basis = tuple(
        ModuleMap(M, N, Matrix.from_vec(F, K.data[:, j], dn, dm)) for j in range(K.cols)
    )
    return HomSpace(M, N, basis)


def relative_trace(M: Module, N: Module, X: Matrix) -> Matrix:
    """``Σ_g N(g)·X·M(g⁻¹)``; its image is exactly the maps factoring through projectives."""
    G = M.group
    total = np.zeros((N.dim, M.dim), dtype=np.int64)
    for g in range(G.order):
        total = (total + N.act(g).data @ X.data @ M.act(G.inverse(g)).data) % M.field.p
    return Matrix(M.field, total)


# Submodules, radicals, covers


def submodule(M: Module, columns: Matrix, name: str = "") -> Submodule:
    """The submodule spanned by ``columns`` with a canonical basis and its embedding."""
    F = M.field
    B = column_space_basis(columns) if columns.cols else Matrix.zeros(F, M.dim, 0)
    r = B.cols
    if r == 0:
        sub = zero_module(M.group, F)
        return Submodule(sub, zero_map(sub, M))
    gens = {}
    for s in M.group.generators:
        restricted = solve_matrix(B, M.act(s) @ B)
        if restricted is None:
            raise ModuleValidationError("subspace is not invariant under the group action")
        gens[s] = restricted
    sub = module_from_generators(M.group, F, gens, name)
    return Submodule(sub, ModuleMap(sub, M, B))


def radical(M: Module) -> Submodule:
    """``rad M = span{(g−1)m}``, the augmentation ideal times M for a p-group."""
    require_p_group(M.group, M.field)
    if M.dim == 0:
        return submodule(M, Matrix.zeros(M.field, 0, 0))
    eye = Matrix.identity(M.field, M.dim)
    spans = hstack([M.act(g) - eye for g in range(1, M.group.order)])
    return submodule(M, spans, name=f"rad({M.name})" if M.name else "")


def top_generators(M: Module) -> Matrix:
    """Standard basis vectors chosen greedily to span M modulo its radical."""
    rad = radical(M).embedding.mat
    F = M.field
    current = rad
    chosen: list[int] = []
    r = rank(current) if current.cols else 0
    for j in range(M.dim):
        e = Matrix(F, np.eye(M.dim, dtype=np.int64)[:, [j]])
        candidate = hstack([current, e]) if current.cols else e
        cr = rank(candidate)
        if cr > r:
            current, r = candidate, cr
            chosen.append(j)
    return Matrix(F, np.eye(M.dim, dtype=np.int64)[:, chosen])


_COVERS: WriteOnceCache[str, CoverData] = WriteOnceCache("projective_cover")


def projective_cover(M: Module) -> CoverData:
    """Minimal projective cover ``kG^t ↠ M`` with ``t = dim(M / rad M)``."""
    require_p_group(M.group, M.field)
    return _COVERS.get_or_compute(M.digest, lambda: _compute_cover(M))


def _compute_cover(M: Module) -> CoverData:
    G, F = M.group, M.field
    tops = top_generators(M)
    t = tops.cols
    P = free_module(G, F, t)
    n = G.order
    if t == 0:
        pi = zero_map(P, M)
    else:
        cols = np.zeros((M.dim, t * n), dtype=np.int64)
        for i in range(t):
            for h in range(n):
                cols[:, i * n + h] = (M.act(h).data @ tops.data[:, i]) % F.p
        pi = ModuleMap(P, M, Matrix(F, cols))
    kernel = kernel_basis(pi.mat)
    omega, ker_embed = submodule(P, kernel, name=f"Ω({M.name})" if M.name else "")
    logger.debug(
        "projective_cover_computed", group=G.name, dim=M.dim, rank=t, omega_dim=omega.dim
    )
    return CoverData(P=P, pi=pi, ker_embed=ker_embed, tops=tops)


# Induction and restriction


def _check_subgroup_module(S: Subgroup, M: Module) -> None:
    if M.group != S.group:
        raise ModuleValidationError(
            f"module group {M.group.name} does not match subgroup {S.group.name}"
        )


def induce(S: Subgroup, M: Module) -> Module:
    """``M↑^G`` with coset-major basis ``(r_a, m_j) → a·dim M + j``.

    ``g·(r_a ⊗ m) = r_b ⊗ (h·m)`` where ``g·r_a = r_b·h``.
    """
    _check_subgroup_module(S, M)
    G, F = S.parent, M.field
    d, idx = M.dim, S.index
    action = []
    for g in range(G.order):
        mat = np.zeros((idx * d, idx * d), dtype=np.int64)
        for a, r_a in enumerate(S.coset_reps):
            gr = G.mul(g, r_a)
            b = S.coset_index(gr)
            h = G.mul(G.inverse(S.coset_reps[b]), gr)
            mat[b * d : (b + 1) * d, a * d : (a + 1) * d] = M.act(S.local(h)).data
        action.append(Matrix(F, mat))
    name = f"{M.name}↑" if M.name else ""
    return Module(G, F, tuple(action), name)


def induce_map(S: Subgroup, f: ModuleMap) -> ModuleMap:
    """``f↑^G = id ⊗ f`` on the coset-major basis."""
    eye = Matrix.identity(f.field, S.index)
    mat = Matrix(f.field, np.kron(eye.data, f.mat.data))
    return ModuleMap(induce(S, f.source), induce(S, f.target), mat)


def restrict(M: Module, S: Subgroup) -> Module:
    """Same space, action restricted to the members of ``S``."""
    if M.group != S.parent:
        raise ModuleValidationError("module does not live over the subgroup's parent")
    name = f"{M.name}↓" if M.name else ""
    return Module(S.group, M.field, tuple(M.act(g) for g in S.members), name)


def restrict_map(f: ModuleMap, S: Subgroup) -> ModuleMap:
    return ModuleMap(restrict(f.source, S), restrict(f.target, S), f.mat)


def induction_retract(S: Subgroup, M: Module) -> tuple[ModuleMap, ModuleMap]:
    """H-maps ``ι: M → M↑^G↓_H`` and ``π: M↑^G↓_H → M`` through the identity coset.

    ``π∘ι = id``; for any H-map f, ``π∘(f↑^G↓_H)∘ι = f``.
    """
    if S.coset_reps[0] != 0:
        raise ModuleValidationError("first coset representative must be the identity")
    _check_subgroup_module(S, M)
    res = restrict(induce(S, M), S)
    F = M.field
    inc = np.zeros((res.dim, M.dim), dtype=np.int64)
    inc[: M.dim, :] = np.eye(M.dim, dtype=np.int64)
    return ModuleMap(M, res, Matrix(F, inc)), ModuleMap(res, M, Matrix(F, inc.T))


# Cyclic p-groups


def _nilpotent(M: Module) -> Matrix:
    sigma = _cyclic_p_group_generator(M.group, M.field)
    return M.act(sigma) - Matrix.identity(M.field, M.dim)


def jordan_type(M: Module) -> JordanType:
    """Block sizes of σ−1 from the ranks of its powers."""
    N = _nilpotent(M)
    d = M.dim
    ranks = [d]
    power = Matrix.identity(M.field, d)
    while ranks[-1] > 0:
        power = power @ N
        ranks.append(rank(power))
    ranks.append(0)
    sizes: list[int] = []
    for j in range(1, len(ranks) - 1):
        at_least_j = ranks[j - 1] - ranks[j]
        at_least_next = ranks[j] - ranks[j + 1]
        sizes.extend([j] * (at_least_j - at_least_next))
    return JordanType(tuple(sizes))


@dataclass(frozen=True, eq=False)
class JordanDecomposition:
    """An explicit isomorphism between M and a direct sum of cyclic modules."""

    jordan: JordanType
    standard: Module
    to_module: ModuleMap
    from_module: ModuleMap
    block_offsets: tuple[int, ...] = ()


def jordan_basis(M: Module) -> JordanDecomposition:
    """Chains ``v, Nv, ..., N^{s−1}v`` for N = σ−1, longest blocks first."""
    N = _nilpotent(M)
    F, d = M.field, M.dim
    jt = jordan_type(M)
    standard = module_from_jordan_type(M.group, F, jt.sizes)
    if d == 0:
        empty = zero_map(standard, M)
        return JordanDecomposition(jt, standard, empty, zero_map(M, standard))
    max_size = jt.sizes[0]
    kernels = [kernel_basis(N.power(j)) for j in range(max_size + 1)]
    chains: list[tuple[Matrix, int]] = []
    for s in range(max_size, 0, -1):
        span_cols = [kernels[s - 1]] if kernels[s - 1].cols else []
        for v, length in chains:
            for a in range(length - s, length):
                span_cols.append(N.power(a) @ v)
        current = hstack(span_cols) if span_cols else Matrix.zeros(F, d, 0)
        r = rank(current) if current.cols else 0
        for j in range(kernels[s].cols):
            v = Matrix(F, kernels[s].data[:, [j]])
            candidate = hstack([current, v]) if current.cols else v
            cr = rank(candidate)
            if cr > r:
                current, r = candidate, cr
                chains.append((v, s))
    columns = [N.power(a) @ v for v, length in chains for a in range(length)]
    T = hstack(columns)
    offsets, offset = [], 0
    for _, length in chains:
        offsets.append(offset)
        offset += length
    return JordanDecomposition(
        jordan=jt,
        standard=standard,
        to_module=ModuleMap(standard, M, T),
        from_module=ModuleMap(M, standard, inverse(T)),
        block_offsets=tuple(offsets),
    )


def coordinate_selection(F: PrimeField, total: int, indices: Sequence[int]) -> Matrix:
    """The ``len(indices) × total`` matrix picking the given coordinates."""
    sel = np.zeros((len(indices), total), dtype=np.int64)
    if indices:
        sel[np.arange(len(indices)), list(indices)] = 1
    return Matrix(F, sel)