"""Finite groups given by Cayley tables.

Conventions that are part of the file format: element 0 is the identity and,
for cyclic groups built here, element ``i`` is ``σ^i`` so the generator sits
at index 1. Direct products index ``(i1, i2)`` as ``i1·|G2| + i2``.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog

from stmod.errors import FieldError, GroupTableError

logger = structlog.get_logger(__name__)

MAX_GROUP_ORDER = 64


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``n = p^m`` and ``m >= 1``, or ``None``."""
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    m = 0
    while n % p == 0:
        n //= p
        m += 1
    return (p, m) if n == 1 else None


@dataclass(frozen=True, eq=False)
class Group:
    """A finite group stored by its full multiplication table."""

    name: str
    table: np.ndarray

    def __post_init__(self) -> None:
        table = np.array(self.table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupTableError(f"{self.name}: table must be a non-empty square array")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise GroupTableError(f"{self.name}: table entries must lie in 0..{n - 1}")
        expected = np.arange(n)
        if not (np.sort(table, axis=1) == expected).all():
            raise GroupTableError(f"{self.name}: a row is not a permutation (Latin square)")
        if not (np.sort(table, axis=0) == expected[:, None]).all():
            raise GroupTableError(f"{self.name}: a column is not a permutation (Latin square)")
        if not ((table[0] == expected).all() and (table[:, 0] == expected).all()):
            raise GroupTableError(f"{self.name}: element 0 is not a two-sided identity")
        left = table[table, :]
        right = table[np.arange(n)[:, None, None], table[None, :, :]]
        if not np.array_equal(left, right):
            raise GroupTableError(f"{self.name}: multiplication is not associative")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def check_element(self, g: int) -> None:
        if not 0 <= g < self.order:
            raise GroupTableError(f"{self.name}: element index {g} out of range")

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(int(np.flatnonzero(self.table[g] == 0)[0]) for g in range(self.order))

    def inverse(self, g: int) -> int:
        return self.inverses[g]

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverse(g), -k
        x = 0
        for _ in range(k):
            x = self.mul(x, g)
        return x

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set: greedily the smallest element outside the current closure."""
        gens: list[int] = []
        closure = {0}
        for g in range(self.order):
            if g not in closure:
                gens.append(g)
                closure = set(closure_of(self, gens))
        return tuple(gens)

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.table.tobytes()).hexdigest()[:16]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Group):
            return NotImplemented
        return bool(np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __repr__(self) -> str:
        return f"Group({self.name}, order={self.order})"


def from_table(name: str, table: list[list[int]]) -> Group:
    if len(table) > MAX_GROUP_ORDER:
        raise GroupTableError(f"{name}: order {len(table)} exceeds {MAX_GROUP_ORDER}")
    widths = {len(row) for row in table}
    if len(widths) > 1:
        raise GroupTableError(f"{name}: ragged table with row lengths {sorted(widths)}")
    try:
        data = np.array(table, dtype=np.int64)
    except OverflowError as e:
        raise GroupTableError(f"{name}: table entries must lie in 0..{len(table) - 1}") from e
    return Group(name, data)


def cyclic(n: int) -> Group:
    """The cyclic group C_n with ``σ`` at index 1."""
    if n < 1:
        raise GroupTableError(f"cyclic group order must be positive, got {n}")
    i = np.arange(n)
    return Group(f"C{n}", (i[:, None] + i[None, :]) % n)


def direct_product(G1: Group, G2: Group) -> Group:
    """Componentwise product with lexicographic indexing ``i1·|G2| + i2``."""
    n1, n2 = G1.order, G2.order
    table = G1.table[:, None, :, None] * n2 + G2.table[None, :, None, :]
    return Group(f"{G1.name}x{G2.name}", table.reshape(n1 * n2, n1 * n2))


def closure_of(G: Group, generators: list[int] | tuple[int, ...]) -> list[int]:
    """Sorted elements of the subgroup generated by ``generators``."""
    for g in generators:
        G.check_element(g)
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = G.mul(x, g)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(members)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup H ≤ G with deterministic left-coset representatives."""

    parent: Group
    members: tuple[int, ...]
    coset_reps: tuple[int, ...]

    def __post_init__(self) -> None:
        G = self.parent
        member_set = set(self.members)
        if 0 not in member_set or list(self.members) != sorted(member_set):
            raise GroupTableError("subgroup members must be sorted and contain the identity")
        for a in self.members:
            for b in self.members:
                if G.mul(a, b) not in member_set:
                    raise GroupTableError("subgroup members are not closed under multiplication")
        if G.order % len(self.members):
            raise GroupTableError("subgroup order does not divide the group order")
        if len(self.coset_reps) != G.order // len(self.members):
            raise GroupTableError("wrong number of coset representatives")
        covered: set[int] = set()
        for r in self.coset_reps:
            coset = {G.mul(r, h) for h in self.members}
            if coset & covered:
                raise GroupTableError("left cosets of the representatives overlap")
            covered |= coset
        if len(covered) != G.order:
            raise GroupTableError("left cosets do not cover the group")

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return len(self.coset_reps)

    def contains(self, g: int) -> bool:
        return g in self._positions

    @cached_property
    def _positions(self) -> dict[int, int]:
        return {g: i for i, g in enumerate(self.members)}

    def local(self, g: int) -> int:
        """Index of the parent element ``g`` inside :meth:`as_group`."""
        return self._positions[g]

    def embed(self, i: int) -> int:
        return self.members[i]

    @cached_property
    def _coset_lookup(self) -> tuple[int, ...]:
        lookup = [0] * self.parent.order
        for a, r in enumerate(self.coset_reps):
            for h in self.members:
                lookup[self.parent.mul(r, h)] = a
        return tuple(lookup)

    def coset_index(self, g: int) -> int:
        """Index ``a`` with ``g ∈ coset_reps[a]·H``."""
        return self._coset_lookup[g]

    @cached_property
    def group(self) -> Group:
        return self.as_group()

    def as_group(self) -> Group:
        """The subgroup as an abstract group, members relabelled in sorted order."""
        pos = self._positions
        table = [[pos[self.parent.mul(a, b)] for b in self.members] for a in self.members]
        name = f"{self.parent.name}<{','.join(str(g) for g in self.members)}>"
        return from_table(name, table)

    def is_normal(self) -> bool:
        G = self.parent
        for g in range(G.order):
            g_inv = G.inverse(g)
            for h in self.members:
                if not self.contains(G.mul(G.mul(g, h), g_inv)):
                    return False
        return True

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_proper(self) -> bool:
        return self.order < self.parent.order


def subgroup(G: Group, generators: list[int] | tuple[int, ...]) -> Subgroup:
    """The subgroup generated by ``generators``; representatives take the smallest unused index."""
    members = closure_of(G, list(generators))
    member_set = set(members)
    reps: list[int] = []
    covered: set[int] = set()
    for g in range(G.order):
        if g in covered:
            continue
        reps.append(g)
        covered |= {G.mul(g, h) for h in member_set}
    logger.debug("subgroup_built", group=G.name, order=len(members), index=len(reps))
    return Subgroup(G, tuple(members), tuple(reps))


@dataclass(frozen=True)
class CentralElement:
    """An element commuting with every element of its group."""

    group: Group
    index: int

    def __post_init__(self) -> None:
        self.group.check_element(self.index)
        x = self.index
        if not (self.group.table[x, :] == self.group.table[:, x]).all():
            raise GroupTableError(f"element {x} is not central in {self.group.name}")


def center(G: Group) -> list[CentralElement]:
    """All central elements, in index order."""
    return [
        CentralElement(G, x) for x in range(G.order) if (G.table[x, :] == G.table[:, x]).all()
    ]


def is_p_group(G: Group, p: int) -> bool:
    if p < 2:
        raise FieldError(f"p-group test needs p >= 2, got {p}")
    n = G.order
    while n % p == 0:
        n //= p
    return n == 1


def is_cyclic(G: Group) -> bool:
    return any(G.element_order(g) == G.order for g in range(G.order))


def cyclic_generator(G: Group) -> int:
    """Index of a generator of a cyclic group, preferring the index-1 convention."""
    if G.order == 1:
        return 0
    if G.element_order(1) == G.order:
        return 1
    for g in range(G.order):
        if G.element_order(g) == G.order:
            return g
    raise GroupTableError(f"{G.name} is not cyclic")


def exponent(G: Group) -> int:
    return math.lcm(*(G.element_order(g) for g in range(G.order)))


_CYCLIC_RE = re.compile(r"^C(\d+)$")
_RANK2_RE = re.compile(r"^CpxCp:(\d+)$", re.IGNORECASE)


def parse_group_shorthand(text: str) -> Group | None:
    """Parse ``C<n>``, ``C<a>xC<b>[x...]`` or ``CpxCp:<p>``; ``None`` if not shorthand."""
    text = text.strip()
    match = _RANK2_RE.match(text)
    if match:
        p = int(match.group(1))
        orders = [p, p]
    else:
        orders = []
        for factor in text.split("x"):
            m = _CYCLIC_RE.match(factor)
            if not m:
                return None
            orders.append(int(m.group(1)))
    order = math.prod(orders)
    if order > MAX_GROUP_ORDER:
        raise GroupTableError(f"{text}: order {order} exceeds {MAX_GROUP_ORDER}")
    group = cyclic(orders[0])
    for n in orders[1:]:
        group = direct_product(group, cyclic(n))
    return group
