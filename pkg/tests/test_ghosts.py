"""Tests for ghost and dual-ghost detection."""

import pytest

from stmod.algebra.exactlin import PrimeField
from stmod.algebra.groups import CentralElement, cyclic, direct_product, subgroup
from stmod.algebra.reps import (
    cyclic_module,
    element_map,
    hom_space,
    identity_map,
    induce,
    regular_module,
    trivial_module,
)
from stmod.errors import StableCategoryError
from stmod.stable.ghosts import (
    Certificate,
    VerdictKind,
    degree_order,
    is_dual_ghost,
    is_ghost,
)

F2 = PrimeField(2)


def _length_two_map(n):
    return element_map(cyclic_module(cyclic(n), 2), 1)


def test_degree_order():
    """Test that degrees are visited outward from zero."""
    assert list(degree_order(2)) == [0, 1, -1, 2, -2]
    assert list(degree_order(0)) == [0]


def test_length_two_map_is_ghost_by_periodicity():
    """Test σ − 1 on L2 over C4 without hints: certified by Ω-periodicity."""
    verdict = is_ghost(_length_two_map(4))
    assert verdict.kind == VerdictKind.GHOST_CERTIFIED
    assert verdict.certificate == Certificate.PERIODICITY
    assert verdict.period == 2
    assert verdict.degrees_checked == (0, 1, -1, 2, -2, 3, -3, 4, -4)


def test_length_two_map_is_ghost_by_central_element():
    """Test that a matching central element is reported as the certificate."""
    f = _length_two_map(4)
    verdict = is_ghost(f, bound=1, certificates=[CentralElement(f.source.group, 1)])
    assert verdict.is_certified
    assert verdict.certificate == Certificate.CENTRAL_ELEMENT
    assert verdict.central_element == 1
    assert verdict.summary() == {
        "kind": "ghost_certified",
        "bound": 1,
        "certificate": "central-element",
        "central_element": 1,
    }


def test_unrelated_central_element_is_not_a_certificate():
    """Test that σ² is not accepted as a certificate for σ − 1."""
    f = _length_two_map(4)
    verdict = is_ghost(f, bound=1, certificates=[CentralElement(f.source.group, 2)])
    assert verdict.certificate == Certificate.PERIODICITY


def test_identity_is_not_a_ghost():
    """Test that id on L2 over C4 is caught in degree 0 with a witness class."""
    M = cyclic_module(cyclic(4), 2)
    verdict = is_ghost(identity_map(M))
    assert verdict.kind == VerdictKind.NON_GHOST
    assert not verdict.is_ghost
    assert verdict.degree == 0
    assert verdict.witness is not None
    assert verdict.witness.target == M


def test_negative_bound_is_rejected():
    """Test that bound < 0 raises."""
    with pytest.raises(StableCategoryError, match="non-negative"):
        is_ghost(_length_two_map(4), bound=-1)
    with pytest.raises(StableCategoryError, match="non-negative"):
        is_dual_ghost(_length_two_map(4), bound=-1)


def test_trivial_group_is_rejected():
    """Test that ghosts over the trivial group are refused."""
    k = trivial_module(cyclic(1), F2)
    with pytest.raises(StableCategoryError, match="trivial group"):
        is_ghost(identity_map(k), bound=0)


def test_rank_two_map_is_ghost_up_to_bound_without_hints():
    """Test x − 1 on k_H↑ over C2×C2 with no certificate and a small bound."""
    G = direct_product(cyclic(2), cyclic(2))
    H = subgroup(G, [2])
    M = induce(H, trivial_module(H.group, F2))
    verdict = is_ghost(element_map(M, 1), bound=1)
    assert verdict.kind == VerdictKind.GHOST_UP_TO_BOUND
    assert verdict.certificate is None
    assert verdict.degrees_checked == (0, 1, -1)


def test_length_two_map_is_dual_ghost():
    """Test that σ − 1 on L2 over C4 is also a dual ghost."""
    verdict = is_dual_ghost(_length_two_map(4), bound=2)
    assert verdict.is_ghost
    assert verdict.period == 2


def test_identity_is_not_a_dual_ghost():
    """Test that id on L2 over C8 fails the dual ghost test."""
    M = cyclic_module(cyclic(8), 2)
    verdict = is_dual_ghost(identity_map(M), bound=1)
    assert verdict.kind == VerdictKind.NON_GHOST
    assert verdict.witness is not None
    assert verdict.witness.source == M


def _composites(f, modules):
    """Every h∘f∘g with g: X → source and h: target → Y taken from Hom bases."""
    for X in modules:
        for g in hom_space(X, f.source).basis:
            for Y in modules:
                for h in hom_space(f.target, Y).basis:
                    yield h @ f @ g


def test_ghosts_form_an_ideal_over_c4():
    """Test that composing σ − 1 on L2 with maps on either side stays a ghost."""
    f = _length_two_map(4)
    G = f.source.group
    modules = [
        trivial_module(G, F2),
        cyclic_module(G, 2),
        cyclic_module(G, 3),
        regular_module(G, F2),
    ]
    composites = list(_composites(f, modules))
    assert composites
    for composite in composites:
        assert is_ghost(composite, bound=2).is_ghost


def test_ghosts_form_an_ideal_over_klein_four():
    """Test the same closure for x − 1 on k_H↑ over C2×C2."""
    G = direct_product(cyclic(2), cyclic(2))
    H = subgroup(G, [2])
    M = induce(H, trivial_module(H.group, F2))
    f = element_map(M, 1)
    modules = [trivial_module(G, F2), M]
    composites = list(_composites(f, modules))
    assert composites
    for composite in composites:
        assert is_ghost(composite, bound=1).is_ghost
