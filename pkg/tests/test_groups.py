"""Tests for Cayley-table groups."""

import pytest

from stmod.algebra.groups import (
    center,
    closure_of,
    cyclic,
    cyclic_generator,
    direct_product,
    exponent,
    from_table,
    is_cyclic,
    is_p_group,
    parse_group_shorthand,
    prime_power,
    subgroup,
)
from stmod.errors import FieldError, GroupTableError


def test_cyclic_group_conventions():
    """Test that C4 has its generator at index 1."""
    G = cyclic(4)
    assert G.order == 4
    assert G.element_order(1) == 4
    assert cyclic_generator(G) == 1


def test_trivial_cyclic_group():
    """Test cyclic(1)."""
    assert cyclic(1).order == 1


def test_cyclic_three_table_entry():
    """Test σ·σ² = e in C3."""
    assert cyclic(3).mul(1, 2) == 0


def test_direct_product_klein_four():
    """Test that C2×C2 has no element of order 4."""
    G = direct_product(cyclic(2), cyclic(2))
    assert G.order == 4
    assert max(G.element_order(g) for g in range(4)) == 2
    assert not is_cyclic(G)


def test_direct_product_with_trivial_group():
    """Test G × C1 keeps the order of G."""
    assert direct_product(cyclic(5), cyclic(1)).order == 5


def test_direct_product_exponent():
    """Test that C3×C3 has order 9 and exponent 3."""
    G = direct_product(cyclic(3), cyclic(3))
    assert G.order == 9
    assert exponent(G) == 3


def test_subgroup_of_c4():
    """Test ⟨σ²⟩ ≤ C4 and its coset representatives."""
    S = subgroup(cyclic(4), [2])
    assert S.members == (0, 2)
    assert S.coset_reps == (0, 1)
    assert S.index == 2
    assert S.is_normal()
    assert S.coset_index(3) == 1


def test_subgroup_as_group_is_cyclic():
    """Test that ⟨σ²⟩ ≤ C8 is abstractly C4."""
    S = subgroup(cyclic(8), [2])
    assert S.group == cyclic(4)
    assert S.local(6) == 3
    assert S.embed(1) == 2


def test_closure_matches_table():
    """Test the closure of a generating set."""
    G = direct_product(cyclic(2), cyclic(4))
    assert closure_of(G, [2]) == [0, 2]
    assert len(closure_of(G, [1, 4])) == 8


def test_center_of_abelian_group_is_everything():
    """Test that every element of C_n is central."""
    assert [x.index for x in center(cyclic(5))] == [0, 1, 2, 3, 4]


def test_p_group_and_cyclic_predicates():
    """Test is_p_group and is_cyclic on small groups."""
    assert is_p_group(cyclic(8), 2) and is_cyclic(cyclic(8))
    C3xC3 = direct_product(cyclic(3), cyclic(3))
    assert is_p_group(C3xC3, 3) and not is_cyclic(C3xC3)
    assert not is_p_group(cyclic(6), 2)


def test_p_group_test_needs_a_prime_at_least_two():
    """Test that p = 0 and p = 1 are refused instead of looping."""
    for p in (0, 1):
        with pytest.raises(FieldError, match="p >= 2"):
            is_p_group(cyclic(4), p)


def test_prime_power():
    """Test prime power detection."""
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_table_must_be_latin_square():
    """Test that a repeated entry in a row is rejected."""
    with pytest.raises(GroupTableError, match="Latin square"):
        from_table("bad", [[0, 1], [1, 1]])


def test_identity_must_be_element_zero():
    """Test that element 0 must be the identity."""
    with pytest.raises(GroupTableError, match="identity"):
        from_table("bad", [[1, 0], [0, 1]])


def test_associativity_is_checked():
    """Test that a non-associative Latin square with identity 0 is rejected."""
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupTableError, match="associative"):
        from_table("loop", table)


def test_element_index_out_of_range():
    """Test check_element on an invalid index."""
    with pytest.raises(GroupTableError, match="out of range"):
        cyclic(3).check_element(3)


def test_parse_group_shorthand():
    """Test the group shorthands accepted on the command line."""
    assert parse_group_shorthand("C4") == cyclic(4)
    assert parse_group_shorthand("C2xC2") == direct_product(cyclic(2), cyclic(2))
    assert parse_group_shorthand("CpxCp:3") == direct_product(cyclic(3), cyclic(3))
    assert parse_group_shorthand("groups/q8.json") is None


def test_shorthand_order_limit_is_checked_before_building():
    """Test that oversized shorthands fail fast with the order they name."""
    with pytest.raises(GroupTableError, match="order 40000 exceeds"):
        parse_group_shorthand("C40000")
    with pytest.raises(GroupTableError, match="order 40000 exceeds"):
        parse_group_shorthand("CpxCp:200")
    with pytest.raises(GroupTableError, match="exceeds"):
        parse_group_shorthand("C8xC16")


def test_ragged_table_is_a_group_error():
    """Test that from_table refuses rows of different lengths."""
    with pytest.raises(GroupTableError, match="ragged"):
        from_table("X", [[0, 1], [1]])
