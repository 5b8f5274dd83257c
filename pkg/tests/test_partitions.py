"""Partitions, K-labeled partitions, Maya diagrams and border strips."""

from fractions import Fraction

import pytest

from oracles import sym_character_by_matrices
from orbitoda.groups import FiniteAbelianGroup
from orbitoda.partitions import (
    Partition,
    age,
    border_strip_add,
    border_strip_remove,
    centralizer_order,
    count_partitions,
    enumerate_labeled_partitions,
    enumerate_partitions,
    from_maya,
    maya_positions,
    parse_labeled_partition,
    wreath_order,
)

TRIVIAL = FiniteAbelianGroup()
Z2 = FiniteAbelianGroup.parse("Z2")


def _count_by_recursion(n, largest=None):
    """Independent partition counter p(n) by largest-part recursion."""
    largest = n if largest is None else largest
    if n == 0:
        return 1
    return sum(_count_by_recursion(n - k, k) for k in range(1, min(n, largest) + 1))


def test_enumeration_counts():
    assert enumerate_partitions(0) == [Partition(())]
    assert len(enumerate_partitions(4)) == 5
    assert len(enumerate_partitions(10)) == 42 == _count_by_recursion(10)
    for n in range(12):
        assert count_partitions(n) == _count_by_recursion(n)


def test_partition_invariants():
    lam = Partition((3, 1))
    assert lam.size == 4 and lam.length == 2
    assert lam.conjugate() == Partition((2, 1, 1))
    assert lam.content_sum() == 2


def test_labeled_partition_classes():
    assert len(enumerate_labeled_partitions(1, Z2)) == 2
    assert [p.text() for p in enumerate_labeled_partitions(2, Z2)] == ["2_0", "2_1", "1_0 1_0", "1_0 1_1", "1_1 1_1"]
    assert len(enumerate_labeled_partitions(2, TRIVIAL)) == 2


def test_class_sizes_sum_to_group_order():
    for K in (TRIVIAL, Z2, FiniteAbelianGroup.parse("Z3")):
        for d in range(1, 5):
            total = sum(Fraction(wreath_order(d, K), centralizer_order(mu, K))
                        for mu in enumerate_labeled_partitions(d, K))
            assert total == wreath_order(d, K)


def test_centralizer_orders():
    assert centralizer_order(parse_labeled_partition("2 1", TRIVIAL), TRIVIAL) == 2
    assert centralizer_order(parse_labeled_partition("1_0 1_0", Z2), Z2) == 8
    assert centralizer_order(parse_labeled_partition("2_1", Z2), Z2) == 4


def test_maya_round_trip():
    for lam in enumerate_partitions(6):
        for charge in (-2, 0, 3):
            assert from_maya(maya_positions(lam, charge), charge) == lam


def test_border_strips_on_empty_partition():
    assert border_strip_add((), 2) == [(Partition((2,)), 1), (Partition((1, 1)), -1)]
    assert border_strip_add((), 1) == [(Partition((1,)), 1)]


def test_border_strip_of_size_two_on_a_box():
    # (2,1) has no 2-ribbon over (1): its skew shape (2,1)/(1) is disconnected.
    assert border_strip_add((1,), 2) == [(Partition((3,)), 1), (Partition((1, 1, 1)), -1)]


def test_border_strip_signs_reproduce_s3_characters():
    # chi^lam_{(2,1)} is the coefficient of lam in alpha_{-2} alpha_{-1}|0>.
    coeffs = dict(border_strip_add((1,), 2))
    transposition_times_fixed = (1, 0, 2)
    for lam in enumerate_partitions(3):
        assert coeffs.get(lam, 0) == sym_character_by_matrices(lam, transposition_times_fixed)


def test_border_strip_removal_inverts_addition():
    for lam in enumerate_partitions(5):
        for m in (1, 2, 3):
            for mu, sign in border_strip_add(lam, m):
                assert (Partition(lam), sign) in border_strip_remove(mu, m)
    assert border_strip_remove((2, 1), 2) == []


def test_ages():
    assert age([0, 0, 0], 1) == 0
    assert age([1, 1], 2) == 1
    assert age([1, 2, 1], 3) == Fraction(4, 3)


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_labeled_partition("2_0.1", Z2)
