"""Characters of symmetric and wreath product groups."""

from fractions import Fraction
from itertools import permutations

import pytest

from oracles import induced_wreath_character, sym_character_by_matrices
from orbitoda.algebra import conj
from orbitoda.characters import (
    central_character_fT,
    central_character_from_table,
    character_table,
    enumerate_multipartitions,
    sym_character,
    sym_dimension,
    wreath_character,
    wreath_dimension,
)
from orbitoda.groups import FiniteAbelianGroup, character_value
from orbitoda.hurwitz import WreathGroup
from orbitoda.partitions import centralizer_order, enumerate_partitions, parse_labeled_partition

TRIVIAL = FiniteAbelianGroup()
Z2 = FiniteAbelianGroup.parse("Z2")
Z3 = FiniteAbelianGroup.parse("Z3")


def _cycle_type(perm):
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        j, n = i, 0
        while j not in seen:
            seen.add(j)
            j, n = perm[j], n + 1
        out.append(n)
    return tuple(sorted(out, reverse=True))


def test_symmetric_characters_against_matrix_representations():
    for n in (1, 2, 3):
        for perm in permutations(range(n)):
            for lam in enumerate_partitions(n):
                assert sym_character(lam, _cycle_type(perm)) == sym_character_by_matrices(lam, perm)


def test_symmetric_character_examples():
    for mu in enumerate_partitions(5):
        assert sym_character((5,), mu) == 1
    assert sym_character((1, 1), (2,)) == -1
    assert sym_character((2, 1), (3,)) == -1
    assert sym_dimension((3, 2)) == 5 == sym_character((3, 2), (1,) * 5)
    with pytest.raises(ValueError):
        sym_character((2,), (1,))


def test_symmetric_column_orthogonality():
    for n in range(1, 7):
        for mu in enumerate_partitions(n):
            z = centralizer_order(parse_labeled_partition(" ".join(map(str, mu)), TRIVIAL), TRIVIAL)
            assert sum(sym_character(lam, mu) ** 2 for lam in enumerate_partitions(n)) == z


def test_wreath_characters_degenerate_to_symmetric_ones():
    for d in range(1, 6):
        for lam in enumerate_multipartitions(d, TRIVIAL):
            for mu in enumerate_partitions(d):
                label = parse_labeled_partition(" ".join(map(str, mu)), TRIVIAL)
                assert wreath_character(lam, label, TRIVIAL) == sym_character(lam[0], mu)


def test_degree_one_wreath_characters_are_characters_of_K():
    for gi, lam in enumerate(enumerate_multipartitions(1, Z2)):
        gamma = Z2.characters()[[len(p) for p in lam].index(1)]
        for k in Z2.elements():
            mu = parse_labeled_partition(f"1_{k[0]}", Z2)
            assert wreath_character(lam, mu, Z2) == character_value(gamma, Z2.neg(k), Z2)
            assert wreath_character(lam, mu, Z2) in (1, -1)


@pytest.mark.parametrize("K,d", [(Z2, 1), (Z2, 2), (Z3, 1), (Z3, 2)])
def test_wreath_characters_match_induced_representations(K, d):
    G = WreathGroup(d, K)
    for lam in enumerate_multipartitions(d, K):
        true_char = induced_wreath_character(lam, K, d)
        for x, value in true_char.items():
            assert wreath_character(lam, G.class_of(x), K) == conj(value)


@pytest.mark.parametrize("K,d", [(TRIVIAL, 4), (Z2, 2), (Z2, 3), (Z3, 2)])
def test_character_tables_are_unitary(K, d):
    rows, cols, table = character_table(d, K)
    assert len(rows) == len(cols)
    weights = [Fraction(1, centralizer_order(mu, K)) for mu in cols]
    for i, ri in enumerate(table):
        for j, rj in enumerate(table):
            total = sum(w * a * conj(b) for w, a, b in zip(weights, ri, rj))
            assert total == (1 if i == j else 0)


def test_dimensions():
    rows, cols, table = character_table(3, Z2)
    identity = cols.index(parse_labeled_partition("1_0 1_0 1_0", Z2))
    for lam, row in zip(rows, table):
        assert row[identity] == wreath_dimension(lam, Z2)
    assert sum(wreath_dimension(lam, Z2) ** 2 for lam in rows) == 2 ** 3 * 6


def test_central_characters():
    assert central_character_fT(((2,),), (), TRIVIAL) == 1
    assert central_character_fT(((1, 1),), (), TRIVIAL) == -1
    assert central_character_fT(((1,), (1,)), (0,), Z2) == 0


@pytest.mark.parametrize("K", [TRIVIAL, Z2, Z3])
def test_central_characters_agree_with_the_character_table(K):
    for d in range(2, 5 if K.order < 3 else 4):
        for lam in enumerate_multipartitions(d, K):
            for c in K.elements():
                assert central_character_fT(lam, c, K) == central_character_from_table(lam, c, K)
