"""Finite abelian groups, cocycle extensions and gerbe targets."""

from fractions import Fraction

import pytest

from orbitoda.algebra import root_of_unity
from orbitoda.groups import (
    CocycleExtension,
    FiniteAbelianGroup,
    GerbeTarget,
    banded_gerbe_group,
    character_value,
    edge_monodromies,
    gerbe_constraint,
    hodge_dimension,
)

Z2 = FiniteAbelianGroup.parse("Z2")
Z3 = FiniteAbelianGroup.parse("Z3")


def test_parsing_groups():
    assert FiniteAbelianGroup.parse("Z2xZ3").order == 6
    assert FiniteAbelianGroup.parse("2,3").moduli == (2, 3)
    assert FiniteAbelianGroup.parse("trivial").order == 1
    assert FiniteAbelianGroup.parse("1").order == 1
    with pytest.raises(ValueError):
        FiniteAbelianGroup.parse("Q8")


def test_character_values():
    for k in Z3.elements():
        assert character_value((0,), k, Z3) == 1
    assert character_value((1,), (1,), Z2) == -1
    assert character_value((1,), (2,), Z3) == root_of_unity(3, 2)


def test_character_orthogonality():
    K = FiniteAbelianGroup.parse("Z2xZ2")
    for a in K.characters():
        for b in K.characters():
            total = sum(character_value(a, k, K) * character_value(b, K.neg(k), K) for k in K.elements())
            assert total == (K.order if a == b else 0)


def test_twisted_extension_is_cyclic_of_order_four():
    R = CocycleExtension(2, Z2, (1,))
    assert R.add((1, (0,)), (1, (0,))) == (0, (1,))
    assert R.neg((1, (0,))) == (1, (1,))
    assert R.add((1, (0,)), (1, (1,))) == R.zero
    x, powers = (1, (0,)), []
    y = R.zero
    for _ in range(4):
        y = R.add(y, x)
        powers.append(y)
    assert powers[-1] == R.zero and len(set(powers)) == 4


def test_split_extension_adds_componentwise():
    R = CocycleExtension(3, Z2, (0,))
    for a in R.elements():
        for b in R.elements():
            assert R.add(a, b) == ((a[0] + b[0]) % 3, Z2.add(a[1], b[1]))


def test_extension_group_axioms():
    for r, K, k0 in [(2, Z2, (1,)), (3, Z3, (2,)), (4, Z2, (1,))]:
        R = CocycleExtension(r, K, k0)
        els = R.elements()
        assert len(els) == R.order == r * K.order
        for a in els:
            assert R.add(a, R.neg(a)) == R.zero
            for b in els:
                for c in els:
                    assert R.add(R.add(a, b), c) == R.add(a, R.add(b, c))


def test_ages_and_parsing_of_extension_elements():
    R = CocycleExtension(2, FiniteAbelianGroup(), ())
    assert R.parse_element("1/2") == (1, ())
    assert R.age([(1, ()), (1, ())]) == 1
    R3 = CocycleExtension(3, FiniteAbelianGroup(), ())
    assert R3.age([(1, ()), (2, ()), (1, ())]) == Fraction(4, 3)
    with pytest.raises(ValueError):
        R.parse_element("1/3")


def test_edge_monodromies():
    rho, _ = edge_monodromies(3, (), GerbeTarget(2, 1))
    assert rho[0] == 1
    X = GerbeTarget(1, 1, Z2, L=(1,))
    rho, _ = edge_monodromies(1, (0,), X)
    assert rho == (0, (1,))
    X = GerbeTarget(2, 3, Z2)
    assert edge_monodromies(6, (0,), X) == (X.R.zero, X.S.zero)


def test_gerbe_constraint():
    X = GerbeTarget(1, 1, Z3)
    for u in Z3.elements():
        for v in Z3.elements():
            assert gerbe_constraint(1, u, v, X) == (Z3.add(u, v) == Z3.zero)
            assert gerbe_constraint(0, u, v, X) == (Z3.add(u, v) == Z3.zero)


def test_banded_gerbe_groups():
    assert banded_gerbe_group(2, 3, 3) == (3, 1)
    assert banded_gerbe_group(2, 2, 2) == (2, 2)
    assert banded_gerbe_group(1, 1, 7) == (7, 1)


def test_hodge_bundle_ranks():
    assert hodge_dimension(1, (), GerbeTarget(1, 1))["generic"] == 1
    assert hodge_dimension(0, ((1, ()), (1, ())), GerbeTarget(2, 1))["generic"] == 0
    assert hodge_dimension(0, ((0, ()),) * 3, GerbeTarget(1, 1))["generic"] == 0
    with pytest.raises(ValueError):
        hodge_dimension(0, ((1, ()),), GerbeTarget(2, 1))


def test_invalid_targets():
    with pytest.raises(ValueError):
        GerbeTarget(0, 1)
