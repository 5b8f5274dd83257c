"""Double wreath Hurwitz numbers: character formula, Fock-space formula and
brute-force enumeration in the wreath product."""

from fractions import Fraction
from math import factorial

import pytest

from orbitoda.groups import FiniteAbelianGroup
from orbitoda.hurwitz import (
    BudgetExceeded,
    HurwitzQuery,
    WreathGroup,
    hurwitz,
    hurwitz_bruteforce,
    hurwitz_disconnected_b,
    make_query,
)
from orbitoda.partitions import enumerate_labeled_partitions, parse_labeled_partition

TRIVIAL = FiniteAbelianGroup()
Z2 = FiniteAbelianGroup.parse("Z2")
Z3 = FiniteAbelianGroup.parse("Z3")
METHODS = ("char", "fock", "brute")


def _q(g, mu, nu, K=TRIVIAL):
    return make_query(g, parse_labeled_partition(mu, K), parse_labeled_partition(nu, K), K)


@pytest.mark.parametrize("g,mu,nu,K,value", [
    (0, "2", "2", TRIVIAL, Fraction(1, 2)),
    (0, "1 1", "1 1", TRIVIAL, Fraction(1, 2)),
    (0, "1_0", "1_0", Z2, Fraction(1, 2)),
    (0, "2", "1 1", TRIVIAL, Fraction(1, 2)),
    (0, "1", "1", TRIVIAL, Fraction(1)),
    (1, "", "", TRIVIAL, Fraction(1)),
])
def test_disconnected_values(g, mu, nu, K, value):
    q = _q(g, mu, nu, K)
    for m in METHODS:
        assert hurwitz(q, m) == value, m


@pytest.mark.parametrize("g,mu,nu,value", [
    (0, "2", "2", Fraction(1, 2)),
    (0, "1 1", "1 1", Fraction(1, 2)),
    (-1, "1 1", "1 1", Fraction(0)),
])
def test_connected_values(g, mu, nu, value):
    q = _q(g, mu, nu)
    assert hurwitz(q, "char", connected=True) == value
    assert hurwitz(q, "brute", connected=True) == value


def test_two_component_cover_is_disconnected():
    q = _q(-1, "1 1", "1 1")
    assert q.b == 0
    assert hurwitz(q, "char") == Fraction(1, 2)
    assert hurwitz(q, "char", connected=True) == 0


def test_degree_one_over_a_group():
    for K in (TRIVIAL, Z2, Z3):
        for k in K.elements():
            # the monodromies over 0 and infinity multiply to the identity
            q = make_query(0, [(1, k)], [(1, K.neg(k))], K)
            assert hurwitz(q, "brute") == hurwitz(q, "char") == Fraction(1, K.order)
            if K.order > 2 and k != K.zero:
                assert hurwitz(make_query(0, [(1, k)], [(1, k)], K), "brute") == 0


def test_mismatched_monodromy_over_z2_vanishes_by_enumeration():
    q = _q(0, "2_0", "2_1", Z2)
    assert hurwitz(q, "brute") == hurwitz(q, "char") == hurwitz(q, "fock") == 0


def test_energy_flow_generating_function():
    # H_b((2),(2)) = b! [beta^b] (e^beta + e^-beta)/4
    mu = parse_labeled_partition("2", TRIVIAL)
    for b in range(7):
        expected = Fraction(factorial(b) * (2 if b % 2 == 0 else 0), factorial(b) * 4)
        assert hurwitz_disconnected_b(mu, mu, b, TRIVIAL) == expected


@pytest.mark.parametrize("K,dmax", [(TRIVIAL, 4), (Z2, 3), (Z3, 2)])
def test_three_routes_agree(K, dmax):
    for d in range(1, dmax + 1):
        classes = enumerate_labeled_partitions(d, K)
        for mu in classes:
            for nu in classes:
                for g in (0, 1):
                    q = make_query(g, mu, nu, K)
                    if q.b > 3:
                        continue
                    vals = {m: hurwitz(q, m) for m in METHODS}
                    assert len(set(vals.values())) == 1, (q, vals)
                    assert hurwitz(q, "char", True) == hurwitz(q, "brute", True)


def test_unbalanced_or_negative_queries():
    q = _q(0, "", "")
    assert q.empty and all(hurwitz(q, m) == 0 for m in METHODS)
    with pytest.raises(ValueError):
        _q(0, "2", "1")
    with pytest.raises(ValueError):
        HurwitzQuery(0, parse_labeled_partition("1_1", Z2), parse_labeled_partition("1", TRIVIAL), TRIVIAL)
    with pytest.raises(ValueError):
        hurwitz(_q(0, "2", "2"), "guess")


def test_brute_force_budget():
    with pytest.raises(BudgetExceeded):
        hurwitz_bruteforce(_q(0, "9", "9"))


def test_wreath_group_structure():
    G = WreathGroup(2, Z2)
    els = list(G.elements())
    assert len(els) == 8
    for x in els:
        assert G.mul(x, G.inverse(x)) == G.identity()
    assert len({G.class_of(x) for x in els}) == 5
