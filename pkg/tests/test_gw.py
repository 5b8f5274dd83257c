"""Localization assembly of GW n-point functions of gerby orbifold lines and
the divisor, string, decomposition, 2-Toda and vertex checks."""

from fractions import Fraction

import pytest

from orbitoda.groups import FiniteAbelianGroup, GerbeTarget
from orbitoda.gw import (
    G_connected,
    G_disconnected,
    GWCaps,
    GWQuery,
    PotentialCaps,
    decomposition_check,
    divisor_check,
    gw_invariant,
    gw_toda_check,
    string_check,
    vertex_check,
)

P1 = GerbeTarget(1, 1)
C21 = GerbeTarget(2, 1)
C22 = GerbeTarget(2, 2)
Z2 = FiniteAbelianGroup.parse("Z2")
ZERO = (0, ())
HALF = (1, ())


def _single_edge_oracle(ring, zcap):
    """u^-2 z w / ((1 + t z)(1 - t w)) expanded: the one-edge localization graph
    of a degree-one map P^1 -> P^1 with one mark over each fixed point."""
    terms = {}
    for i in range(zcap):
        for j in range(zcap):
            exps = ring.exps_of({"z1": i + 1, "w1": j + 1, "t": i + j, "u": -2})
            terms[exps] = Fraction((-1) ** i)
    return ring.from_terms(terms)


def test_degree_one_two_point_function_of_p1():
    q = GWQuery(P1, 1, (ZERO,), (ZERO,), GWCaps(ucap=-2, zcap=3))
    f = G_connected(q)
    assert list(f.parts) == [()]
    assert f.parts[()] == _single_edge_oracle(f.ring, 3)


def test_degree_zero_unstable_pieces():
    f = G_disconnected(GWQuery(P1, 0, (ZERO,), (), GWCaps(ucap=-2, zcap=3)))
    assert f.parts == {(("single", "z1"),): f.ring.var("u", -2)}
    # two 1/2-twisted marks over 0: z1 z2 / (|R| (z1 + z2))
    f = G_disconnected(GWQuery(C21, 0, (HALF, HALF), (), GWCaps(ucap=-2, zcap=3)))
    assert f.parts == {(("pair", "z1", "z2"),): f.ring.var("u", -2).scale(Fraction(1, 2))}
    assert G_connected(GWQuery(P1, 0, (ZERO,), (ZERO,), GWCaps(ucap=-2, zcap=3))).is_zero()


def test_invariants_of_p1():
    one = {0: Fraction(1)}
    assert gw_invariant(0, 1, [("0", 0, ZERO), ("inf", 0, ZERO)], P1, connected=True) == one
    assert gw_invariant(0, 1, [("0", 0, ZERO)], P1, connected=True) == one
    # unstable requests are excluded by positivity
    assert gw_invariant(0, 0, [("0", 0, ZERO), ("inf", 0, ZERO)], P1, connected=True) == {}


def test_unbalanced_monodromy_gives_zero():
    # the degree-one edge contributes monodromy 1/2 at 0, so two further
    # 1/2-twisted marks cannot balance
    assert gw_invariant(0, 1, [("0", 0, HALF), ("0", 0, HALF)], C21, connected=True) == {}


def test_divisor_identity_on_p1():
    rep = divisor_check(P1, 1)
    assert rep.passed and rep.compared > 0
    bad = divisor_check(P1, 1, constant=Fraction(1, 24))
    assert not bad.passed and bad.first_failure is not None


def test_string_identity():
    for X in (P1, C21):
        assert string_check(X).passed


@pytest.mark.parametrize("X", [P1, C21, GerbeTarget(2, 1, Z2, k0=(1,))])
def test_vertex_schemes(X):
    assert vertex_check(X).passed


def test_gw_toda_normalizations():
    pc = PotentialCaps(1, 1, 1, 0)
    assert gw_toda_check(C22, pc, "geometric").passed
    assert gw_toda_check(C22, pc, "operator").passed
    assert not gw_toda_check(C22, pc, "geometric", prefactor_t=Fraction(1)).passed
    with pytest.raises(ValueError):
        gw_toda_check(C21, pc)


def test_decomposition_and_its_negative_control():
    X = GerbeTarget(1, 1, Z2, L=(1,))
    pc = PotentialCaps(1, 1, 1, 0)
    assert decomposition_check(X, pc).passed
    twisted = decomposition_check(X, pc, phase_twist={(1,): -1})
    assert not twisted.passed
    assert twisted.first_failure["monomial"]["q"] == "1"
