"""Hurwitz-Hodge generating polynomials: orbifold ELSV evaluation,
interpolation by two routes, unstable closed forms, disconnected assembly and
the integer-point A-operator identity."""

from fractions import Fraction

import pytest

from orbitoda.acceptance import elsv_bruteforce
from orbitoda.groups import FiniteAbelianGroup, GerbeTarget
from orbitoda.hodge import (
    UnstableError,
    a_operator_expectation_integer,
    admissible_points,
    assemble_H_disconnected,
    elsv_evaluate,
    interpolate_H,
    unstable_H,
)

P1 = GerbeTarget(1, 1)
C21 = GerbeTarget(2, 1)
Z2 = FiniteAbelianGroup.parse("Z2")
ZERO = (0, ())
HALF = (1, ())


def test_genus_zero_three_points():
    tup = (ZERO,) * 3
    for method in ("char", "operator"):
        assert interpolate_H(0, tup, P1, "0", method).coeffs == {(1, 1, 1): 1}
    for mu in [(1, 1, 1), (1, 2, 2), (3, 1, 1)]:
        assert elsv_evaluate(0, tup, mu, P1) == mu[0] * mu[1] * mu[2] == elsv_bruteforce(0, mu)


def test_genus_one_one_point():
    for method in ("char", "operator"):
        assert interpolate_H(1, (ZERO,), P1, "0", method).coeffs == {(2,): Fraction(1, 24), (1,): Fraction(-1, 24)}
    for m in range(1, 6):
        assert elsv_evaluate(1, (ZERO,), (m,), P1) == Fraction(m * (m - 1), 24) == elsv_bruteforce(1, (m,))


def test_twisted_four_point_polynomial():
    tup = (HALF, HALF, ZERO, ZERO)
    poly = interpolate_H(0, tup, C21, "0", "char")
    assert poly.coeffs == interpolate_H(0, tup, C21, "0", "operator").coeffs
    # symmetric under z1 <-> z2 and z3 <-> z4
    swapped = {(e[1], e[0], e[3], e[2]): c for e, c in poly.coeffs.items()}
    assert swapped == poly.coeffs
    assert poly.coeffs == {(2, 1, 1, 1): Fraction(1, 2), (1, 2, 1, 1): Fraction(1, 2),
                           (1, 1, 2, 1): Fraction(1, 2), (1, 1, 1, 2): Fraction(1, 2)}
    # points far outside the interpolation grid
    for pt in admissible_points(tup, C21.R, 5, start=40):
        assert poly.evaluate(pt) == elsv_evaluate(0, tup, pt, C21)


def test_unbalanced_tuples_vanish():
    assert elsv_evaluate(0, (HALF, ZERO, ZERO), (1, 2, 2), C21) == 0
    assert assemble_H_disconnected((HALF,), (1,), C21, ucap=2) == {}


def test_congruence_violation():
    with pytest.raises(ValueError):
        elsv_evaluate(0, (HALF, HALF, ZERO), (2, 1, 2), C21)


def test_unstable_inputs_point_to_closed_forms():
    with pytest.raises(UnstableError, match="closed forms"):
        interpolate_H(0, (ZERO,), P1)
    assert unstable_H((ZERO,), (3,), C21.R) == Fraction(1, 6)
    assert unstable_H((HALF, HALF), (1, 3), C21.R) == Fraction(3, 8)


def test_unstable_pieces_of_the_assembly():
    # H(z, u/sqrt r): the u^-2 pieces are r/(|R| z) and r z1 z2/(|R|(z1+z2))
    assert assemble_H_disconnected((ZERO,), (2,), C21, ucap=-2) == {-2: Fraction(1, 2)}
    assert assemble_H_disconnected((HALF, HALF), (1, 1), C21, ucap=-2) == {-2: Fraction(1, 2)}
    X = GerbeTarget(2, 1, Z2, k0=(1,))
    one_point = assemble_H_disconnected(((0, (0,)),), (2,), X, ucap=-2)
    assert one_point == {-2: Fraction(2, X.R.order * 2)}


@pytest.mark.parametrize("X,tup,z", [
    (P1, (ZERO,), (1,)),
    (P1, (ZERO, ZERO), (1, 2)),
    (C21, (ZERO,), (2,)),
    (C21, (HALF, HALF), (1, 3)),
])
def test_a_operators_reproduce_the_assembly(X, tup, z):
    assert a_operator_expectation_integer(tup, z, X, ucap=4) == assemble_H_disconnected(tup, z, X, ucap=4)


def test_wrong_a_operator_prefactor_is_detected():
    tup, z = (ZERO, ZERO), (1, 2)
    assert (a_operator_expectation_integer(tup, z, P1, ucap=4, prefactor_twist=2)
            != assemble_H_disconnected(tup, z, P1, ucap=4))
