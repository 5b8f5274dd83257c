"""Semi-infinite wedge / Fock space: bosonic operators, vertex operators,
energy operators and vacuum expectations."""

from fractions import Fraction
from math import factorial

import pytest

from orbitoda.algebra import SeriesRing
from orbitoda.fock import (
    Alpha,
    Context,
    ExpF2,
    ExpOp,
    F2,
    FockState,
    Gamma,
    QH,
    E_series_apply,
    F2_apply,
    alpha_apply,
    charge_shifted_expectation,
    inverse_varsigma_series,
    varsigma_series,
    vacuum_expectation,
)
from orbitoda.groups import FiniteAbelianGroup
from orbitoda.partitions import enumerate_partitions

Z2 = FiniteAbelianGroup.parse("Z2")


def _state(*pairs):
    out = FockState({}, 1)
    for parts, c in pairs:
        out = out + FockState.basis([parts], coeff=Fraction(c))
    return out


def test_alpha_on_vacuum():
    vac = FockState.vacuum()
    assert alpha_apply(0, -1, vac).terms == _state(((1,), 1)).terms
    assert alpha_apply(0, -2, vac).terms == _state(((2,), 1), ((1, 1), -1)).terms
    assert alpha_apply(0, 1, alpha_apply(0, -1, vac)).terms == vac.terms
    assert alpha_apply(0, 3, vac).is_zero()
    with pytest.raises(ValueError):
        alpha_apply(0, 0, vac)


def test_heisenberg_commutation_relations():
    # [alpha_m, alpha_{-n}] = m delta_{mn} on every state of energy <= 4
    for lam in [p for d in range(5) for p in enumerate_partitions(d)]:
        v = FockState.basis([lam])
        for m in (1, 2, 3):
            for n in (1, 2, 3):
                lhs = alpha_apply(0, m, alpha_apply(0, -n, v)) - alpha_apply(0, -n, alpha_apply(0, m, v))
                expected = v.scale(m) if m == n else FockState({}, 1)
                assert (lhs - expected).is_zero()


def test_energy_operator_eigenvalues():
    assert F2_apply("gamma", FockState.vacuum()).is_zero()
    v2 = FockState.basis([(2,)])
    assert F2_apply("gamma", v2).terms == v2.terms
    v = FockState.basis([(2, 1), (3,)])
    zero = F2_apply("zero", v, Z2)
    per_factor = F2_apply("gamma", v, Z2, 0) + F2_apply("gamma", v, Z2, 1)
    assert zero.terms == per_factor.scale(2).terms


def test_vacuum_expectations():
    assert vacuum_expectation([Alpha(1), Alpha(-1)]) == 1
    assert vacuum_expectation([Alpha(2), Alpha(-1), Alpha(-1)]) == 0
    assert vacuum_expectation([Alpha(1), Alpha(1), Alpha(-1), Alpha(-1)]) == 2


def test_energy_flow_between_two_parts():
    # <alpha_2 e^{beta F2} alpha_{-2}> = e^beta + e^{-beta}
    R = SeriesRing(["b"], caps={"b": 6})
    val = vacuum_expectation([Alpha(2), ExpF2("b", variant="gamma"), Alpha(-2)], Context(ring=R))
    expected = {(k,): Fraction(1 + (-1) ** k, factorial(k)) for k in range(7) if k % 2 == 0}
    assert val.terms == expected


def test_vertex_operator_normal_ordering():
    # <Gamma_+(t) Gamma_-(s)> = exp(sum_k t_k s_k / k)
    names = ["t1", "t2", "s1", "s2"]
    R = SeriesRing(names, weighted=[({"t1": 1, "t2": 2, "s1": 1, "s2": 2}, 6)])
    ctx = Context(ring=R)
    val = vacuum_expectation([Gamma(1, "t", 2), Gamma(-1, "s", 2)], ctx)
    expected = (R.var("t1") * R.var("s1") + R.var("t2") * R.var("s2").scale(Fraction(1, 2))).exp()
    assert val == expected
    shifted = charge_shifted_expectation(1, [Gamma(1, "t", 2), Gamma(-1, "s", 2)], ctx)
    assert shifted == expected


def test_charge_shift_preserves_normalizations():
    R = SeriesRing(["q"], caps={"q": 3})
    assert charge_shifted_expectation(3, []) == 1
    assert charge_shifted_expectation(1, [QH("q")], Context(ring=R)) == R.one()


def test_diagonal_energy_series():
    R = SeriesRing(["z"], caps={"z": 5})
    vac = FockState.vacuum()
    on_vac = E_series_apply(0, 0, vac, R, "z")
    assert on_vac.coefficient(next(iter(vac.terms))) == inverse_varsigma_series(R, "z")
    v1 = FockState.basis([(1,)])
    on_box = E_series_apply(0, 0, v1, R, "z").coefficient(next(iter(v1.terms)))
    assert on_box == varsigma_series(R, "z") + inverse_varsigma_series(R, "z")


def test_varsigma_inverse():
    R = SeriesRing(["z"], caps={"z": 6})
    prod = varsigma_series(R, "z") * inverse_varsigma_series(R, "z")
    # exact up to the truncation order of the Laurent factor
    assert prod.filter(lambda e: e[0] <= 5) == R.one()

