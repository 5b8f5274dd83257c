"""Exact scalars (rationals and cyclotomic numbers) and truncated series."""

from fractions import Fraction

import pytest

from orbitoda.algebra import (
    Cyc,
    SeriesRing,
    conj,
    cyc_normalize,
    cyclotomic_polynomial,
    euler_phi,
    root_of_unity,
    scalar_from_json,
    scalar_to_json,
    series_exp_log,
    series_fractional_power,
    solve_least_rows,
)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert [euler_phi(m) for m in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_normalization_of_roots_of_unity():
    assert cyc_normalize(2, [0, 1]) == -1
    assert root_of_unity(4, 1) * root_of_unity(4, 1) == -1
    assert cyc_normalize(3, [1, 1, 1]) == 0
    assert root_of_unity(6, 2) == root_of_unity(3, 1)


def test_cyclotomic_arithmetic():
    z3 = root_of_unity(3)
    assert isinstance(z3, Cyc)
    assert z3 ** 3 == 1
    assert z3 * conj(z3) == 1
    assert 1 + z3 + z3 * z3 == 0
    i = root_of_unity(4)
    assert (1 + i) * (1 - i) == 2
    assert (1 + i) / (1 + i) == 1
    # mixed conductors meet in the common field
    assert root_of_unity(4) * root_of_unity(3) == root_of_unity(12, 7)


def test_cyclotomic_rejects_rationals():
    with pytest.raises(ValueError):
        Cyc(3, [2, 0])


def test_scalar_json_round_trip():
    for x in (Fraction(-3, 7), root_of_unity(5, 2) + Fraction(1, 3), root_of_unity(8)):
        assert scalar_from_json(scalar_to_json(x)) == x
    assert scalar_to_json(Fraction(1, 2)) == "1/2"


def _ring(*names, order=4):
    return SeriesRing(names, weighted=[({n: 1 for n in names}, order)])


def test_log_of_one_plus_x():
    R = _ring("x", order=3)
    x = R.var("x")
    assert series_exp_log(R.one() + x, "log") == x - x * x * Fraction(1, 2) + x ** 3 * Fraction(1, 3)


def test_exp_zero_and_round_trip():
    R = _ring("x", "y", order=4)
    assert series_exp_log(R.zero(), "exp") == R.one()
    s = R.one() + R.var("x") + R.var("y")
    assert series_exp_log(series_exp_log(s, "log"), "exp") == s


def test_exp_log_preconditions():
    R = _ring("x")
    with pytest.raises(ArithmeticError, match="constant"):
        series_exp_log(R.one() + R.var("x"), "exp")
    with pytest.raises(ArithmeticError, match="constant"):
        series_exp_log(R.var("x"), "log")


def test_fractional_power():
    R = _ring("x", order=2)
    x = R.var("x")
    assert series_fractional_power(R.one() + x, Fraction(1, 2)) == R.one() + x * Fraction(1, 2) - x * x * Fraction(1, 8)
    assert series_fractional_power(R.one() + x, 0) == R.one()
    sq = series_fractional_power(R.one() + x, Fraction(1, 2))
    assert sq * sq == R.one() + x


def test_coefficient_access_and_truncation():
    R = SeriesRing(("x", "y"), caps={"x": 2})
    s = (R.one() + R.var("x")) ** 5
    assert s.coeff(x=2) == 10
    assert s.coeff(x=3) == 0
    assert (R.var("x") * R.var("y", 3)).coeff(x=1, y=3) == 1


def test_least_rows_solver_on_overdetermined_system():
    # x + y = 3, x - y = 1, 2x + y = 5  (consistent)
    sol = solve_least_rows([[1, 1, 3], [1, -1, 1], [2, 1, 5]], 2)
    assert sol == [2, 1]
