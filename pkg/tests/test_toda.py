"""Hurwitz tau functions: Fock and character routes, the change to character
times, factorization over the characters of K and the lowest 2-Toda equation."""

from fractions import Fraction

import pytest

from orbitoda.groups import FiniteAbelianGroup
from orbitoda.toda import (
    TodaCaps,
    change_vars_class,
    change_vars_gamma,
    compare_series,
    factorization_check,
    hurwitz_toda_check,
    hurwitz_toda_residual,
    tau_hurwitz,
    tau_ring,
    toda_lowest_residual,
)

TRIVIAL = FiniteAbelianGroup()
Z2 = FiniteAbelianGroup.parse("Z2")
Z3 = FiniteAbelianGroup.parse("Z3")
CAPS = TodaCaps(qmax=2, degmax=4, betamax=3)


def test_hurwitz_tau_coefficients():
    tau = tau_hurwitz(TRIVIAL, CAPS)
    assert tau.coeff(q=1, s1_0=1, t1_0=1) == 1
    assert tau.coeff(q=2, s2_0=1, t2_0=1) == Fraction(1, 2)
    assert tau.coeff(q=2, s2_0=1, t1_0=2, beta=1) == Fraction(1, 2)


@pytest.mark.parametrize("K", [TRIVIAL, Z2])
def test_empty_cover_normalization(K):
    tau = tau_hurwitz(K, CAPS)
    zero_times = tau.filter(lambda e: all(p == 0 for n, p in zip(tau.ring.names, e) if n[0] in "st"))
    assert zero_times == tau.ring.one()


@pytest.mark.parametrize("K", [TRIVIAL, Z2, Z3])
def test_fock_and_character_routes_agree(K):
    caps = TodaCaps(2, 3, 2)
    assert tau_hurwitz(K, caps, "fock") == tau_hurwitz(K, caps, "char")


@pytest.mark.parametrize("K", [Z2, Z3])
def test_character_times_round_trip(K):
    tau = tau_hurwitz(K, TodaCaps(2, 3, 1), "char")
    caps = TodaCaps(2, 3, 1)
    assert change_vars_class(change_vars_gamma(tau, K, caps), K, caps) == tau


def test_factorization_over_characters():
    assert factorization_check(TRIVIAL, CAPS).passed
    rep = factorization_check(Z2, CAPS)
    assert rep.passed and rep.compared > 0


def test_factorization_detects_a_corrupted_coefficient():
    tau = tau_hurwitz(Z2, CAPS, "char")
    ring = tau.ring
    bad = tau + ring.monomial(ring.exps_of({"q": 2, "s2_1": 1, "t2_1": 1}), Fraction(1, 7))
    rep = factorization_check(Z2, CAPS, tau_G=bad)
    assert not rep.passed
    assert rep.first_failure["monomial"]["q"] == "2"


def test_toda_for_the_identity_operator():
    # log tau = sum t_k s_k / k in every charge sector
    ring = tau_ring(TRIVIAL, CAPS)
    log_tau = ring.zero()
    for k in range(1, CAPS.qmax + 1):
        log_tau = log_tau + (ring.var(f"s{k}_0") * ring.var(f"t{k}_0")).scale(Fraction(1, k))
    tau = log_tau.exp()
    res = toda_lowest_residual({-1: tau, 0: tau, 1: tau}, CAPS)
    assert res.is_zero()


def test_toda_rejects_a_non_tau_function():
    ring = tau_ring(TRIVIAL, CAPS)
    x = ring.var("t1_0") * ring.var("s1_0")
    tau = ring.one() + x + x * x
    assert not toda_lowest_residual({-1: tau, 0: tau, 1: tau}, CAPS).is_zero()


def test_toda_for_double_hurwitz_numbers():
    assert hurwitz_toda_residual(CAPS).is_zero()
    for scale in (1, 2):
        assert hurwitz_toda_check(CAPS, beta_scale=scale).passed
    assert not hurwitz_toda_check(CAPS, prefactor_scale=2).passed


def test_compare_series_locates_difference():
    ring = tau_ring(TRIVIAL, CAPS)
    rep = compare_series("x", ring.one(), ring.one() + ring.var("q"))
    assert not rep.passed and rep.first_failure["monomial"] == {"q": "1"}
    assert rep.to_json()["pass"] is False
