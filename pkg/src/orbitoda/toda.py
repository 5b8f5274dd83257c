"""Tau functions of (wreath) double Hurwitz numbers and the lowest 2-Toda equation.

Variables: ``s{m}_{c}`` and ``t{m}_{c}`` (power-sum times labeled by a class
c of K; for trivial K the label is ``0``), ``q`` (degree) and ``beta``
(branch points, entering as beta^b/b!).  After the change of variables to
characters the times are ``S{m}_{gamma}`` / ``T{m}_{gamma}``.

The wreath tau function is

    tau_G = < Gamma_+(s/|K|) q^H e^{beta F2^0} Gamma_-(t/|K|) >,
    Gamma_+(s) = exp(sum_{k,c} s^c_k alpha^c_k / k),

whose coefficient of q^d s_mu t_nu beta^b/b! is the disconnected wreath
Hurwitz number; the 1/|K| rescaling of the times is what makes the
coefficients match the count with centralizer weights 1/z(mu).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .algebra import Series, SeriesRing, as_fraction, is_rational
from .fock import (
    Context,
    ExpF2,
    ExpOp,
    QH,
    charge_shifted_expectation,
    vacuum_expectation,
)
from .groups import FiniteAbelianGroup
from .hurwitz import hurwitz_disconnected_b
from .partitions import KLabeledPartition, enumerate_labeled_partitions, format_label


@dataclass(frozen=True)
class TodaCaps:
    """Truncation: q-degree <= qmax, at most ``degmax`` parts on each side,
    beta-degree <= betamax."""

    qmax: int = 2
    degmax: int = 4
    betamax: int = 3


def time_name(side: str, m: int, label) -> str:
    return f"{side}{m}_{format_label(label) if isinstance(label, tuple) else label}"


def _labels(K: FiniteAbelianGroup, gamma: bool) -> list:
    return K.characters() if gamma else K.elements()


def tau_ring(K: FiniteAbelianGroup, caps: TodaCaps, gamma: bool = False) -> SeriesRing:
    """Ring for tau functions of K; ``gamma=True`` uses character-labeled times."""
    sides = ("S", "T") if gamma else ("s", "t")
    names, count = [], {}
    weight = {}
    for side in sides:
        count[side] = {}
        weight[side] = {}
        for m in range(1, caps.qmax + 1):
            for lab in _labels(K, gamma):
                n = time_name(side, m, lab)
                names.append(n)
                count[side][n] = 1
                weight[side][n] = m
    names += ["q", "beta"]
    weighted = []
    for side in sides:
        weighted.append((count[side], caps.degmax))
        weighted.append((weight[side], caps.qmax))
    return SeriesRing(names, {"q": caps.qmax, "beta": caps.betamax}, weighted)


def _gamma_terms(ring: SeriesRing, side: str, sign: int, K: FiniteAbelianGroup, qmax: int,
                 label, scale) -> list:
    """[(n, coefficient)] for sum_k x_k alpha_{sign k}/k on one factor."""
    return [(sign * k, ring.var(time_name(side, k, label)).scale(Fraction(scale) / k))
            for k in range(1, qmax + 1)]


def tau_hurwitz(K: FiniteAbelianGroup | None = None, caps: TodaCaps = TodaCaps(), method: str = "fock",
                charge: int = 0, beta_scale=1) -> Series:
    """Disconnected wreath Hurwitz tau function.

    ``method="fock"`` evaluates the vacuum expectation; ``method="char"`` sums
    character-formula Hurwitz numbers.  ``charge`` selects the sector
    <n| ... |n> (energies relative to the shifted vacuum; Fock method only).
    ``beta_scale`` multiplies beta (used for the factors of the wreath tau).
    """
    K = K or FiniteAbelianGroup()
    ring = tau_ring(K, caps)
    if method == "char":
        if charge:
            raise ValueError("charge sectors are only available through the Fock method")
        return _tau_from_characters(K, caps, ring, beta_scale)
    if method != "fock":
        raise ValueError(f"unknown method {method!r}")
    ctx = Context(K, ring)
    inv = Fraction(1, K.order)
    plus, minus = [], []
    for c in K.elements():
        plus.append(ExpOp(_gamma_terms(ring, "s", 1, K, caps.qmax, c, inv), classes=c))
        minus.append(ExpOp(_gamma_terms(ring, "t", -1, K, caps.qmax, c, inv), classes=c))
    variant = "zero" if K.order > 1 else "gamma"
    ops = plus + [QH("q"), ExpF2("beta", variant, scale=beta_scale)] + minus
    if charge:
        return charge_shifted_expectation(charge, ops, ctx)
    return vacuum_expectation(ops, ctx)


def _tau_from_characters(K, caps: TodaCaps, ring: SeriesRing, beta_scale) -> Series:
    terms = {ring.exps_of({}): Fraction(1)}
    for d in range(1, caps.qmax + 1):
        classes = [m for m in enumerate_labeled_partitions(d, K) if m.length <= caps.degmax]
        for mu in classes:
            for nu in classes:
                for b in range(caps.betamax + 1):
                    val = hurwitz_disconnected_b(mu, nu, b, K)
                    if not val:
                        continue
                    exps = {"q": d, "beta": b}
                    for side, prof in (("s", mu), ("t", nu)):
                        for m, c in prof:
                            n = time_name(side, m, c)
                            exps[n] = exps.get(n, 0) + 1
                    terms[ring.exps_of(exps)] = val * Fraction(beta_scale) ** b / factorial(b)
    return ring.from_terms(terms)


def change_vars_gamma(tau: Series, K: FiniteAbelianGroup, caps: TodaCaps) -> Series:
    """Rewrite a tau function in the times S^gamma_m = sum_c gamma(-c) s^c_m.

    Inverting, s^c_m = (1/|K|) sum_gamma gamma(c) S^gamma_m."""
    target = tau_ring(K, caps, gamma=True)
    mapping = {}
    for side, new in (("s", "S"), ("t", "T")):
        for m in range(1, caps.qmax + 1):
            for c in K.elements():
                mapping[time_name(side, m, c)] = {
                    time_name(new, m, gamma): K.character_value(gamma, c) * Fraction(1, K.order)
                    for gamma in K.characters()
                }
    return tau.linear_substitute(target, mapping)


def change_vars_class(tau: Series, K: FiniteAbelianGroup, caps: TodaCaps) -> Series:
    """Inverse of :func:`change_vars_gamma`."""
    target = tau_ring(K, caps, gamma=False)
    mapping = {}
    for side, new in (("S", "s"), ("T", "t")):
        for m in range(1, caps.qmax + 1):
            for gamma in K.characters():
                mapping[time_name(side, m, gamma)] = {
                    time_name(new, m, c): K.character_value(gamma, K.neg(c)) for c in K.elements()
                }
    return tau.linear_substitute(target, mapping)


@dataclass
class CheckReport:
    name: str
    passed: bool
    compared: int = 0
    first_failure: dict | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"suite": self.name, "pass": self.passed, "compared": self.compared}
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure
        out.update(self.details)
        return out


def compare_series(name: str, lhs: Series, rhs: Series) -> CheckReport:
    """Coefficientwise equality; the report locates the first differing monomial."""
    diff = lhs - rhs
    keys = set(lhs.terms) | set(rhs.terms)
    if diff.is_zero():
        return CheckReport(name, True, len(keys))
    e, c = diff.sorted_items()[0]
    fail = {"monomial": {n: str(p) for n, p in zip(lhs.ring.names, e) if p},
            "lhs": str(lhs.terms.get(e, 0)), "rhs": str(rhs.terms.get(e, 0))}
    return CheckReport(name, False, len(keys), fail)


def factor_product(K: FiniteAbelianGroup, caps: TodaCaps, factor: Series | None = None) -> Series:
    """prod_gamma tau(S^gamma/|K|, T^gamma/|K|, q, |K| beta) in the gamma times."""
    triv = FiniteAbelianGroup()
    factor = factor if factor is not None else tau_hurwitz(triv, caps, beta_scale=K.order)
    target = tau_ring(K, caps, gamma=True)
    out = target.one()
    for gamma in K.characters():
        mapping = {}
        for side, new in (("s", "S"), ("t", "T")):
            for m in range(1, caps.qmax + 1):
                mapping[time_name(side, m, triv.zero)] = {time_name(new, m, gamma): Fraction(1, K.order)}
        out = out * factor.linear_substitute(target, mapping)
    return out


def factorization_check(K: FiniteAbelianGroup, caps: TodaCaps = TodaCaps(), tau_G: Series | None = None) -> CheckReport:
    """tau_G (from character-formula wreath Hurwitz numbers, rewritten in the
    character times) against the product of rescaled classical tau functions
    (from the Fock space of a single wedge)."""
    if tau_G is None:
        tau_G = tau_hurwitz(K, caps, method="char")
    lhs = change_vars_gamma(tau_G, K, caps)
    rhs = factor_product(K, caps)
    rep = compare_series(f"factorization[{K!r}]", lhs, rhs)
    rep.details["caps"] = caps.__dict__
    return rep


def toda_lowest_residual(tau_family: dict, caps: TodaCaps, s1: str = "s1_0", t1: str = "t1_0",
                         prefactor: Series | None = None, sides: bool = False):
    """d^2/ds1 dt1 log tau_0 - prefactor * tau_1 tau_{-1} / tau_0^2.

    Charge sectors are normalized to their own vacuum, so the absolute energy
    n^2/2 of the shifted vacua is supplied through ``prefactor`` (q for the
    Hurwitz tau, 1 for tau functions without q).  The result is restricted to
    monomials where both sides are exact under the truncation (at most
    degmax-1 parts on each side).
    """
    tau0 = tau_family[0]
    ring = tau0.ring
    prefactor = prefactor if prefactor is not None else ring.one()
    lhs = tau0.log().diff(s1).diff(t1)
    inv = tau0.inverse()
    rhs = prefactor * tau_family[1] * tau_family[-1] * inv * inv
    res = lhs - rhs
    counts = []
    for side in ("s", "t", "S", "T"):
        idx = [i for i, n in enumerate(ring.names) if n.startswith(side) and n[1:2].isdigit()]
        if idx:
            counts.append(idx)
    limit = caps.degmax - 1

    def exact(e):
        return all(sum(e[i] for i in idx) <= limit for idx in counts)

    if sides:
        return res.filter(exact), lhs.filter(exact), rhs.filter(exact)
    return res.filter(exact)


def hurwitz_toda_residual(caps: TodaCaps = TodaCaps(), beta_scale=1, sides: bool = False,
                          prefactor_scale=1):
    """Residual of the lowest 2-Toda equation for tau(s, t, q, beta_scale*beta).

    ``sides=True`` returns (residual, lhs, rhs); ``prefactor_scale`` multiplies
    the prefactor q (negative controls)."""
    triv = FiniteAbelianGroup()
    fam = {n: tau_hurwitz(triv, caps, charge=n, beta_scale=beta_scale) for n in (-1, 0, 1)}
    ring = fam[0].ring
    return toda_lowest_residual(fam, caps, prefactor=ring.var("q").scale(Fraction(prefactor_scale)), sides=sides)


def hurwitz_toda_check(caps: TodaCaps = TodaCaps(), beta_scale=1, prefactor_scale=1) -> CheckReport:
    res, lhs, rhs = hurwitz_toda_residual(caps, beta_scale, sides=True, prefactor_scale=prefactor_scale)
    rep = compare_series(f"toda[beta x {beta_scale}]", lhs, rhs)
    rep.details["caps"] = caps.__dict__
    return rep


def max_abs_coefficient(s: Series) -> Fraction:
    best = Fraction(0)
    for c in s.terms.values():
        if not is_rational(c):
            raise ArithmeticError("non-rational residual coefficient")
        best = max(best, abs(as_fraction(c)))
    return best
