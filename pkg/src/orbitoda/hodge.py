"""Hurwitz-Hodge generating functions on moduli of R-covers.

For a tuple r = (r_1..r_n) of elements r_i = (a_i, k_i) of R = Z_r x_kk K the
connected generating function is

    H_{g,r}(z) = int prod z_i/(1 - z_i psibar_i) sum_j (-r)^j lambda_j,
    H_r(z, u) = sum_g u^{2g-2} H_{g,r}(z),

and H^bullet_r is the sum over set partitions of the points (nonempty blocks)
of products of connected pieces, the unstable ones given by the closed forms
1/(|R| z) and z_1 z_2/(|R| (z_1+z_2)).

Normalization at the API boundary: every function returning a u-series
returns H^bullet_r(z, u / r^{1/2}), i.e. the genus-g part carries
u^{2g-2} r^{1-g}; functions returning a single genus return H_{g,r}.

Integer-point evaluations (z_i = mu_i > 0, mu_i = -a_i mod r) come from two
independent routes:

* ``"char"``: connected wreath Hurwitz numbers from the character formula
  through the orbifold ELSV correspondence;
* ``"operator"``: the disconnected function as a vacuum expectation
  < e^{alpha_r(-kk)/|R|} e^{u F2^0} prod alpha_{-mu_i}(...) >, which splits into
  one symmetric-group character sum per character of K; connected values
  follow by Moebius inversion over set partitions of the points.

Stable connected functions are polynomials; they are recovered by exact
interpolation on a simplex grid of admissible integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, factorial
from typing import Iterable, Sequence

from .algebra import as_fraction, is_rational, solve_least_rows
from .characters import sym_character
from .groups import CocycleExtension, GerbeTarget, character_root, frac_part
from .hurwitz import hurwitz_connected_b
from .partitions import KLabeledPartition, Partition, centralizer_order, enumerate_partitions


class UnstableError(ValueError):
    """Raised when a polynomial is requested for an unstable (g, n)."""


def side_group(X: GerbeTarget, side: str) -> CocycleExtension:
    if side not in ("0", "inf"):
        raise ValueError("side must be '0' or 'inf'")
    return X.side_group(side)


def floor_split(m: int, r: int) -> tuple[int, Fraction]:
    """(floor(m/r), <m/r>)."""
    return m // r, frac_part(m, r)


def _check_point(tup, mu, G: CocycleExtension):
    if len(tup) != len(mu):
        raise ValueError("tuple and evaluation point have different lengths")
    for (a, _), m in zip(tup, mu):
        if m < 1:
            raise ValueError("evaluation points must be positive integers")
        if (m + a) % G.r:
            raise ValueError(f"z={m} violates z = -{a} mod {G.r}")


def _edge_prefactor(mu: Sequence[int], r: int) -> Fraction:
    """r^{-sum <mu_i/r>} prod floor(mu_i/r)! / mu_i^floor(mu_i/r), without the
    fractional r-power (returned separately by callers when needed)."""
    out = Fraction(1)
    for m in mu:
        f = m // r
        out *= Fraction(factorial(f), m ** f)
    return out


def _r_power(exponent: Fraction, r: int) -> Fraction:
    if exponent.denominator != 1:
        raise ArithmeticError(f"non-integral power r^{exponent}")
    e = int(exponent)
    return Fraction(r) ** e


def shifted_labels(tup, mu, G: CocycleExtension) -> KLabeledPartition:
    """The K-labeled partition (mu_i, k_i - floor(-mu_i/r) kk)."""
    K = G.K
    return KLabeledPartition(
        (m, K.sub(k, K.mul((-m) // G.r, G.kk))) for (a, k), m in zip(tup, mu)
    )


# ---------------------------------------------------------------------------
# route "char": orbifold ELSV with connected wreath Hurwitz numbers


def elsv_evaluate(g: int, tup: Sequence, mu: Sequence[int], X: GerbeTarget, side: str = "0") -> Fraction:
    """H_{g,r}(mu) for a stable (g, n) from connected wreath Hurwitz numbers:

    H = z(mu^r)/(|K|^n b!) r^{g-1-sum<mu_i/r>} prod floor(mu_i/r)!/mu_i^floor(mu_i/r)
        * Hur_{g,K}(rbar, mu^r),

    rbar = d/r copies of (r, -kk), b = 2g-2 + d/r + n.  Unstable (g, n) return
    the closed forms."""
    G = side_group(X, side)
    tup = [G.normalize(x) for x in tup]
    mu = list(mu)
    _check_point(tup, mu, G)
    if not G.is_balanced(tup):
        return Fraction(0)
    n = len(tup)
    if g == 0 and n <= 2:
        return unstable_H(tup, mu, G)
    K, r = G.K, G.r
    d = sum(mu)
    if d % r:
        raise ValueError("r does not divide the degree")
    b = 2 * g - 2 + d // r + n
    if b < 0:
        return Fraction(0)
    mubar = shifted_labels(tup, mu, G)
    rbar = KLabeledPartition([(r, K.neg(G.kk))] * (d // r))
    hur = hurwitz_connected_b(rbar, mubar, b, K)
    if not hur:
        return Fraction(0)
    fr = sum((frac_part(m, r) for m in mu), Fraction(0))
    val = Fraction(centralizer_order(mubar, K), K.order ** n * factorial(b))
    val *= _r_power(Fraction(g - 1) - fr, r) * _edge_prefactor(mu, r) * hur
    return val


def unstable_H(tup, z, G: CocycleExtension):
    """Closed forms of the unstable pieces (g = 0, n <= 2) at the values z."""
    tup = [G.normalize(x) for x in tup]
    if not G.is_balanced(tup):
        return Fraction(0)
    if len(tup) == 1:
        return Fraction(1) / (G.order * z[0])
    if len(tup) == 2:
        return Fraction(z[0] * z[1]) / (G.order * (z[0] + z[1]))
    raise ValueError("only n <= 2 is unstable in genus 0")


# ---------------------------------------------------------------------------
# route "operator": sector character sums


@lru_cache(maxsize=20_000)
def _sector_sum(r: int, parts: tuple) -> tuple:
    """{content sum c(lam): sum_lam chi^lam(r^j) chi^lam(parts)} for |parts| = r j."""
    n = sum(parts)
    if n % r:
        return ()
    j = n // r
    out: dict = {}
    for lam in enumerate_partitions(n):
        a = sym_character(lam, (r,) * j) if j else (1 if not lam else 0)
        if not a:
            continue
        s = sym_character(lam, parts) if parts else 1
        if not s:
            continue
        c = Partition(lam).content_sum()
        out[c] = out.get(c, 0) + a * s
    return tuple(sorted((c, v) for c, v in out.items() if v))


@dataclass(frozen=True)
class ExpData:
    """A finite sum  sum_{(J, C)} coeff * u^{-J} e^{u C}, times u^{-shift}."""

    terms: tuple  # ((J, C), coeff)
    shift: int

    def coeff(self, p: int):
        """[u^p]."""
        total = Fraction(0)
        for (J, C), c in self.terms:
            k = p + self.shift + J
            if k < 0:
                continue
            if k == 0:
                total = total + c
            elif C:
                total = total + c * Fraction(C) ** k / factorial(k)
        return total

    def series(self, lo: int, hi: int) -> dict:
        return {p: v for p in range(lo, hi + 1) if (v := self.coeff(p))}


def _sector_product(tup, mu, G: CocycleExtension, phase_of_point, jweight) -> dict:
    """sum over assignments of points to characters of K of
    prod(point phases) prod_gamma jweight(gamma, j) sum_lam ... e^{u|K|c}.

    Returns {(J, C): coefficient} with J = total number of alpha_r's."""
    K = G.K
    chars = K.characters()
    n = len(mu)
    out: dict = {}
    for assign in product(range(len(chars)), repeat=n):
        phase = Fraction(1)
        for i, gi in enumerate(assign):
            phase = phase * phase_of_point(chars[gi], i)
        if not phase:
            continue
        sector_terms = {(0, 0): Fraction(1)}
        ok = True
        for gi, gamma in enumerate(chars):
            parts = tuple(sorted((mu[i] for i in range(n) if assign[i] == gi), reverse=True))
            data = _sector_sum(G.r, parts)
            if not data:
                ok = False
                break
            j = sum(parts) // G.r
            w = jweight(gamma, j)
            new = {}
            for (J, C), v in sector_terms.items():
                for c, s in data:
                    key = (J + j, C + K.order * c)
                    new[key] = new.get(key, 0) + v * w * s
            sector_terms = new
        if not ok:
            continue
        for key, v in sector_terms.items():
            out[key] = out.get(key, 0) + phase * v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=4096)
def _operator_H_disconnected_cached(tup: tuple, mu: tuple, G: CocycleExtension) -> ExpData:
    K, r = G.K, G.r
    n = len(mu)
    if not G.is_balanced(tup):
        return ExpData((), 0)
    kk = G.kk

    def phase(gamma, i):
        k = tup[i][1]
        f = (-mu[i]) // r
        return K.character_value(gamma, K.neg(k)) * K.character_value(gamma, K.mul(f, kk))

    def jweight(gamma, j):
        return K.character_value(gamma, K.mul(j, kk)) * Fraction(1, (G.order ** j) * factorial(j))

    raw = _sector_product(tup, mu, G, phase, jweight)
    fr = sum((frac_part(m, r) for m in mu), Fraction(0))
    pref = _r_power(-fr, r) * Fraction(1, K.order ** n) * _edge_prefactor(mu, r)
    d = sum(mu)
    # u^{-|mu|/r - n} in front; the alpha_r's carry no u here (J counted as 0)
    terms = tuple(((0, C), v * pref) for (J, C), v in sorted(raw.items()))
    merged: dict = {}
    for (J, C), v in terms:
        merged[(J, C)] = merged.get((J, C), 0) + v
    return ExpData(tuple((k, v) for k, v in sorted(merged.items()) if v), d // r + n)


def operator_H_disconnected(tup, mu, X: GerbeTarget, side: str = "0") -> ExpData:
    """H^bullet_r(mu, u/r^{1/2}) at an admissible integer point, as exponential data."""
    G = side_group(X, side)
    tup = tuple(G.normalize(x) for x in tup)
    mu = tuple(mu)
    _check_point(tup, mu, G)
    return _operator_H_disconnected_cached(tup, mu, G)


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _laurent_mul(a: dict, b: dict, hi: int) -> dict:
    out: dict = {}
    for p, x in a.items():
        for q, y in b.items():
            if p + q <= hi:
                out[p + q] = out.get(p + q, 0) + x * y
    return {k: v for k, v in out.items() if v}


def operator_H_connected_series(tup, mu, X: GerbeTarget, side: str, hi: int) -> dict:
    """Connected H_r(mu, u/r^{1/2}) as {power of u: value} up to u^hi, by
    Moebius inversion over set partitions of the points."""
    G = side_group(X, side)
    tup = tuple(G.normalize(x) for x in tup)
    mu = tuple(mu)
    _check_point(tup, mu, G)
    n = len(mu)
    total: dict = {}
    for P in _set_partitions(list(range(n))):
        k = len(P)
        coef = (-1) ** (k - 1) * factorial(k - 1)
        prod_series = {0: Fraction(1)}
        for B in P:
            room = hi + 2 * (n - len(B))
            data = _operator_H_disconnected_cached(tuple(tup[i] for i in B), tuple(mu[i] for i in B), G)
            s = data.series(-2 * len(B), room)
            prod_series = _laurent_mul(prod_series, s, hi + 2 * n)
            if not prod_series:
                break
        for p, v in prod_series.items():
            if p <= hi:
                total[p] = total.get(p, 0) + coef * v
    return {p: v for p, v in total.items() if v}


def operator_H_connected(g: int, tup, mu, X: GerbeTarget, side: str = "0") -> Fraction:
    """H_{g,r}(mu) through the operator route."""
    G = side_group(X, side)
    ser = operator_H_connected_series(tup, mu, X, side, 2 * g - 2)
    val = ser.get(2 * g - 2, Fraction(0))
    if not is_rational(val):
        raise ArithmeticError("connected Hodge value is not rational")
    return as_fraction(val) * Fraction(G.r) ** (g - 1)


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class HodgePolynomial:
    """A polynomial in z_1..z_n with rational coefficients: {exponents: coeff}."""

    g: int
    tup: tuple
    nvars: int
    terms: tuple  # sorted ((exps), coeff)

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def evaluate(self, values: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms:
            v = c
            for x, p in zip(values, e):
                v *= Fraction(x) ** p
            total += v
        return total

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def text(self, names: Sequence[str] | None = None) -> str:
        names = list(names or [f"z{i + 1}" for i in range(self.nvars)])
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms, key=lambda t: (-sum(t[0]), tuple(-x for x in t[0]))):
            mon = "*".join(n if p == 1 else f"{n}^{p}" for n, p in zip(names, e) if p)
            parts.append(f"({c})*{mon}" if mon else f"({c})")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"g": self.g, "tuple": [[a, list(k)] for a, k in self.tup],
                "terms": [{"exps": list(e), "coeff": str(c)} for e, c in self.terms]}


def degree_window(g: int, tup, G: CocycleExtension) -> tuple[int, int]:
    """Range of total z-degrees of a stable connected polynomial:
    [3g-3+2n - rank, 3g-3+2n] with rank the Hodge-bundle rank bound."""
    n = len(tup)
    hi = 3 * g - 3 + 2 * n
    iota = G.age(tup)
    rank = g - 1 + int(iota) + (1 if all(G.in_K(x) for x in tup) else 0)
    rank = max(rank, 0)
    return max(n, hi - rank), hi


def _monomials(nvars: int, lo: int, hi: int, first: int = 1) -> list[tuple]:
    """Exponent vectors with every entry >= first and total degree in [lo, hi]."""
    out = []

    def rec(i, acc, total):
        if i == nvars:
            if lo <= total <= hi:
                out.append(tuple(acc))
            return
        for p in range(first, hi - total - first * (nvars - i - 1) + 1):
            rec(i + 1, acc + [p], total + p)

    rec(0, [], 0)
    return out


def _grid(bases: Sequence[int], step: int, D: int) -> list[tuple]:
    n = len(bases)
    pts = []

    def rec(i, acc, total):
        if i == n:
            pts.append(tuple(b + step * j for b, j in zip(bases, acc)))
            return
        for j in range(D - total + 1):
            rec(i + 1, acc + [j], total + j)

    rec(0, [], 0)
    return pts


def _evaluator(method: str):
    if method == "char":
        return elsv_evaluate
    if method == "operator":
        return operator_H_connected
    raise ValueError(f"unknown method {method!r}")


_POLY_CACHE: dict = {}


def interpolate_H(g: int, tup, X: GerbeTarget, side: str = "0", method: str = "operator",
                  shift: int = 0, fixed: dict | None = None) -> HodgePolynomial:
    """Recover the connected polynomial H_{g,r}(z) from integer evaluations.

    ``fixed`` maps point indices to admissible integers held fixed; the result
    is then a polynomial in the remaining variables only (variables kept in
    their original order).  ``shift`` moves the grid by ``shift * r`` in every
    free variable (grid-independence tests)."""
    G = side_group(X, side)
    tup = tuple(G.normalize(x) for x in tup)
    n = len(tup)
    if g == 0 and n <= 2:
        raise UnstableError("unstable (g, n): use the closed forms 1/(|R|z) and z1 z2/(|R|(z1+z2))")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    fixed = dict(fixed or {})
    key = (g, tup, G, method, shift, tuple(sorted(fixed.items())))
    if key in _POLY_CACHE:
        return _POLY_CACHE[key]
    free = [i for i in range(n) if i not in fixed]
    if not G.is_balanced(tup):
        poly = HodgePolynomial(g, tup, len(free), ())
        _POLY_CACHE[key] = poly
        return poly
    lo, hi = degree_window(g, tup, G)
    if fixed:
        lo = len(free)
    monos = _monomials(len(free), lo, hi)
    bases = []
    for i in free:
        a = tup[i][0]
        b = (-a) % G.r or G.r
        bases.append(b + G.r * shift)
    D = hi - len(free)
    evaluate = _evaluator(method)
    rows = []
    for pt in _grid(bases, G.r, max(D, 0)):
        full = [0] * n
        for i, v in zip(free, pt):
            full[i] = v
        for i, v in fixed.items():
            full[i] = v
        val = evaluate(g, tup, full, X, side)
        row = []
        for e in monos:
            m = Fraction(1)
            for x, p in zip(pt, e):
                m *= x ** p
            row.append(m)
        rows.append(row + [val])
    if not monos:
        if any(r[-1] for r in rows):
            raise ArithmeticError("nonzero values but empty degree window")
        sol = []
    else:
        sol = solve_least_rows(rows, len(monos))
    terms = tuple(sorted((e, as_fraction(c)) for e, c in zip(monos, sol) if c))
    poly = HodgePolynomial(g, tup, len(free), terms)
    _POLY_CACHE[key] = poly
    return poly


# ---------------------------------------------------------------------------
# disconnected assembly at integer points


def connected_series_at(tup, z, X: GerbeTarget, side: str, hi: int, method: str = "char") -> dict:
    """Connected H_r(z, u/r^{1/2}) = sum_g u^{2g-2} r^{1-g} H_{g,r}(z) up to u^hi,
    with stable genera from interpolated polynomials and the closed forms
    for the unstable pieces."""
    G = side_group(X, side)
    tup = tuple(G.normalize(x) for x in tup)
    n = len(tup)
    out = {}
    for g in range(0, hi // 2 + 2):
        p = 2 * g - 2
        if p > hi:
            break
        if g == 0 and n <= 2:
            val = unstable_H(tup, z, G)
        else:
            val = interpolate_H(g, tup, X, side, method).evaluate(z)
        if val:
            out[p] = val * Fraction(G.r) ** (1 - g)
    return out


def assemble_H_disconnected(tup, z, X: GerbeTarget, side: str = "0", ucap: int = 4,
                            method: str = "char") -> dict:
    """H^bullet_r(z, u/r^{1/2}) at integer z as {u power: value} up to u^ucap,
    summed over set partitions of the points into nonempty blocks."""
    G = side_group(X, side)
    tup = tuple(G.normalize(x) for x in tup)
    n = len(tup)
    total: dict = {}
    for P in _set_partitions(list(range(n))):
        prod_series = {0: Fraction(1)}
        for B in P:
            sub = tuple(tup[i] for i in B)
            if not G.is_balanced(sub):
                prod_series = {}
                break
            room = ucap + 2 * (len(P) - 1)
            s = connected_series_at(sub, [z[i] for i in B], X, side, room, method)
            prod_series = _laurent_mul(prod_series, s, ucap + 2 * n)
            if not prod_series:
                break
        for p, v in prod_series.items():
            if p <= ucap:
                total[p] = total.get(p, 0) + v
    return {p: v for p, v in sorted(total.items()) if v}


# ---------------------------------------------------------------------------
# integer-point A-operators


def a_operator_expectation_integer(tup, z, X: GerbeTarget, side: str = "0", ucap: int = 4,
                                   prefactor_twist=1) -> dict:
    """(u|K|)^{-n} < prod_i A_{r_i}(z_i, u) > at admissible integers, with

        A_{(a,k)} = sum_gamma gamma(-k) A^gamma_{a/r},
        A^gamma_{a/r}(z) = r^{-<z/r>} gamma(-kk)^{a/r} floor(z/r)!/z^floor(z/r)
                           * C alpha^gamma_{-z} C^{-1},
        C = e^{alpha^gamma_r/(u|R|)} e^{u|K| F^gamma_2}.

    The conjugations cancel against the vacuum, leaving one symmetric-group
    character sum per character of K.  ``prefactor_twist`` multiplies every
    point prefactor (negative controls).  Returns {u power: value}."""
    G = side_group(X, side)
    tup = tuple(G.normalize(x) for x in tup)
    z = tuple(z)
    _check_point(tup, z, G)
    K, r = G.K, G.r
    n = len(z)
    roots = {gamma: character_root(gamma, K.neg(G.kk), K, r, 1) for gamma in K.characters()}

    def phase(gamma, i):
        a, k = tup[i]
        return K.character_value(gamma, K.neg(k)) * roots[gamma] ** a

    def jweight(gamma, j):
        return Fraction(1, G.order ** j * factorial(j))

    raw = _sector_product(tup, z, G, phase, jweight)
    fr = sum((frac_part(m, r) for m in z), Fraction(0))
    pref = _r_power(-fr, r) * _edge_prefactor(z, r) * Fraction(prefactor_twist) ** n / K.order ** n
    data = ExpData(tuple(sorted(((J, C), v * pref) for (J, C), v in raw.items())), n)
    out = data.series(-2 * n, ucap)
    for p, v in out.items():
        if not is_rational(v):
            raise ArithmeticError("A-operator expectation is not rational")
    return {p: as_fraction(v) for p, v in out.items()}


def admissible_points(tup, G: CocycleExtension, count: int, start: int = 0) -> list[tuple]:
    """The first ``count`` admissible integer tuples in a deterministic order."""
    bases = [((-a) % G.r) or G.r for a, _ in tup]
    pts = []
    D = 0
    while len(pts) < count + start:
        for pt in _grid(bases, G.r, D):
            if sum((p - b) // G.r for p, b in zip(pt, bases)) == D:
                pts.append(pt)
        D += 1
    return pts[start:start + count]
