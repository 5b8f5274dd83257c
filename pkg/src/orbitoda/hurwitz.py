"""Double Hurwitz numbers and K-wreath double Hurwitz numbers.

Three independent evaluation paths:

* characters: (1/z(mu) z(nu)) sum_lam chi^lam(mu) chi^lam(nu) f_T0(lam)^b,
* Fock space: the same number as a vacuum expectation of alpha^c operators
  around (F2^0)^b,
* brute force: counting tuples in the wreath group K wr S_d.

Connected numbers come from the disconnected ones through the logarithm of
the generating function (equivalently Moebius inversion over set partitions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Iterable, Sequence

from .algebra import SeriesRing, as_fraction, is_rational
from .characters import central_character_fT, enumerate_multipartitions, wreath_character
from .fock import AlphaClass, Context, F2, vacuum_expectation
from .groups import FiniteAbelianGroup
from .partitions import KLabeledPartition, centralizer_order, format_label, wreath_order


class BudgetExceeded(RuntimeError):
    """The brute-force enumeration would exceed the configured group-size budget."""


@dataclass(frozen=True)
class HurwitzQuery:
    g: int
    mu: KLabeledPartition
    nu: KLabeledPartition
    K: FiniteAbelianGroup = FiniteAbelianGroup()

    def __post_init__(self):
        object.__setattr__(self, "mu", KLabeledPartition(self.mu))
        object.__setattr__(self, "nu", KLabeledPartition(self.nu))
        if self.mu.size != self.nu.size:
            raise ValueError(f"profiles have different sizes {self.mu.size} and {self.nu.size}")
        for _, lab in list(self.mu) + list(self.nu):
            if len(lab) != len(self.K.moduli):
                raise ValueError(f"label {lab} does not belong to {self.K!r}")

    @property
    def d(self) -> int:
        return self.mu.size

    @property
    def b(self) -> int:
        return 2 * self.g - 2 + self.mu.length + self.nu.length

    @property
    def empty(self) -> bool:
        """True when no simple branch points are possible (b < 0)."""
        return self.b < 0


def make_query(g: int, mu, nu, K: FiniteAbelianGroup | None = None) -> HurwitzQuery:
    """Build a query from KLabeledPartitions or plain part lists (identity labels)."""
    K = K or FiniteAbelianGroup()

    def coerce(p):
        if isinstance(p, KLabeledPartition):
            return p
        return KLabeledPartition((x, K.zero) if isinstance(x, int) else x for x in p)

    return HurwitzQuery(g, coerce(mu), coerce(nu), K)


def _rational(x) -> Fraction:
    if not is_rational(x):
        raise ArithmeticError(f"Hurwitz number is not rational: {x!r}")
    return as_fraction(x)


# ---------------------------------------------------------------------------
# character formula


def hurwitz_disconnected_b(mu: KLabeledPartition, nu: KLabeledPartition, b: int,
                           K: FiniteAbelianGroup) -> Fraction:
    """Disconnected number with an explicit count b of simple branch points."""
    if b < 0 or mu.size != nu.size:
        return Fraction(0)
    total = Fraction(0)
    for f, w in _spectral_data(mu, nu, K):
        total = total + w * (f ** b if b else 1)
    return _rational(total) / (centralizer_order(mu, K) * centralizer_order(nu, K))


@lru_cache(maxsize=4096)
def _spectral_data(mu: KLabeledPartition, nu: KLabeledPartition, K: FiniteAbelianGroup) -> tuple:
    """[(f_lam, sum of chi_lam(mu) chi_lam(nu) over lam with that eigenvalue)],
    so that the b-dependence of the character formula is a sum of powers."""
    out: list = []
    for lam in enumerate_multipartitions(mu.size, K):
        a = wreath_character(lam, mu, K)
        if not a:
            continue
        c = wreath_character(lam, nu, K)
        if not c:
            continue
        f = central_character_fT(lam, K.zero, K)
        for i, (f0, w0) in enumerate(out):
            if f0 == f:
                out[i] = (f0, w0 + a * c)
                break
        else:
            out.append((f, a * c))
    return tuple((f, w) for f, w in out if w)


def hurwitz_disconnected(q: HurwitzQuery) -> Fraction:
    if q.empty:
        return Fraction(0)
    return hurwitz_disconnected_b(q.mu, q.nu, q.b, q.K)


# ---------------------------------------------------------------------------
# Fock-space path


def hurwitz_via_fock_b(mu: KLabeledPartition, nu: KLabeledPartition, b: int,
                      K: FiniteAbelianGroup) -> Fraction:
    """(1/z z) < prod alpha^{c}_{mu_i} (F2^0)^b prod alpha^{c'}_{-nu_j} >."""
    if b < 0 or mu.size != nu.size:
        return Fraction(0)
    ops = [AlphaClass(m, c) for m, c in mu]
    ops += [F2("zero") for _ in range(b)]
    ops += [AlphaClass(-m, c) for m, c in nu]
    val = vacuum_expectation(ops, Context(K))
    return _rational(val) / (centralizer_order(mu, K) * centralizer_order(nu, K))


def hurwitz_via_fock(q: HurwitzQuery) -> Fraction:
    if q.empty:
        return Fraction(0)
    return hurwitz_via_fock_b(q.mu, q.nu, q.b, q.K)


# ---------------------------------------------------------------------------
# brute force in the wreath group
#
# An element is (k, pi): k a tuple of K elements indexed by 0..d-1 and pi a
# permutation tuple (pi[i] = image of i).  Product (k, pi)(h, rho) =
# (k + pi.h, pi rho) with (pi.h)[pi[i]] = h[i].


class WreathGroup:
    def __init__(self, d: int, K: FiniteAbelianGroup):
        self.d, self.K = d, K
        self.order = wreath_order(d, K)

    def elements(self):
        for pi in permutations(range(self.d)):
            for k in product(K_elements(self.K), repeat=self.d):
                yield (tuple(k), pi)

    def identity(self):
        return ((self.K.zero,) * self.d, tuple(range(self.d)))

    def mul(self, x, y):
        (k, pi), (h, rho) = x, y
        moved = [None] * self.d
        for i in range(self.d):
            moved[pi[i]] = h[i]
        kk = tuple(self.K.add(a, b) for a, b in zip(k, moved))
        return (kk, tuple(pi[rho[i]] for i in range(self.d)))

    def inverse(self, x):
        k, pi = x
        inv = [0] * self.d
        for i, p in enumerate(pi):
            inv[p] = i
        # (k, pi)^{-1} = (-(pi^{-1}.k), pi^{-1})
        h = [None] * self.d
        for i in range(self.d):
            h[inv[i]] = self.K.neg(k[i])
        return (tuple(h), tuple(inv))

    def cycles(self, pi) -> list[list[int]]:
        seen, out = set(), []
        for i in range(self.d):
            if i in seen:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = pi[j]
            out.append(cyc)
        return out

    def class_of(self, x) -> KLabeledPartition:
        k, pi = x
        pairs = []
        for cyc in self.cycles(pi):
            lab = self.K.zero
            for i in cyc:
                lab = self.K.add(lab, k[i])
            pairs.append((len(cyc), lab))
        return KLabeledPartition(pairs)

    def transpositions(self) -> list:
        """The class T_0: a 2-cycle whose cycle label is the identity."""
        out = []
        for i in range(self.d):
            for j in range(i + 1, self.d):
                pi = list(range(self.d))
                pi[i], pi[j] = j, i
                for a in K_elements(self.K):
                    k = [self.K.zero] * self.d
                    k[i] = a
                    k[j] = self.K.neg(a)
                    out.append((tuple(k), tuple(pi)))
        return out


def K_elements(K: FiniteAbelianGroup) -> list[tuple]:
    return K.elements()


def _join(blocks: frozenset, cycles: Iterable[Iterable[int]]) -> frozenset:
    """Merge a set partition (frozenset of frozensets) with the given cycles."""
    parent = {}
    for blk in blocks:
        for i in blk:
            parent[i] = min(blk)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for blk in blocks:
        m = min(blk)
        parent[m] = m
    for cyc in cycles:
        cyc = list(cyc)
        for a in cyc[1:]:
            ra, rb = find(cyc[0]), find(a)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict = {}
    for i in parent:
        groups.setdefault(find(i), set()).add(i)
    return frozenset(frozenset(g) for g in groups.values())


DEFAULT_BUDGET = {"trivial_d": 5, "wreath_Kd": 6}


def hurwitz_bruteforce(q: HurwitzQuery, connected: bool = False, budget: dict | None = None) -> Fraction:
    """(1/|G|) #{(s0, t_1..t_b, s_inf): s0 in C_mu, t_i in T_0, s_inf in C_nu,
    s0 t_1 ... t_b s_inf = 1}, optionally only tuples generating a transitive
    subgroup of S_d."""
    budget = dict(DEFAULT_BUDGET, **(budget or {}))
    d, K = q.d, q.K
    if K.order == 1 and d > budget["trivial_d"]:
        raise BudgetExceeded(f"d={d} exceeds the brute-force budget {budget['trivial_d']}")
    if K.order > 1 and K.order * d > budget["wreath_Kd"]:
        raise BudgetExceeded(f"|K|*d={K.order * d} exceeds the brute-force budget {budget['wreath_Kd']}")
    if q.empty:
        return Fraction(0)
    if d == 0:
        return Fraction(1)
    G = WreathGroup(d, K)
    T = G.transpositions()
    start = frozenset(frozenset([i]) for i in range(d))
    states: dict = {}
    for x in G.elements():
        if G.class_of(x) == q.mu:
            key = (x, _join(start, G.cycles(x[1])) if connected else None)
            states[key] = states.get(key, 0) + 1
    for _ in range(q.b):
        new: dict = {}
        for (x, blocks), n in states.items():
            for t in T:
                y = G.mul(x, t)
                nb = _join(blocks, G.cycles(t[1])) if connected else None
                new[(y, nb)] = new.get((y, nb), 0) + n
        states = new
    count = 0
    for (x, blocks), n in states.items():
        inv = G.inverse(x)
        if G.class_of(inv) != q.nu:
            continue
        if connected and len(_join(blocks, G.cycles(inv[1]))) != 1:
            continue
        count += n
    return Fraction(count, G.order)


# ---------------------------------------------------------------------------
# connected numbers


def _var(side: str, part: int, label: tuple) -> str:
    return f"{side}{part}_{format_label(label)}"


def _sub_multisets(mu: KLabeledPartition) -> list[KLabeledPartition]:
    counts: dict = {}
    for x in mu:
        counts[x] = counts.get(x, 0) + 1
    keys = list(counts)
    out = []
    for mult in product(*(range(counts[k] + 1) for k in keys)):
        out.append(KLabeledPartition([k for k, m in zip(keys, mult) for _ in range(m)]))
    return out


def hurwitz_connected_b(mu: KLabeledPartition, nu: KLabeledPartition, b: int,
                        K: FiniteAbelianGroup, disconnected=None) -> Fraction:
    """Connected number with b branch points: the coefficient of
    s_mu t_nu beta^b/b! in log of the disconnected generating function,
    restricted to monomials dividing s_mu t_nu beta^b (exact)."""
    if b < 0 or mu.size != nu.size:
        return Fraction(0)
    disconnected = disconnected or hurwitz_disconnected_b
    if mu.length == 1 or nu.length == 1:
        # a single cycle over one branch point forces transitivity
        return disconnected(mu, nu, b, K)
    caps: dict = {"beta": b}
    for side, prof in (("s", mu), ("t", nu)):
        for x in prof:
            name = _var(side, *x)
            caps[name] = caps.get(name, 0) + 1
    ring = SeriesRing(list(caps), caps)
    terms = {}
    subs_nu = _sub_multisets(nu)
    for m1 in _sub_multisets(mu):
        for n1 in subs_nu:
            if m1.size != n1.size or (m1.size == 0) != (n1.size == 0):
                continue
            for bb in range(b + 1):
                if m1.size == 0:
                    val = Fraction(1) if bb == 0 else Fraction(0)
                else:
                    val = disconnected(m1, n1, bb, K)
                if not val:
                    continue
                exps = {"beta": bb}
                for side, prof in (("s", m1), ("t", n1)):
                    for x in prof:
                        name = _var(side, *x)
                        exps[name] = exps.get(name, 0) + 1
                terms[ring.exps_of(exps)] = Fraction(val, factorial(bb))
    log = ring.from_terms(terms).log()
    exps = {"beta": b}
    for side, prof in (("s", mu), ("t", nu)):
        for x in prof:
            name = _var(side, *x)
            exps[name] = exps.get(name, 0) + 1
    return _rational(log.coeff(ring.exps_of(exps))) * factorial(b)


def hurwitz_connected(q: HurwitzQuery) -> Fraction:
    if q.empty:
        return Fraction(0)
    return hurwitz_connected_b(q.mu, q.nu, q.b, q.K)


def hurwitz(q: HurwitzQuery, method: str = "char", connected: bool = False) -> Fraction:
    """Dispatch on ``method`` in {"char", "fock", "brute"}."""
    if method == "brute":
        return hurwitz_bruteforce(q, connected)
    base = {"char": hurwitz_disconnected_b, "fock": hurwitz_via_fock_b}.get(method)
    if base is None:
        raise ValueError(f"unknown method {method!r}")
    if q.empty:
        return Fraction(0)
    if connected:
        return hurwitz_connected_b(q.mu, q.nu, q.b, q.K, base)
    return base(q.mu, q.nu, q.b, q.K)
