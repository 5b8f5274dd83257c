"""Equivariant Gromov-Witten generating functions of gerby C_{r,s} by localization.

Disconnected n+m point functions are assembled from Hurwitz-Hodge pieces,

    G_d(z, w, u) = sum_{|mubar| = d} 1/z(mubar) J_r(z, mubar, u, t) J_s(w, mubar, u, -t),

    J_r = r^{sum<mu_i/r> - iota(r)} (|K|u/t)^{l(mu)} t^{-(|mu|/r + #(r_i not in K) + l(r) - iota(r))}
          prod mu_i^floor(mu_i/r)/floor(mu_i/r)!  H_{r + rho(mubar)}(mu, t z, u/(t r^{1/2})),

where H is the disconnected Hodge function (a sum over set partitions of the
marked points and edge points into vertex blocks).  Every prefactor is a
product over points, so each vertex block carries its own share and a
localization graph is a pair of set partitions (over 0 and over infinity)
glued along the edges of mubar.  Connected functions keep only the pairs
whose block graph is connected.

Two kinds of vertex blocks are not polynomial in the marked variables: the
degree-0 unstable blocks with one identity point (a multiple of 1/z) and with
a pair of inverse points (a multiple of z_i z_j/(z_i+z_j)).  A
:class:`GWFunction` stores the sum as {unstable block structure: series},
the rational factors kept symbolic in the key.

Exponents of t (and of -t on the infinity side) are integral on every
balanced block, so no branch of a fractional power is ever chosen; this is
asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import Iterable, Sequence

from .algebra import Series, SeriesRing, conj
from .groups import CocycleExtension, GerbeTarget, character_root, edge_monodromies, frac_part
from .hodge import _set_partitions, degree_window, elsv_evaluate, interpolate_H
from .partitions import KLabeledPartition, centralizer_order, enumerate_labeled_partitions, format_label


@dataclass(frozen=True)
class GWCaps:
    """Truncation: powers of u up to ``ucap`` (genus g has u^{2g-2}) and
    exponents of each z_i, w_j up to ``zcap``."""

    ucap: int = 0
    zcap: int = 2


def _signed_power(sign: int, e: Fraction) -> tuple[int, int]:
    """(coefficient, exponent) of (sign*t)^e for integral e."""
    if e.denominator != 1:
        raise ArithmeticError(f"non-integral power of t: {e}")
    e = int(e)
    return (sign ** e if sign == -1 else 1), e


def _int_power(base: int, e: Fraction) -> Fraction:
    if e.denominator != 1:
        raise ArithmeticError(f"non-integral power {base}^{e}")
    return Fraction(base) ** int(e)


def mark_names(n: int, m: int, first: int = 1) -> tuple[list[str], list[str]]:
    """Variables z_first.. over 0 and w_1.. over infinity."""
    return [f"z{first + i}" for i in range(n)], [f"w{1 + j}" for j in range(m)]


def gw_ring(znames: Sequence[str], wnames: Sequence[str], caps: GWCaps, extra_u: int | None = 0) -> SeriesRing:
    names = list(znames) + list(wnames) + ["u", "t"]
    c = {n: caps.zcap for n in list(znames) + list(wnames)}
    if extra_u is not None:
        c["u"] = caps.ucap + extra_u
    return SeriesRing(names, c)


# ---------------------------------------------------------------------------
# vertex blocks


@dataclass(frozen=True)
class Block:
    """A vertex: marked points (variable name, element) and edge points
    (degree, element) over one side."""

    side: str
    marks: tuple
    edges: tuple


def _point_prefactor(block: Block, G: CocycleExtension):
    """(t-exponent, r-exponent, coefficient, u-exponent) of the J prefactor
    restricted to the points of a block."""
    r, K = G.r, G.K
    et, er, c, eu = Fraction(0), Fraction(0), Fraction(1), 0
    for _, (a, _) in block.marks:
        fa = frac_part(a, r)
        et -= (0 if a % r == 0 else 1) + 1 - fa
        er -= fa
    for mu, _ in block.edges:
        f = mu // r
        er += frac_part(mu, r)
        c *= K.order * Fraction(mu ** f, factorial(f))
        eu += 1
        et -= 1 + Fraction(mu, r)
    return et, er, c, eu


def _monomial(ring: SeriesRing, exps: dict, coeff) -> Series:
    return ring.monomial(exps, coeff)


def block_series(block: Block, X: GerbeTarget, ring: SeriesRing, gmax: int):
    """Contribution of one vertex block, summed over genera 0..gmax.

    Returns {key: series}: key None holds the power series part; otherwise
    the key names the rational factor (("single", name) for 1/z,
    ("pair", n1, n2) for z1 z2/(z1+z2)) and the series is its coefficient."""
    G = X.side_group(block.side)
    sign = 1 if block.side == "0" else -1
    elems = [e for _, e in block.marks] + [e for _, e in block.edges]
    if not G.is_balanced(elems):
        return {}
    r = G.r
    et0, er0, c0, eu0 = _point_prefactor(block, G)
    n = len(elems)
    nm = len(block.marks)
    zcap = max((ring.caps[ring.index[name]] or 0) for name, _ in block.marks) if nm else 0
    mus = [m for m, _ in block.edges]
    out: dict = {}
    for g in range(0, gmax + 1):
        # genus factor (u/(tau r^{1/2}))^{2g-2}
        et = et0 + 2 - 2 * g
        er = er0 + 1 - g
        eu = eu0 + 2 * g - 2
        coef = c0
        key = None
        if g == 0 and n <= 2:
            part = _unstable_block(block, G, ring, sign)
            if part is None:
                continue
            key, hser, ht = part
            et += ht
        else:
            if not mus and degree_window(g, tuple(elems), G)[0] > nm * zcap:
                # every monomial has some exponent above the truncation
                continue
            if nm:
                poly = interpolate_H(g, tuple(elems), X, block.side, "char",
                                     fixed={nm + j: mu for j, mu in enumerate(mus)})
                terms = {}
                for e, cc in poly.terms:
                    deg = sum(e)
                    s, _ = _signed_power(sign, Fraction(deg))
                    mon = {name: p for (name, _), p in zip(block.marks, e) if p}
                    mon["t"] = deg
                    terms[ring.exps_of(mon)] = cc * s
                hser = ring.from_terms(terms)
            else:
                val = elsv_evaluate(g, elems, mus, X, block.side)
                hser = ring.const(val)
            if hser.is_zero():
                continue
        s, te = _signed_power(sign, et)
        factor = ring.monomial({"t": te, "u": eu}, coef * s * _int_power(r, er))
        val = out.get(key, ring.zero()) + factor * hser
        if val.is_zero():
            out.pop(key, None)
        else:
            out[key] = val
    return out


def _multiply_parts(acc: dict, parts: dict) -> dict:
    """Product of two {key tuple: series} / {key or None: series} sums."""
    out: dict = {}
    for k1, s1 in acc.items():
        for k2, s2 in parts.items():
            k = k1 + ((k2,) if k2 is not None else ())
            p = s1 * s2
            if p.is_zero():
                continue
            out[k] = out[k] + p if k in out else p
    return {k: v for k, v in out.items() if not v.is_zero()}


def _unstable_block(block: Block, G: CocycleExtension, ring: SeriesRing, sign: int):
    """Genus-0 blocks with at most two points, in the variable tau z (tau = sign t).

    Returns (key, series, extra t-exponent) or None."""
    order = G.order
    marks, edges = block.marks, block.edges
    if len(marks) == 1 and not edges:
        # H = 1/(|G| tau z); the power of tau is returned separately
        return ("single", marks[0][0]), ring.const(Fraction(1, order)), -1
    if len(marks) == 2:
        # H = tau z1 z2/(|G| (z1 + z2))
        return ("pair", marks[0][0], marks[1][0]), ring.const(Fraction(1, order)), 1
    if len(edges) == 1 and not marks:
        return None, ring.const(Fraction(1, order * edges[0][0])), 0
    if len(edges) == 2:
        m1, m2 = edges[0][0], edges[1][0]
        return None, ring.const(Fraction(m1 * m2, order * (m1 + m2))), 0
    if len(marks) == 1 and len(edges) == 1:
        # tau z mu/(|G|(tau z + mu)) = (1/|G|) sum_k (-1)^k (tau z)^{k+1} / mu^k
        name = marks[0][0]
        mu = edges[0][0]
        terms = {}
        zcap = ring.caps[ring.index[name]]
        for k in range(0, (zcap if zcap is not None else 8)):
            coeff = Fraction((-1) ** k, order * mu ** k) * (sign ** (k + 1))
            terms[ring.exps_of({name: k + 1, "t": k + 1})] = coeff
        return None, ring.from_terms(terms), 0
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# functions with symbolic unstable factors


@dataclass
class GWFunction:
    """sum over keys of (product of the rational factors named in the key) * series.

    Keys are sorted tuples of ("single", name) / ("pair", name1, name2)."""

    ring: SeriesRing
    parts: dict = field(default_factory=dict)

    def add(self, key: tuple, s: Series):
        if s.is_zero():
            return
        key = tuple(sorted(key))
        cur = self.parts.get(key)
        self.parts[key] = s if cur is None else cur + s
        if self.parts[key].is_zero():
            del self.parts[key]

    def regular(self) -> Series:
        """The part without rational factors."""
        return self.parts.get((), self.ring.zero())

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.parts.values())

    def __sub__(self, other: "GWFunction") -> "GWFunction":
        out = GWFunction(self.ring, dict(self.parts))
        for k, s in other.parts.items():
            out.add(k, -s)
        return out

    def pole_structure(self) -> list:
        return sorted(self.parts)

    def text(self) -> str:
        out = []
        for key, s in sorted(self.parts.items()):
            fac = "".join(f"[1/{k[1]}]" if k[0] == "single" else f"[{k[1]}*{k[2]}/({k[1]}+{k[2]})]" for k in key)
            out.append(f"{fac or '[1]'} * ({s!r})")
        return "\n".join(out) if out else "0"

    def to_json(self) -> dict:
        return {
            "variables": list(self.ring.names),
            "parts": [
                {"rational_factor": [list(k) for k in key], "series": s.to_json()}
                for key, s in sorted(self.parts.items())
            ],
        }


@dataclass(frozen=True)
class GWQuery:
    X: GerbeTarget
    d: int
    r_tuple: tuple = ()
    s_tuple: tuple = ()
    caps: GWCaps = GWCaps()
    first_index: int = 1

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("degree must be nonnegative")
        R, S = self.X.R, self.X.S
        object.__setattr__(self, "r_tuple", tuple(R.normalize(x) for x in self.r_tuple))
        object.__setattr__(self, "s_tuple", tuple(S.normalize(x) for x in self.s_tuple))

    def names(self):
        return mark_names(len(self.r_tuple), len(self.s_tuple), self.first_index)

    def ring(self) -> SeriesRing:
        zn, wn = self.names()
        return gw_ring(zn, wn, self.caps)


def _connected_blocks(P0, Pinf, nz: int, nw: int) -> bool:
    """Block graph connectivity: blocks over 0 and infinity joined by edges."""
    nodes = len(P0) + len(Pinf)
    parent = list(range(nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    where0, whereinf = {}, {}
    for bi, B in enumerate(P0):
        for p in B:
            if p >= nz:
                where0[p - nz] = bi
    for bi, B in enumerate(Pinf):
        for p in B:
            if p >= nw:
                whereinf[p - nw] = len(P0) + bi
    for e, b0 in where0.items():
        a, b = find(b0), find(whereinf[e])
        if a != b:
            parent[a] = b
    return len({find(x) for x in range(nodes)}) == 1


_BLOCK_CACHE: dict = {}


def _cached_block(block: Block, X: GerbeTarget, ring: SeriesRing, gmax: int):
    key = (block, X, ring, gmax)
    if key not in _BLOCK_CACHE:
        _BLOCK_CACHE[key] = block_series(block, X, ring, gmax)
    return _BLOCK_CACHE[key]


def _assemble(q: GWQuery, connected: bool) -> GWFunction:
    X, caps = q.X, q.caps
    K = X.K
    zn, wn = q.names()
    final = q.ring()
    marks0 = list(zip(zn, q.r_tuple))
    marksinf = list(zip(wn, q.s_tuple))
    nz, nw = len(marks0), len(marksinf)
    out = GWFunction(final)
    mubars = enumerate_labeled_partitions(q.d, K) if q.d else [KLabeledPartition()]
    work = gw_ring(zn, wn, caps, extra_u=None)
    for mubar in mubars:
        ell = mubar.length
        edges0, edgesinf = [], []
        for mu, k in mubar:
            rho, sigma = edge_monodromies(mu, k, X)
            edges0.append((mu, rho))
            edgesinf.append((mu, sigma))
        weight = Fraction(1, centralizer_order(mubar, K)) if ell else Fraction(1)
        pts0 = list(range(nz + ell))
        ptsinf = list(range(nw + ell))
        parts0 = list(_set_partitions(pts0))
        partsinf = list(_set_partitions(ptsinf))
        for P0 in parts0:
            for Pinf in partsinf:
                N = len(P0) + len(Pinf)
                if connected and not _connected_blocks(P0, Pinf, nz, nw):
                    continue
                if connected and ell == 0 and nz and nw:
                    continue
                budget = caps.ucap + 2 * N - 2 * ell
                if budget < 0:
                    continue
                gmax = budget // 2
                prod = {(): work.const(weight)}
                for side, P, marks, edges, nmk in (("0", P0, marks0, edges0, nz), ("inf", Pinf, marksinf, edgesinf, nw)):
                    for B in P:
                        blk = Block(side,
                                    tuple(marks[p] for p in B if p < nmk),
                                    tuple(edges[p - nmk] for p in B if p >= nmk))
                        prod = _multiply_parts(prod, _cached_block(blk, X, work, gmax))
                        if not prod:
                            break
                    if not prod:
                        break
                for key, s in prod.items():
                    out.add(key, s.change_ring(final))
    return out


def G_disconnected(q: GWQuery) -> GWFunction:
    """Disconnected degree-d function (all localization graphs, including
    degree-0 components)."""
    return _assemble(q, connected=False)


def G_connected(q: GWQuery) -> GWFunction:
    """Connected degree-d function: localization graphs with connected block graph."""
    return _assemble(q, connected=True)


def J_factor(tup, mubar: KLabeledPartition, X: GerbeTarget, side: str = "0", caps: GWCaps = GWCaps(),
             first_index: int = 1) -> GWFunction:
    """J_r(z, mubar, u, t) (side "0") or J_s(w, mubar, u, -t) (side "inf")."""
    G = X.side_group(side)
    tup = tuple(G.normalize(x) for x in tup)
    names = [f"{'z' if side == '0' else 'w'}{first_index + i}" for i in range(len(tup))]
    ring = gw_ring(names if side == "0" else [], names if side != "0" else [], caps)
    K = X.K
    edges = []
    for mu, k in mubar:
        rho, sigma = edge_monodromies(mu, k, X)
        edges.append((mu, rho if side == "0" else sigma))
    marks = list(zip(names, tup))
    n, ell = len(marks), len(edges)
    work = gw_ring(ring.names[:-2] if side == "0" else [], ring.names[:-2] if side != "0" else [],
                   caps, extra_u=None)
    out = GWFunction(ring)
    for P in _set_partitions(list(range(n + ell))):
        N = len(P)
        budget = caps.ucap + 2 * N - ell
        if budget < 0:
            continue
        gmax = budget // 2
        prod = {(): work.one()}
        for B in P:
            blk = Block(side, tuple(marks[p] for p in B if p < n), tuple(edges[p - n] for p in B if p >= n))
            prod = _multiply_parts(prod, _cached_block(blk, X, work, gmax))
            if not prod:
                break
        for key, s in prod.items():
            out.add(key, s.change_ring(ring))
    return out


# ---------------------------------------------------------------------------
# invariants


def positive_part(f: GWFunction, names: Sequence[str]) -> Series:
    """Terms with every listed variable at a positive power; rational
    factors never contribute (each of their terms has a nonpositive power)."""
    s = f.regular()
    idx = [s.ring.index[n] for n in names]
    return s.filter(lambda e: all(e[i] >= 1 for i in idx))


def gw_invariant(g: int, d: int, insertions: Sequence, X: GerbeTarget, connected: bool = False):
    """< prod tau_{k_i}(0_{r_i}) prod tau_{l_j}(inf_{s_j}) >_{g,d} as {t-exponent: value}.

    ``insertions`` lists (side, psi power, element) with side "0" or "inf"."""
    rt = [x for side, _, x in insertions if side == "0"]
    st = [x for side, _, x in insertions if side != "0"]
    ks = [k for side, k, _ in insertions if side == "0"]
    ls = [k for side, k, _ in insertions if side != "0"]
    zcap = max([k + 1 for k in ks + ls] + [1])
    q = GWQuery(X, d, tuple(rt), tuple(st), GWCaps(ucap=2 * g - 2, zcap=zcap))
    f = G_connected(q) if connected else G_disconnected(q)
    zn, wn = q.names()
    s = positive_part(f, zn + wn)
    want = {n: k + 1 for n, k in zip(zn, ks)}
    want.update({n: l + 1 for n, l in zip(wn, ls)})
    want["u"] = 2 * g - 2
    out = {}
    ti = s.ring.index["t"]
    for e, c in s.terms.items():
        if all(e[s.ring.index[n]] == p for n, p in want.items()):
            out[int(e[ti])] = out.get(int(e[ti]), 0) + c
    return {k: v for k, v in sorted(out.items()) if v}


# ---------------------------------------------------------------------------
# divisor equation


@dataclass
class SuiteReport:
    suite: str
    target: dict
    caps: dict
    passed: bool
    compared: int = 0
    first_failure: dict | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"suite": self.suite, "target": self.target, "caps": self.caps, "pass": self.passed,
               "compared": self.compared}
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure
        out.update(self.details)
        return out


def divisor_residual(d: int, r_tuple, s_tuple, X: GerbeTarget, caps: GWCaps = GWCaps(ucap=2, zcap=2),
                     constant: Fraction = Fraction(-1, 24)) -> GWFunction:
    """[z_0^1] G_{d, (0)+r, s} - (d + constant + t sum z_i) G_{d, r, s}.

    ``constant`` is -1/24 in the identity; other values are negative controls."""
    R = X.R
    tilde = GWQuery(X, d, ((0, X.K.zero),) + tuple(r_tuple), tuple(s_tuple), caps, first_index=0)
    base = GWQuery(X, d, tuple(r_tuple), tuple(s_tuple), caps, first_index=1)
    Gt = G_disconnected(tilde)
    Gb = G_disconnected(base)
    ring = base.ring()
    lhs = _coefficient_at_one(Gt, "z0", ring)
    rhs = _times_mark_sum(Gb, base.names()[0], ring.var("t"))
    for key, s in Gb.parts.items():
        rhs.add(key, s.scale(Fraction(d) + constant))
    return lhs - rhs


def _coefficient_at_one(G: GWFunction, name: str, ring: SeriesRing) -> GWFunction:
    """[name^1] of a function with an extra marked variable ``name``: a single
    1/name drops out, a pair name*v/(name + v) contributes 1."""
    out = GWFunction(ring)
    for key, s in G.parts.items():
        if ("single", name) in key:
            continue
        pair = next((k for k in key if k[0] == "pair" and name in k[1:]), None)
        if pair is not None:
            out.add(tuple(k for k in key if k != pair), s.change_ring(ring))
            continue
        i0 = s.ring.index[name]
        sub = Series(s.ring, {e[:i0] + (0,) + e[i0 + 1:]: c for e, c in s.terms.items() if e[i0] == 1})
        out.add(key, _drop_var(sub, name, ring))
    return out


def _times_mark_sum(G: GWFunction, names: Sequence[str], scale) -> GWFunction:
    """scale * (sum of the named variables) * G, cancelling a single 1/v
    against v and a pair v1 v2/(v1 + v2) against v1 + v2."""
    ring = G.ring
    out = GWFunction(ring)
    for key, s in G.parts.items():
        singles = {k[1] for k in key if k[0] == "single"}
        paired = {}
        for k in key:
            if k[0] == "pair":
                paired[k[1]] = k
                paired[k[2]] = k
        done = set()
        for v in names:
            if v in singles:
                out.add(tuple(k for k in key if k != ("single", v)), s * scale)
            elif v in paired:
                k = paired[v]
                if k in done:
                    continue
                done.add(k)
                out.add(tuple(kk for kk in key if kk != k), s * scale * ring.var(k[1]) * ring.var(k[2]))
            else:
                out.add(key, s * scale * ring.var(v))
    return out


def string_residual(d: int, r_tuple, s_tuple, X: GerbeTarget, caps: GWCaps = GWCaps(ucap=2, zcap=2)) -> GWFunction:
    """Unit insertion by direct differentiation against the string equation:

        ([z_0^1] G_{d,(0)+r,s} - [w_0^1] G_{d,r,(0)+s}) / t - (sum z_i + sum w_j) G_{d,r,s},

    the unit class being (0 - infinity)/t in the point classes of the two
    untwisted sectors.  This is the first-order form of the e^{u d} shift."""
    r_tuple, s_tuple = tuple(r_tuple), tuple(s_tuple)
    at0 = GWQuery(X, d, ((0, X.K.zero),) + r_tuple, s_tuple, caps, first_index=0)
    base = GWQuery(X, d, r_tuple, s_tuple, caps, first_index=1)
    ring = base.ring()
    # the infinity mark is named w{m+1}; rename it to stay clear of w1..wm
    atinf = GWQuery(X, d, r_tuple, s_tuple + ((0, X.K.zero),), caps, first_index=1)
    wlast = atinf.names()[1][-1]
    lhs0 = _coefficient_at_one(G_disconnected(at0), "z0", ring)
    lhsinf = _coefficient_at_one(G_disconnected(atinf), wlast, ring)
    diff = lhs0 - lhsinf
    tinv = ring.monomial({"t": -1})
    lhs = GWFunction(ring)
    for key, s in diff.parts.items():
        lhs.add(key, s * tinv)
    zn, wn = base.names()
    rhs = _times_mark_sum(G_disconnected(base), list(zn) + list(wn), ring.one())
    return lhs - rhs


def string_check(X: GerbeTarget, dmax: int = 1, caps: GWCaps = GWCaps(ucap=0, zcap=2),
                 tuples: Iterable | None = None) -> SuiteReport:
    """:func:`string_residual` over degrees <= dmax and small tuples."""
    if tuples is None:
        tuples = default_divisor_tuples(X)
    compared = 0
    for d in range(dmax + 1):
        for rt, st in tuples:
            res = string_residual(d, rt, st, X, caps)
            compared += 1
            if not res.is_zero():
                key, s = next(iter(sorted(res.parts.items())))
                e, c = s.sorted_items()[0]
                fail = {"d": d, "r": list(map(_json_elem, rt)), "s": list(map(_json_elem, st)),
                        "rational_factor": [list(k) for k in key],
                        "monomial": {n: str(p) for n, p in zip(s.ring.names, e) if p}, "residual": str(c)}
                return SuiteReport("string", X.describe(), {"dmax": dmax, **caps.__dict__}, False, compared, fail)
    return SuiteReport("string", X.describe(), {"dmax": dmax, **caps.__dict__}, True, compared)


def _drop_var(s: Series, name: str, ring: SeriesRing) -> Series:
    i = s.ring.index[name]
    terms = {}
    for e, c in s.terms.items():
        mapping = {n: p for j, (n, p) in enumerate(zip(s.ring.names, e)) if j != i and p}
        terms[ring.exps_of(mapping)] = terms.get(ring.exps_of(mapping), 0) + c
    return ring.from_terms(terms)


def _function_size(f: GWFunction) -> int:
    return sum(len(s.terms) for s in f.parts.values())


def divisor_check(X: GerbeTarget, dmax: int = 2, caps: GWCaps = GWCaps(ucap=2, zcap=2),
                  tuples: Iterable | None = None, constant: Fraction = Fraction(-1, 24)) -> SuiteReport:
    """Divisor identity for every degree <= dmax and every (r, s) in ``tuples``
    (default: a few small tuples of each target)."""
    if tuples is None:
        tuples = default_divisor_tuples(X)
    compared = 0
    for d in range(dmax + 1):
        for rt, st in tuples:
            res = divisor_residual(d, rt, st, X, caps, constant)
            tilde = GWQuery(X, d, ((0, X.K.zero),) + tuple(rt), tuple(st), caps, first_index=0)
            compared += _function_size(G_disconnected(tilde))
            if not res.is_zero():
                key, s = next(iter(sorted(res.parts.items())))
                e, c = s.sorted_items()[0]
                fail = {"d": d, "r": list(map(_json_elem, rt)), "s": list(map(_json_elem, st)),
                        "rational_factor": [list(k) for k in key],
                        "monomial": {n: str(p) for n, p in zip(s.ring.names, e) if p}, "residual": str(c)}
                return SuiteReport("divisor", X.describe(), {"dmax": dmax, **caps.__dict__}, False, compared, fail)
    return SuiteReport("divisor", X.describe(), {"dmax": dmax, **caps.__dict__}, True, compared)


def _json_elem(x):
    a, k = x
    return f"{a}:{'.'.join(map(str, k))}" if k else str(a)


def default_divisor_tuples(X: GerbeTarget) -> list:
    R, S = X.R, X.S
    z0, w0 = R.zero, S.zero
    out = [((), ()), ((z0,), ()), ((), (w0,)), ((z0,), (w0,))]
    if X.r > 1:
        out.append((((1, X.K.zero),), ()))
        out.append((((1, X.K.zero), R.neg((1, X.K.zero))), ()))
    if X.s > 1:
        out.append(((), ((1, X.K.zero),)))
    if X.K.order > 1:
        k1 = X.K.elements()[1]
        out.append((((0, k1),), ((0, k1),)))
    return out


# ---------------------------------------------------------------------------
# generating functions in the x variables


def x_name(side: str, k: int, elem, G: CocycleExtension) -> str:
    a, lab = elem
    base = f"{a}/{G.r}" + (f":{format_label(lab)}" if lab else "")
    return f"{'x' if side == '0' else 'X'}{k}[{base}]"


@dataclass(frozen=True)
class PotentialCaps:
    """Insertions per side <= ``marks``, psi powers <= ``kmax``, degree <= ``dmax``,
    u-powers <= ``ucap``."""

    dmax: int = 2
    marks: int = 2
    kmax: int = 1
    ucap: int = 0


def potential_ring(X: GerbeTarget, pc: PotentialCaps, extra_marks: int = 0, extra_u: int = 0) -> SeriesRing:
    names, w0, winf = [], {}, {}
    for side, G, w in (("0", X.R, w0), ("inf", X.S, winf)):
        for k in range(pc.kmax + 1):
            for e in G.elements():
                n = x_name(side, k, e, G)
                names.append(n)
                w[n] = 1
    names += ["q", "u", "t"]
    return SeriesRing(names, {"q": pc.dmax, "u": pc.ucap + extra_u},
                      [(w0, pc.marks + extra_marks), (winf, pc.marks + extra_marks)])


def _multisets(G: CocycleExtension, size: int):
    return list(combinations_with_replacement(G.elements(), size))


def _aut(ms) -> int:
    out = 1
    for e in set(ms):
        out *= factorial(ms.count(e))
    return out


def _exp_shift(ring: SeriesRing, names: Sequence[str], sign: int) -> Series:
    """exp(sign * u * sum of the named variables), truncated by the ring."""
    arg = ring.zero()
    for n in names:
        arg = arg + ring.var(n) * ring.var("u", 1, sign)
    return arg.exp() if names else ring.one()


def _unstable_shift(key: tuple, ring: SeriesRing, sign: int) -> Series:
    """Positive part of exp(sign u sum z) times the rational factors in ``key``."""
    out = ring.one()
    zcap = max(ring.caps[ring.index[n]] for k in key for n in k[1:])
    for k in key:
        if k[0] == "single":
            z = k[1]
            # e^{s u z}/z -> sum_{n>=2} (s u)^n z^{n-1}/n!
            terms = {}
            for n in range(2, zcap + 2):
                terms[ring.exps_of({z: n - 1, "u": n})] = Fraction(sign ** n, factorial(n))
            out = out * ring.from_terms(terms)
        else:
            z1, z2 = k[1], k[2]
            # z1 z2 e^{s u (z1+z2)}/(z1+z2) -> z1 z2 sum_{n>=1} (s u)^n (z1+z2)^{n-1}/n!
            acc = ring.zero()
            zsum = ring.var(z1) + ring.var(z2)
            pw = ring.one()
            for n in range(1, 2 * zcap + 1):
                acc = acc + pw.scale(Fraction(sign ** n, factorial(n))) * ring.var("u", n)
                pw = pw * zsum
            out = out * acc * ring.var(z1) * ring.var(z2)
    return out


def connected_potential(X: GerbeTarget, pc: PotentialCaps, shift: int = 0, extra_marks: int = 0,
                        must_contain: tuple = (), extra_u: int = 0) -> Series:
    """Connected potential F = sum_{g,d} u^{2g-2} q^d <exp(sum x tau)>_{g,d}
    (configurations with at least one insertion), or its string-shifted
    version e^{shift u d}F when ``shift`` is +1 or -1.

    Configurations with more than ``pc.marks`` insertions on a side are only
    included when they contain every (side, element) in ``must_contain``."""
    ring = potential_ring(X, pc, extra_marks, extra_u)
    out = ring.zero()
    caps = GWCaps(ucap=pc.ucap, zcap=pc.kmax + 1)
    limit = pc.marks + extra_marks
    for n0 in range(limit + 1):
        for ninf in range(limit + 1):
            if n0 + ninf == 0:
                continue
            for ms0 in _multisets(X.R, n0):
                for msinf in _multisets(X.S, ninf):
                    if n0 > pc.marks or ninf > pc.marks:
                        ok = all((e in ms0) if side == "0" else (e in msinf) for side, e in must_contain)
                        if not ok or n0 > limit or ninf > limit:
                            continue
                    weight = Fraction(1, _aut(ms0) * _aut(msinf))
                    for d in range(pc.dmax + 1):
                        q = GWQuery(X, d, ms0, msinf, caps)
                        f = G_connected(q)
                        if f.is_zero():
                            continue
                        out = out + _to_x(f, q, ring, weight, d, shift, pc)
    return out


def _to_x(f: GWFunction, q: GWQuery, ring: SeriesRing, weight: Fraction, d: int, shift: int,
          pc: PotentialCaps) -> Series:
    zn, wn = q.names()
    allnames = zn + wn
    src = f.ring
    # work ring: u uncapped, since the unstable pieces carry negative powers
    # of u; the target ring truncates at the end
    work = gw_ring(zn, wn, GWCaps(ucap=pc.ucap, zcap=pc.kmax + 1), extra_u=None)
    total = work.zero()
    for key, s in f.parts.items():
        if key and not shift:
            continue
        s = s.change_ring(work)
        if shift:
            free = [n for n in allnames if not any(n in k[1:] for k in key)]
            s = s * _exp_shift(work, free, shift)
            if key:
                s = s * _unstable_shift(key, work, shift)
        total = total + s
    idx = [work.index[n] for n in allnames]
    elems = [(("0", e, n) if n.startswith("z") else ("inf", e, n))
             for n, e in zip(allnames, list(q.r_tuple) + list(q.s_tuple))]
    terms = {}
    for e, c in total.terms.items():
        if not all(e[i] >= 1 for i in idx):
            continue
        mon = {"q": d, "u": e[work.index["u"]], "t": e[work.index["t"]]}
        ok = True
        for (side, el, n), i in zip(elems, idx):
            k = e[i] - 1
            if k > pc.kmax:
                ok = False
                break
            G = q.X.R if side == "0" else q.X.S
            xn = x_name(side, k, el, G)
            mon[xn] = mon.get(xn, 0) + 1
        if not ok:
            continue
        ex = ring.exps_of(mon)
        terms[ex] = terms.get(ex, 0) + c * weight
    return ring.from_terms(terms)


# ---------------------------------------------------------------------------
# lowest GW 2-Toda equation


def operator_normalize(F: Series, X: GerbeTarget) -> Series:
    """Rescale x_k(a/r) -> t^{a/r} x_k(a/r) and X_k(b/s) -> t^{b/s} X_k(b/s):
    the variables in which insertions match the operators whose lowest
    coefficient is t^{a/r} alpha/u."""
    ring = F.ring
    ti = ring.index["t"]
    weight = {}
    for i, n in enumerate(ring.names):
        if n[0] in "xX" and "[" in n:
            num, den = n[n.index("[") + 1:].split(":")[0].rstrip("]").split("/")
            weight[i] = Fraction(int(num), int(den))
    terms = {}
    for e, c in F.terms.items():
        w = sum((weight[i] * e[i] for i in weight), Fraction(0))
        e2 = list(e)
        e2[ti] = e[ti] + w
        e2[ti] = int(e2[ti]) if e2[ti].denominator == 1 else e2[ti]
        terms[tuple(e2)] = c
    return Series(ring, terms)


def gw_toda_residual(X: GerbeTarget, pc: PotentialCaps = PotentialCaps(), normalization: str = "operator",
                     prefactor_t: Fraction | None = None) -> tuple[Series, Series, Series]:
    """(residual, lhs, rhs) of the lowest GW 2-Toda equation

        d^2/dx0(1/r) dX0(1/s) log tau = q t^c u^{-2} e^{u d}tau e^{-u d}tau / tau^2,

    e^{+-u d} applied through the string equation, both sides restricted to at
    most ``pc.marks`` insertions per side and u-powers <= pc.ucap.

    ``normalization="operator"`` uses the variables of :func:`operator_normalize`
    with c = 1/r + 1/s; ``"geometric"`` uses the insertion variables as they
    are, where the same equation holds with c = 0.  ``prefactor_t`` overrides c
    (negative controls)."""
    if X.r < 2 or X.s < 2:
        raise ValueError("the lowest GW 2-Toda equation is stated for r, s > 1")
    if normalization not in ("operator", "geometric"):
        raise ValueError(f"unknown normalization {normalization!r}")
    R, S = X.R, X.S
    a0 = (1, X.K.zero)
    xr = x_name("0", 0, a0, R)
    xs = x_name("inf", 0, (1, X.K.zero), S)
    final = potential_ring(X, pc)
    F_big = connected_potential(X, pc, extra_marks=1, must_contain=(("0", a0), ("inf", (1, X.K.zero))))
    F = connected_potential(X, pc, extra_u=2)
    Fp = connected_potential(X, pc, shift=1, extra_u=2)
    Fm = connected_potential(X, pc, shift=-1, extra_u=2)
    if normalization == "operator":
        F_big, F, Fp, Fm = (operator_normalize(f, X) for f in (F_big, F, Fp, Fm))
        c = Fraction(1, X.r) + Fraction(1, X.s)
    else:
        c = Fraction(0)
    if prefactor_t is not None:
        c = Fraction(prefactor_t)
    c = int(c) if c.denominator == 1 else c
    lhs = F_big.diff(xr).diff(xs).change_ring(final)
    E = Fp + Fm - F - F
    pref = E.ring.monomial({"q": 1, "u": -2, "t": c})
    rhs = (pref * E.exp()).change_ring(final)
    return lhs - rhs, lhs, rhs


def gw_toda_check(X: GerbeTarget, pc: PotentialCaps = PotentialCaps(), normalization: str = "operator",
                  prefactor_t: Fraction | None = None) -> SuiteReport:
    res, lhs, rhs = gw_toda_residual(X, pc, normalization, prefactor_t)
    compared = len(set(lhs.terms) | set(rhs.terms))
    caps = dict(pc.__dict__, normalization=normalization)
    rep = SuiteReport("gw-toda", X.describe(), caps, res.is_zero(), compared)
    if not res.is_zero():
        e, c = res.sorted_items()[0]
        rep.first_failure = {"monomial": {n: str(p) for n, p in zip(res.ring.names, e) if p},
                             "lhs": str(lhs.terms.get(e, 0)), "rhs": str(rhs.terms.get(e, 0))}
    return rep


# ---------------------------------------------------------------------------
# decomposition


def decomposition_sides(X: GerbeTarget, pc: PotentialCaps = PotentialCaps(), phase_twist: dict | None = None):
    """(F_X in character variables, sum over characters of the rescaled
    potentials of the effective target).

    Character variables: y_k(a/r, gamma) = sum_c gamma(-c) x_k(a/r, c) over 0
    and Y_k(b/s, gamma) = sum_c gamma(c) X_k(b/s, c) over infinity.  The factor
    for gamma is the K-trivial potential with q -> q gamma(k0)^{1/r}
    gamma(kinf)^{1/s} gamma(L), x_k(a/r) -> gamma(-k0)^{a/r} y_k(a/r, gamma),
    X_k(b/s) -> conj(gamma(-kinf)^{b/s}) Y_k(b/s, gamma) and u -> |K| u.
    ``phase_twist`` multiplies the q-phase of chosen characters (negative
    controls)."""
    K = X.K
    R, S = X.R, X.S
    eff = GerbeTarget(X.r, X.s)
    FX = connected_potential(X, pc)
    Feff = connected_potential(eff, pc)
    # character-variable ring
    names, w0, winf = [], {}, {}
    chars = K.characters()
    for side, G, w, letter in (("0", R, w0, "y"), ("inf", S, winf, "Y")):
        for k in range(pc.kmax + 1):
            for a in range(G.r):
                for gamma in chars:
                    n = f"{letter}{k}[{a}/{G.r}:{format_label(gamma) if gamma else ''}]"
                    names.append(n)
                    w[n] = 1
    names += ["q", "u", "t"]
    yring = SeriesRing(names, {"q": pc.dmax, "u": pc.ucap}, [(w0, pc.marks), (winf, pc.marks)])

    def yname(side, k, a, gamma):
        G = R if side == "0" else S
        return f"{'y' if side == '0' else 'Y'}{k}[{a}/{G.r}:{format_label(gamma) if gamma else ''}]"

    # x(c) = (1/|K|) sum_gamma gamma(c) y(gamma)  [0 side];  X(c) = (1/|K|) sum_gamma gamma(-c) Y(gamma)
    mapping = {}
    for side, G in (("0", R), ("inf", S)):
        for k in range(pc.kmax + 1):
            for a in range(G.r):
                for c in K.elements():
                    xn = x_name(side, k, (a, c), G)
                    mapping[xn] = {
                        yname(side, k, a, gamma): K.character_value(gamma, c if side == "0" else K.neg(c))
                        * Fraction(1, K.order)
                        for gamma in chars
                    }
    lhs = FX.linear_substitute(yring, mapping)
    rhs = yring.zero()
    for gamma in chars:
        qphase = (character_root(gamma, X.k0, K, X.r) * character_root(gamma, X.kinf, K, X.s)
                  * K.character_value(gamma, X.L))
        if phase_twist and gamma in phase_twist:
            qphase = qphase * phase_twist[gamma]
        emap = {}
        for side, G, GE, kk in (("0", R, eff.R, X.k0), ("inf", S, eff.S, X.kinf)):
            for k in range(pc.kmax + 1):
                for a in range(G.r):
                    ph = character_root(gamma, K.neg(kk), K, G.r, a)
                    if side != "0":
                        ph = conj(ph)
                    emap[x_name(side, k, (a, ()), GE)] = {yname(side, k, a, gamma): ph}
        part = Feff.linear_substitute(yring, emap)
        # q -> qphase q, u -> |K| u
        iq, iu = yring.index["q"], yring.index["u"]
        terms = {}
        for e, c in part.terms.items():
            terms[e] = c * qphase ** e[iq] * Fraction(K.order) ** e[iu]
        rhs = rhs + yring.from_terms(terms)
    return lhs, rhs


def decomposition_check(X: GerbeTarget, pc: PotentialCaps = PotentialCaps(dmax=2, marks=2, kmax=1, ucap=0),
                        phase_twist: dict | None = None) -> SuiteReport:
    """Compare the potentials (and the tau functions exp F) coefficientwise."""
    lhs, rhs = decomposition_sides(X, pc, phase_twist)
    diff = lhs - rhs
    compared = len(set(lhs.terms) | set(rhs.terms))
    rep = SuiteReport("decomposition", X.describe(), pc.__dict__, diff.is_zero(), compared)
    if diff.is_zero():
        tl, tr = lhs.exp(), rhs.exp()
        if not (tl - tr).is_zero():
            rep.passed = False
            diff = tl - tr
    if not rep.passed:
        e, c = diff.sorted_items()[0]
        rep.first_failure = {"monomial": {n: str(p) for n, p in zip(diff.ring.names, e) if p},
                             "lhs": str(lhs.terms.get(e, 0)), "rhs": str(rhs.terms.get(e, 0))}
    return rep


# ---------------------------------------------------------------------------
# unstable vertex contributions


def vertex_ring(names: Sequence[str], zcap: int) -> SeriesRing:
    return SeriesRing(list(names) + ["t"], {n: zcap for n in names})


def scheme_vertex(block: Block, X: GerbeTarget, zcap: int = 6) -> Series:
    """Genus-0 vertex of the localization scheme with the u-powers stripped
    and the edge factors (d/t)^floor(d/r)/floor(d/r)! divided out, as a
    series in the marked variables and t."""
    G = X.side_group(block.side)
    names = [n for n, _ in block.marks]
    work = gw_ring(names, [], GWCaps(ucap=0, zcap=zcap), extra_u=None)
    parts = block_series(block, X, work, 0)
    if any(k is not None for k in parts):
        raise ValueError("vertex with a rational factor")
    s = parts.get(None, work.zero())
    ring = vertex_ring(names, zcap)
    out = _drop_var(s, "u", ring)
    for mu, _ in block.edges:
        f = mu // G.r
        out = out * ring.monomial({"t": f}, Fraction(factorial(f), mu ** f))
    return out


def actual_vertex(block: Block, X: GerbeTarget, zcap: int = 6) -> Series:
    """The same vertex from the geometry of the fixed curve:

    * one edge of degree d: the tangent weight t/d at the end of the edge;
    * one edge and one marked point: z ev^*/(1 - z psi) with ev^* = t^[r in K]
      and psi = -t/d;
    * two edges meeting at a node with monodromy rho: the gluing factor
      |R|/|rho|, node smoothing |rho| d1 d2/(t (d1 + d2)) and the flag term
      (t/r)^(1 - <d1/r> - <d2/r>)."""
    G = X.side_group(block.side)
    names = [n for n, _ in block.marks]
    ring = vertex_ring(names, zcap)
    r = G.r
    elems = [e for _, e in block.marks] + [e for _, e in block.edges]
    if not G.is_balanced(elems):
        return ring.zero()
    if len(block.edges) == 1 and not block.marks:
        return ring.monomial({"t": 1}, Fraction(1, block.edges[0][0]))
    if len(block.edges) == 1 and len(block.marks) == 1:
        (name, elem), = block.marks
        d = block.edges[0][0]
        ev = 1 if G.in_K(elem) else 0
        return ring.from_terms({ring.exps_of({name: k + 1, "t": k + ev}): Fraction((-1) ** k, d ** k)
                                for k in range(zcap)})
    if len(block.edges) == 2 and not block.marks:
        (d1, rho1), (d2, _) = block.edges
        o = element_order(rho1, G)
        flag = 1 - frac_part(d1, r) - frac_part(d2, r)
        if flag.denominator != 1:
            raise ArithmeticError("non-integral flag exponent")
        gluing = Fraction(G.order, o) * Fraction(o * d1 * d2, d1 + d2)
        return ring.monomial({"t": int(flag) - 1}, gluing * Fraction(1, r) ** int(flag))
    raise ValueError("not one of the unstable vertex types")


def element_order(x, G: CocycleExtension) -> int:
    n, acc = 1, G.normalize(x)
    while acc != G.zero:
        acc = G.add(acc, x)
        n += 1
    return n


def unstable_vertex_cases(X: GerbeTarget, dmax: int = 4) -> list[Block]:
    """All balanced unstable vertices over 0 with edges of degree <= dmax."""
    R, K = X.R, X.K
    out = []
    for d in range(1, dmax + 1):
        for k in K.elements():
            rho, _ = edge_monodromies(d, k, X)
            if rho == R.zero:
                out.append(Block("0", (), ((d, rho),)))
            out.append(Block("0", (("z1", R.neg(rho)),), ((d, rho),)))
            for d2 in range(d, dmax + 1):
                for k2 in K.elements():
                    rho2, _ = edge_monodromies(d2, k2, X)
                    if R.is_balanced([rho, rho2]):
                        out.append(Block("0", (), ((d, rho), (d2, rho2))))
    return out


def vertex_check(X: GerbeTarget, dmax: int = 4, zcap: int = 6) -> SuiteReport:
    """Scheme vertices against the actual-curve values, exactly."""
    compared = 0
    for blk in unstable_vertex_cases(X, dmax):
        a, b = scheme_vertex(blk, X, zcap), actual_vertex(blk, X, zcap)
        compared += 1
        if not (a - b).is_zero():
            fail = {"vertex": {"marks": [_json_elem(e) for _, e in blk.marks],
                               "edges": [[d, _json_elem(e)] for d, e in blk.edges]},
                    "scheme": repr(a), "actual": repr(b)}
            return SuiteReport("unstable-vertices", X.describe(), {"dmax": dmax, "zcap": zcap}, False, compared, fail)
    return SuiteReport("unstable-vertices", X.describe(), {"dmax": dmax, "zcap": zcap}, True, compared)
