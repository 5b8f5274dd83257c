"""Exact scalars and truncated multivariate series.

Two building blocks live here:

* :class:`Cyc` -- an element of the cyclotomic field Q(zeta_m), stored in the
  power basis 1, zeta, ..., zeta^(phi(m)-1) after reduction modulo the m-th
  cyclotomic polynomial.  Arithmetic results that happen to be rational are
  demoted to :class:`fractions.Fraction`, so "scalar" throughout the package
  means ``Fraction | Cyc``.
* :class:`SeriesRing` / :class:`Series` -- sparse multivariate series with
  per-variable degree caps and optional weighted total-degree caps.  Exponents
  may be negative (Laurent variables) or rational (the equivariant parameter).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[Fraction, "Cyc"]


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# cyclotomic polynomials and the reduction table


def _exact_div(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Divide integer polynomials (low degree first); ``den`` must be monic."""
    num = list(num)
    n, k = len(num), len(den)
    out = [0] * (n - k + 1)
    for i in range(n - k, -1, -1):
        c = num[i + k - 1]
        out[i] = c
        if c:
            for j, dc in enumerate(den):
                num[i + j] -= c * dc
    if any(num[: k - 1]):
        raise ArithmeticError("polynomial division left a remainder")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _exact_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds the power-basis coordinates of zeta_m^k, 0 <= k < m."""
    phi_poly = cyclotomic_polynomial(m)
    phi = len(phi_poly) - 1
    cur = [1] + [0] * (phi - 1)
    rows = []
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * phi_poly[j]
    return tuple(rows)


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _reduce(m: int, raw: Mapping[int, Fraction] | Sequence) -> list[Fraction]:
    """Reduce a sparse exponent->coefficient map (or dense list) into the basis."""
    table = _power_table(m)
    phi = len(table[0])
    out = [Fraction(0)] * phi
    items = raw.items() if isinstance(raw, Mapping) else enumerate(raw)
    for k, c in items:
        if not c:
            continue
        row = table[k % m]
        for j, e in enumerate(row):
            if e:
                out[j] += c * e
    return out


def _wrap(m: int, vec: list[Fraction]) -> Scalar:
    if all(not x for x in vec[1:]):
        return vec[0]
    return Cyc._raw(m, tuple(vec))


class Cyc:
    """Element of Q(zeta_m) that is not rational (rationals are Fractions)."""

    __slots__ = ("m", "c")

    def __init__(self, m: int, coeffs: Sequence):
        vec = _reduce(m, [Fraction(x) for x in coeffs])
        if all(not x for x in vec[1:]):
            raise ValueError("rational value; use cyc_normalize to obtain a Fraction")
        self.m = m
        self.c = tuple(vec)

    @classmethod
    def _raw(cls, m: int, vec: tuple) -> "Cyc":
        obj = object.__new__(cls)
        obj.m = m
        obj.c = vec
        return obj

    # -- coercion helpers -------------------------------------------------
    def _lift(self, big: int) -> list[Fraction]:
        if big == self.m:
            return list(self.c)
        step = big // self.m
        return _reduce(big, {j * step: c for j, c in enumerate(self.c) if c})

    @staticmethod
    def _pair(a, b):
        """Bring two scalars to a common conductor; returns (m, va, vb)."""
        ma = a.m if isinstance(a, Cyc) else 1
        mb = b.m if isinstance(b, Cyc) else 1
        m = lcm(ma, mb)
        phi = euler_phi(m)

        def vec(x):
            if isinstance(x, Cyc):
                return x._lift(m)
            return [Fraction(x)] + [Fraction(0)] * (phi - 1)

        return m, vec(a), vec(b)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (Cyc, Fraction, int)):
            return NotImplemented
        m, va, vb = Cyc._pair(self, other)
        return _wrap(m, [x + y for x, y in zip(va, vb)])

    __radd__ = __add__

    def __neg__(self):
        return Cyc._raw(self.m, tuple(-x for x in self.c))

    def __sub__(self, other):
        if not isinstance(other, (Cyc, Fraction, int)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Fraction, int)):
            if not other:
                return Fraction(0)
            return Cyc._raw(self.m, tuple(x * other for x in self.c))
        if not isinstance(other, Cyc):
            return NotImplemented
        m, va, vb = Cyc._pair(self, other)
        prod: dict[int, Fraction] = {}
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    if y:
                        prod[i + j] = prod.get(i + j, 0) + x * y
        return _wrap(m, _reduce(m, prod))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        m, phi = self.m, len(self.c)
        # columns: self * zeta^j ; solve sum_j x_j col_j = 1
        cols = []
        for j in range(phi):
            cols.append(_reduce(m, {i + j: c for i, c in enumerate(self.c) if c}))
        mat = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
        sol = solve_linear(mat)
        return _wrap(m, sol)

    def __truediv__(self, other):
        if isinstance(other, (Fraction, int)):
            return self * (Fraction(1) / other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> Scalar:
        m = self.m
        return _wrap(m, _reduce(m, {(-j) % m: c for j, c in enumerate(self.c) if c}))

    # -- comparison / display --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (Fraction, int)):
            return False
        if not isinstance(other, Cyc):
            return NotImplemented
        if self.m == other.m:
            return self.c == other.c
        _, va, vb = Cyc._pair(self, other)
        return va == vb

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self):
        return True

    def __repr__(self):
        parts = []
        for j, c in enumerate(self.c):
            if not c:
                continue
            mon = "1" if j == 0 else (f"z{self.m}" if j == 1 else f"z{self.m}^{j}")
            parts.append(f"({c})*{mon}" if mon != "1" else f"({c})")
        return " + ".join(parts)

    def to_json(self):
        return {"m": self.m, "coeffs": [str(x) for x in self.c]}


def cyc_normalize(conductor: int, raw_coeffs: Sequence) -> Scalar:
    """Canonical representative of sum_j raw_coeffs[j] * zeta_conductor^j."""
    return _wrap(conductor, _reduce(conductor, [Fraction(x) for x in raw_coeffs]))


def root_of_unity(m: int, k: int = 1) -> Scalar:
    """zeta_m^k with zeta_m = exp(2 pi i / m)."""
    k %= m
    raw = [0] * m
    raw[k] = 1
    return cyc_normalize(m, raw)


def conj(x: Scalar) -> Scalar:
    return x.conjugate() if isinstance(x, Cyc) else x


def is_rational(x) -> bool:
    return not isinstance(x, Cyc)


def as_fraction(x) -> Fraction:
    if isinstance(x, Cyc):
        raise ArithmeticError(f"expected a rational value, got {x!r}")
    return Fraction(x)


def scalar_to_json(x):
    if isinstance(x, Cyc):
        return x.to_json()
    return str(Fraction(x))


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, dict):
        return cyc_normalize(obj["m"], [Fraction(c) for c in obj["coeffs"]])
    return Fraction(obj)


def solve_linear(aug: list[list]) -> list:
    """Solve a square system given as an augmented matrix (exact Gauss-Jordan).

    Entries may be any field scalars supporting +, *, / and truthiness.
    Raises ``ArithmeticError`` if the matrix is singular.
    """
    n = len(aug)
    rows = [list(r) for r in aug]
    for col in range(n):
        piv = next((i for i in range(col, n) if rows[i][col]), None)
        if piv is None:
            raise ArithmeticError("singular linear system")
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        inv = Fraction(1) / p if not isinstance(p, Cyc) else p.inverse()
        rows[col] = [x * inv for x in rows[col]]
        for i in range(n):
            if i != col and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return [rows[i][n] for i in range(n)]


def solve_least_rows(aug: list[list], nvars: int) -> list:
    """Solve an overdetermined-but-consistent system by elimination.

    ``aug`` has any number of rows of length ``nvars + 1``.  The system must
    have full column rank; inconsistent rows raise ``ArithmeticError``.
    """
    rows = [list(r) for r in aug]
    pivots = []
    r = 0
    for col in range(nvars):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            raise ArithmeticError("system does not determine all unknowns")
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        inv = Fraction(1) / p if not isinstance(p, Cyc) else p.inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][nvars]:
            raise ArithmeticError("inconsistent linear system")
    return [rows[i][nvars] for i in range(nvars)]


# ---------------------------------------------------------------------------
# truncated series


def _coerce(c) -> Scalar:
    if isinstance(c, (Fraction, Cyc)):
        return c
    return Fraction(c)


class SeriesRing:
    """Ambient ring for :class:`Series`: variable names and truncation rules.

    ``caps`` maps a variable to its maximal exponent.  ``weighted`` is a list of
    ``(weights, cap)`` pairs: a monomial is kept only if its weighted degree
    is at most ``cap`` for every pair.  Variables without a cap may carry
    negative or fractional exponents.
    """

    def __init__(self, names: Iterable[str], caps: Mapping[str, int] | None = None,
                 weighted: Iterable[tuple[Mapping[str, int], int]] | None = None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.index = {n: i for i, n in enumerate(self.names)}
        caps = dict(caps or {})
        for n in caps:
            if n not in self.index:
                raise KeyError(f"cap for unknown variable {n!r}")
        self.caps = tuple(caps.get(n) for n in self.names)
        self._capped = tuple((i, c) for i, c in enumerate(self.caps) if c is not None)
        self.weighted = tuple(
            (tuple(Fraction(w.get(n, 0)) for n in self.names), cap) for w, cap in (weighted or [])
        )
        self._zero_exp = (0,) * len(self.names)

    def __repr__(self):
        return f"SeriesRing({self.names!r}, caps={dict((n, c) for n, c in zip(self.names, self.caps) if c is not None)})"

    def _key(self):
        return (self.names, self.caps, self.weighted)

    def __eq__(self, other):
        return isinstance(other, SeriesRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def admits(self, e: tuple) -> bool:
        for i, c in self._capped:
            if e[i] > c:
                return False
        for w, cap in self.weighted:
            if sum(a * b for a, b in zip(w, e) if a) > cap:
                return False
        return True

    # constructors
    def zero(self) -> "Series":
        return Series(self, {})

    def one(self) -> "Series":
        return self.const(1)

    def const(self, c) -> "Series":
        c = _coerce(c)
        return Series(self, {self._zero_exp: c} if c else {})

    def var(self, name: str, power=1, coeff=1) -> "Series":
        e = list(self._zero_exp)
        e[self.index[name]] = power
        return self.monomial(tuple(e), coeff)

    def monomial(self, exps, coeff=1) -> "Series":
        if isinstance(exps, Mapping):
            e = list(self._zero_exp)
            for n, p in exps.items():
                e[self.index[n]] = p
            exps = tuple(e)
        coeff = _coerce(coeff)
        if not coeff or not self.admits(exps):
            return self.zero()
        return Series(self, {tuple(exps): coeff})

    def from_terms(self, terms: Mapping) -> "Series":
        out = {}
        for e, c in terms.items():
            e = tuple(e)
            c = _coerce(c)
            if c and self.admits(e):
                out[e] = out.get(e, 0) + c
        return Series(self, {e: c for e, c in out.items() if c})

    def exps_of(self, mapping: Mapping[str, object]) -> tuple:
        e = list(self._zero_exp)
        for n, p in mapping.items():
            e[self.index[n]] = p
        return tuple(e)


class Series:
    """Immutable sparse truncated series; see :class:`SeriesRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: SeriesRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- basic protocol ---------------------------------------------------
    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_items():
            mon = "*".join(
                (n if p == 1 else f"{n}^{p}") for n, p in zip(self.ring.names, e) if p
            )
            out.append(f"({c})" + (f"*{mon}" if mon else ""))
        return " + ".join(out)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: tuple(Fraction(x) for x in kv[0]))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, Cyc)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def _check(self, other: "Series"):
        if other.ring is not self.ring and other.ring != self.ring:
            raise ValueError("series belong to different rings")

    def _lift(self, other) -> "Series":
        if isinstance(other, Series):
            self._check(other)
            return other
        return self.ring.const(other)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (Series, int, Fraction, Cyc)):
            return NotImplemented
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Series(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Series, int, Fraction, Cyc)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series":
        c = _coerce(c)
        if not c:
            return self.ring.zero()
        return Series(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        ring = self.ring
        admits = ring.admits
        out: dict = {}
        a_items = list(self.terms.items())
        b_items = list(other.terms.items())
        for ea, ca in a_items:
            for eb, cb in b_items:
                e = tuple(x + y for x, y in zip(ea, eb))
                if not admits(e):
                    continue
                v = out.get(e)
                p = ca * cb
                out[e] = p if v is None else v + p
        return Series(ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, Cyc):
            return self.scale(other.inverse())
        if isinstance(other, Series):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- coefficient access ------------------------------------------------
    def const_term(self) -> Scalar:
        return self.terms.get(self.ring._zero_exp, Fraction(0))

    def coeff(self, exps=None, **kw) -> Scalar:
        """Coefficient at an exponent tuple, or at a {name: power} mapping."""
        if isinstance(exps, tuple) and not kw:
            return self.terms.get(exps, Fraction(0))
        mapping = dict(exps or {})
        mapping.update(kw)
        e = self.ring.exps_of(mapping)
        return self.terms.get(e, Fraction(0))

    def filter(self, pred) -> "Series":
        return Series(self.ring, {e: c for e, c in self.terms.items() if pred(e)})

    def map_coeffs(self, f) -> "Series":
        out = {}
        for e, c in self.terms.items():
            v = _coerce(f(c))
            if v:
                out[e] = v
        return Series(self.ring, out)

    def change_ring(self, ring: SeriesRing, mapping: Mapping[str, str] | None = None) -> "Series":
        """Re-home the series in ``ring``; variables are matched by name
        (optionally renamed through ``mapping``); missing variables must have
        exponent zero."""
        mapping = mapping or {}
        idx = []
        for n in self.ring.names:
            target = mapping.get(n, n)
            idx.append(ring.index.get(target))
        out = {}
        for e, c in self.terms.items():
            ne = list(ring._zero_exp)
            for i, p in enumerate(e):
                if p:
                    j = idx[i]
                    if j is None:
                        raise KeyError(f"variable {self.ring.names[i]!r} missing from target ring")
                    ne[j] += p
            ne = tuple(ne)
            if ring.admits(ne):
                out[ne] = out.get(ne, 0) + c
        return Series(ring, {e: c for e, c in out.items() if c})

    def diff(self, name: str) -> "Series":
        i = self.ring.index[name]
        out = {}
        for e, c in self.terms.items():
            p = e[i]
            if p:
                ne = e[:i] + (p - 1,) + e[i + 1:]
                out[ne] = c * p
        return Series(self.ring, out)

    def subs(self, name: str, value: "Series") -> "Series":
        """Substitute ``value`` for the variable ``name`` (nonnegative integer powers)."""
        self._check(value)
        i = self.ring.index[name]
        powers = {0: self.ring.one()}
        out = self.ring.zero()
        grouped: dict[int, dict] = {}
        for e, c in self.terms.items():
            p = e[i]
            if p != int(p) or p < 0:
                raise ValueError("substitution needs nonnegative integer exponents")
            grouped.setdefault(int(p), {})[e[:i] + (0,) + e[i + 1:]] = c
        for p in sorted(grouped):
            if p not in powers:
                top = max(powers)
                cur = powers[top]
                for k in range(top + 1, p + 1):
                    cur = cur * value
                    powers[k] = cur
            out = out + Series(self.ring, grouped[p]) * powers[p]
        return out

    def linear_substitute(self, ring: SeriesRing, mapping: Mapping[str, Mapping[str, object]]) -> "Series":
        """Re-express the series in ``ring`` after replacing each variable
        ``v`` in ``mapping`` by the linear form sum_w c_w w (variables absent
        from ``mapping`` keep their names).  Exponents of substituted variables
        must be nonnegative integers."""
        forms = {}
        for n in self.ring.names:
            if n in mapping:
                f = ring.zero()
                for w, c in mapping[n].items():
                    f = f + ring.var(w, 1, c)
                forms[n] = f
        powers: dict = {}

        def power(n, p):
            key = (n, p)
            if key not in powers:
                powers[key] = forms[n] ** p if p else ring.one()
            return powers[key]

        out = ring.zero()
        for e, c in self.terms.items():
            keep = {}
            term = None
            for n, p in zip(self.ring.names, e):
                if not p:
                    continue
                if n in forms:
                    if p != int(p) or p < 0:
                        raise ValueError("linear substitution needs nonnegative integer exponents")
                    f = power(n, int(p))
                    term = f if term is None else term * f
                else:
                    keep[n] = p
            mono = ring.monomial(keep, c)
            out = out + (mono if term is None else mono * term)
        return out

    # -- transcendental operations ----------------------------------------
    def _assert_nilpotent(self):
        ring = self.ring
        terms = [e for e in self.terms]
        usable = []
        for i, c in ring._capped:
            if all(e[i] >= 0 for e in terms):
                usable.append(lambda e, i=i: e[i] > 0)
        for w, cap in ring.weighted:
            degs = [sum(a * b for a, b in zip(w, e) if a) for e in terms]
            if all(d >= 0 for d in degs):
                usable.append(lambda e, w=w: sum(a * b for a, b in zip(w, e) if a) > 0)
        for e in terms:
            if not any(f(e) for f in usable):
                raise ArithmeticError(
                    "series is not nilpotent under the ring truncation; offending monomial "
                    + repr(dict(zip(ring.names, e)))
                )

    def _geometric(self, coeffs) -> "Series":
        """sum_k coeffs(k) * self^k for a nilpotent series (k >= 0)."""
        self._assert_nilpotent()
        result = self.ring.const(coeffs(0))
        power = self.ring.one()
        k = 0
        while True:
            k += 1
            power = power * self
            if not power.terms:
                break
            c = coeffs(k)
            if c:
                result = result + power.scale(c)
        return result

    def exp(self) -> "Series":
        c0 = self.const_term()
        if c0:
            raise ArithmeticError(f"exp requires zero constant term, got {c0}")
        facts = [Fraction(1)]

        def coeff(k):
            while len(facts) <= k:
                facts.append(facts[-1] / len(facts))
            return facts[k]

        return self._geometric(coeff)

    def log(self) -> "Series":
        c0 = self.const_term()
        if c0 != 1:
            raise ArithmeticError(f"log requires constant term 1, got {c0}")
        x = self - 1
        return x._geometric(lambda k: Fraction(0) if k == 0 else Fraction((-1) ** (k + 1), k))

    def inverse(self) -> "Series":
        c0 = self.const_term()
        if not c0:
            raise ArithmeticError("inverse requires a nonzero constant term")
        inv0 = Fraction(1) / c0 if not isinstance(c0, Cyc) else c0.inverse()
        x = self.scale(inv0) - 1
        return x._geometric(lambda k: Fraction((-1) ** k)).scale(inv0)

    def power(self, exponent) -> "Series":
        """self**exponent for constant term 1; exponent may be a rational or a series."""
        c0 = self.const_term()
        if c0 != 1:
            raise ArithmeticError(f"fractional power requires constant term 1, got {c0}")
        if isinstance(exponent, Series):
            return (self.log() * exponent).exp()
        return (self.log().scale(Fraction(exponent))).exp()

    # -- serialization ------------------------------------------------------
    def to_json(self):
        return [
            {"exps": [str(Fraction(x)) for x in e], "coeff": scalar_to_json(c)}
            for e, c in self.sorted_items()
        ]


def series_exp_log(s: Series, mode: str) -> Series:
    if mode == "exp":
        return s.exp()
    if mode == "log":
        return s.log()
    raise ValueError("mode must be 'exp' or 'log'")


def series_fractional_power(s: Series, exponent) -> Series:
    return s.power(exponent)
