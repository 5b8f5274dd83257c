"""Finite abelian groups, cocycle extensions Z_r x_k K and gerbe target data."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd
from typing import Iterable, Sequence

from .algebra import lcm, root_of_unity
from .partitions import age as _age


def delta_check(a: int, r: int) -> int:
    """1 if a is nonzero mod r, else 0 (written delta-vee elsewhere)."""
    return 0 if a % r == 0 else 1


def delta(a: int, r: int) -> int:
    """1 if a is zero mod r, else 0."""
    return 1 - delta_check(a, r)


def frac_part(a: int, r: int) -> Fraction:
    """<a/r>: the fractional part of a/r in [0, 1)."""
    return Fraction(a % r, r)


class FiniteAbelianGroup:
    """K = Z_{n_1} + ... + Z_{n_m}, elements and characters are residue tuples."""

    def __init__(self, moduli: Iterable[int] = ()):
        self.moduli = tuple(int(n) for n in moduli if int(n) != 1)
        if any(n < 1 for n in self.moduli):
            raise ValueError("moduli must be positive")
        self.order = reduce(lambda a, b: a * b, self.moduli, 1)
        self.exponent = reduce(lcm, self.moduli, 1)

    @classmethod
    def parse(cls, text: str) -> "FiniteAbelianGroup":
        """Parse "Z2", "Z2xZ3", "2,3", "1" or "trivial"."""
        t = text.strip().lower().replace(" ", "")
        if t in ("", "1", "0", "trivial", "e"):
            return cls(())
        parts = t.replace("x", ",").replace("*", ",").split(",")
        return cls(int(p.lstrip("z")) for p in parts if p)

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.moduli == other.moduli

    def __hash__(self):
        return hash(self.moduli)

    def __repr__(self):
        return "K(" + ("x".join(f"Z{n}" for n in self.moduli) or "1") + ")"

    @property
    def zero(self) -> tuple:
        return (0,) * len(self.moduli)

    def elements(self) -> list[tuple]:
        return [tuple(e) for e in product(*(range(n) for n in self.moduli))]

    def characters(self) -> list[tuple]:
        return self.elements()

    def normalize(self, k: Sequence[int]) -> tuple:
        if len(k) != len(self.moduli):
            raise ValueError(f"element {tuple(k)} does not match {self!r}")
        return tuple(x % n for x, n in zip(k, self.moduli))

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))

    def neg(self, a: Sequence[int]) -> tuple:
        return tuple((-x) % n for x, n in zip(a, self.moduli))

    def sub(self, a, b) -> tuple:
        return self.add(a, self.neg(b))

    def mul(self, m: int, a: Sequence[int]) -> tuple:
        return tuple((m * x) % n for x, n in zip(a, self.moduli))

    def character_exponent(self, gamma: Sequence[int], k: Sequence[int]) -> Fraction:
        """gamma(k) = exp(2 pi i * this), as an element of Q/Z in [0, 1)."""
        if len(gamma) != len(self.moduli) or len(k) != len(self.moduli):
            raise ValueError("character/element shape mismatch")
        return sum((Fraction(g * x, n) for g, x, n in zip(gamma, k, self.moduli)), Fraction(0)) % 1

    def character_value(self, gamma, k):
        e = self.character_exponent(gamma, k)
        return root_of_unity(e.denominator, e.numerator)


def character_value(gamma: Sequence[int], k: Sequence[int], K: FiniteAbelianGroup):
    """gamma(k) = prod zeta_{n_j}^{gamma_j k_j}."""
    return K.character_value(gamma, k)


def character_root(gamma, k, K: FiniteAbelianGroup, root: int, power: int = 1):
    """A fixed choice of gamma(k)^(power/root): exp(2 pi i * power * e / root)
    where e in [0,1) is the exponent of gamma(k)."""
    e = K.character_exponent(gamma, k) * Fraction(power, root)
    e %= 1
    return root_of_unity(e.denominator, e.numerator)


@dataclass(frozen=True)
class CocycleExtension:
    """R = Z_r x_k K with (a,k)+(b,h) = (a+b mod r, k+h+[a+b>=r] kk)."""

    r: int
    K: FiniteAbelianGroup
    kk: tuple = None  # type: ignore[assignment]

    def __post_init__(self):
        kk = self.K.zero if self.kk is None else self.K.normalize(self.kk)
        object.__setattr__(self, "kk", kk)

    @property
    def order(self) -> int:
        return self.r * self.K.order

    @property
    def zero(self) -> tuple:
        return (0, self.K.zero)

    def elements(self) -> list[tuple]:
        return [(a, k) for a in range(self.r) for k in self.K.elements()]

    def normalize(self, x) -> tuple:
        a, k = x
        return (a % self.r, self.K.normalize(k))

    def add(self, x, y) -> tuple:
        (a, k), (b, h) = x, y
        s = a + b
        kk = self.K.add(k, h)
        if s >= self.r:
            kk = self.K.add(kk, self.kk)
        return (s % self.r, kk)

    def neg(self, x) -> tuple:
        a, k = x
        out = self.K.neg(k)
        if delta_check(a, self.r):
            out = self.K.sub(out, self.kk)
        return ((-a) % self.r, out)

    def sub(self, x, y) -> tuple:
        return self.add(x, self.neg(y))

    def total(self, xs: Iterable) -> tuple:
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def is_balanced(self, xs: Iterable) -> bool:
        return self.total(xs) == self.zero

    def in_K(self, x) -> bool:
        return x[0] % self.r == 0

    def age(self, xs: Iterable) -> Fraction:
        return _age((x[0] for x in xs), self.r)

    def parse_element(self, text: str) -> tuple:
        """Parse ``"a"``, ``"a/r"`` or ``"a:k"``/``"a/r:k"`` (k dotted residues)."""
        t = text.strip()
        if ":" in t:
            a_txt, k_txt = t.split(":", 1)
            k = tuple(int(x) for x in k_txt.split(".")) if self.K.moduli else ()
        else:
            a_txt, k = t, self.K.zero
        if "/" in a_txt:
            num, den = a_txt.split("/")
            if int(den) != self.r:
                raise ValueError(f"twist {a_txt} does not have denominator {self.r}")
            a = int(num)
        else:
            a = int(a_txt)
        return self.normalize((a, k))


def extension_arith(x, y, R: CocycleExtension, negate: bool = False):
    """x + y in R, or -x when ``negate`` is set (``y`` ignored)."""
    if negate:
        return R.neg(x)
    return R.add(x, y)


@dataclass(frozen=True)
class GerbeTarget:
    """C_{r,s} with a banded K-gerbe encoded by (k0, kinf, L)."""

    r: int
    s: int
    K: FiniteAbelianGroup = field(default_factory=FiniteAbelianGroup)
    k0: tuple = None  # type: ignore[assignment]
    kinf: tuple = None  # type: ignore[assignment]
    L: tuple = None  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("k0", "kinf", "L"):
            v = getattr(self, name)
            object.__setattr__(self, name, self.K.zero if v is None else self.K.normalize(v))
        if self.r < 1 or self.s < 1:
            raise ValueError("r and s must be positive")

    @property
    def R(self) -> CocycleExtension:
        return CocycleExtension(self.r, self.K, self.k0)

    @property
    def S(self) -> CocycleExtension:
        return CocycleExtension(self.s, self.K, self.kinf)

    def side_group(self, side: str) -> CocycleExtension:
        return self.R if side == "0" else self.S

    def side_order(self, side: str) -> int:
        return self.r if side == "0" else self.s

    def describe(self) -> dict:
        return {"r": self.r, "s": self.s, "K": list(self.K.moduli),
                "k0": list(self.k0), "kinf": list(self.kinf), "L": list(self.L)}


def edge_monodromies(d: int, k, X: GerbeTarget) -> tuple[tuple, tuple]:
    """Monodromies (rho, sigma) at the two ends of an edge of degree d and label k."""
    if d < 1:
        raise ValueError("edge degree must be positive")
    K = X.K
    k = K.normalize(k)
    sigma = ((-d) % X.s, K.add(k, K.mul((-d) // X.s, X.kinf)))
    rho_k = K.neg(k)
    rho_k = K.sub(rho_k, K.mul(d, X.L))
    rho_k = K.add(rho_k, K.mul((-d) // X.r, X.k0))
    rho = ((-d) % X.r, rho_k)
    return rho, sigma


def gerbe_constraint(d: int, u, v, X: GerbeTarget) -> bool:
    """u + v = d L + floor(d/r) k0 + floor(d/s) kinf in K."""
    K = X.K
    lhs = K.add(K.normalize(u), K.normalize(v))
    rhs = K.add(K.mul(d, X.L), K.add(K.mul(d // X.r, X.k0), K.mul(d // X.s, X.kinf)))
    return lhs == rhs


def banded_gerbe_group(r: int, s: int, n: int) -> tuple[int, int]:
    """Moduli (n, q) of H^2(C_{r,s}, Z_n) = Z_n + Z_q with q = gcd(r, s, n)."""
    if n < 1:
        raise ValueError("n must be positive")
    return (n, gcd(gcd(r, s), n))


def hodge_dimension(g: int, tup: Sequence, X: GerbeTarget, side: str = "0") -> dict:
    """Rank of the Hodge-type bundle on moduli of R-covers.

    Returns the value on components whose monodromy lies in K (``"in_K"``)
    and on all other components (``"other"``), plus the generic value decided
    by the subgroup generated by the given monodromies.
    """
    G = X.side_group(side)
    tup = [G.normalize(x) for x in tup]
    if not G.is_balanced(tup):
        raise ValueError("monodromy tuple is unbalanced")
    base = g - 1 + G.age(tup)
    if base.denominator != 1:
        raise ArithmeticError("age of a balanced tuple must be integral")
    base = int(base)
    generic = base + (1 if all(G.in_K(x) for x in tup) else 0)
    # Components with all monodromy in K only exist if the marked points are in K
    # and g >= 1 loops can also stay in K; with twisted points every component
    # has monodromy outside K.
    return {"in_K": base + 1, "other": base, "generic": generic}
