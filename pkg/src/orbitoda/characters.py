"""Characters of S_d and of the wreath products K wr S_d (K finite abelian).

Wreath irreducibles are labeled by maps gamma -> partition (a partition for every
character of K); we store them as tuples aligned with ``K.characters()``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .algebra import Scalar, conj
from .groups import FiniteAbelianGroup
from .partitions import (
    KLabeledPartition,
    Partition,
    border_strip_remove,
    centralizer_order,
    enumerate_labeled_partitions,
    enumerate_partitions,
    wreath_order,
)


@lru_cache(maxsize=None)
def _mn(lam: tuple, mu: tuple) -> int:
    if not mu:
        return 1 if not lam else 0
    m, rest = mu[0], mu[1:]
    total = 0
    for smaller, sign in border_strip_remove(lam, m):
        total += sign * _mn(tuple(smaller), rest)
    return total


def sym_character(lam: Sequence[int], mu: Sequence[int]) -> int:
    """chi^lam at cycle type mu, i.e. the coefficient of v_lam in prod alpha_{-mu_i}|0>."""
    lam, mu = Partition(lam), Partition(mu)
    if lam.size != mu.size:
        raise ValueError(f"size mismatch: |{tuple(lam)}| != |{tuple(mu)}|")
    return _mn(tuple(lam), tuple(mu))


def sym_dimension(lam: Sequence[int]) -> int:
    lam = Partition(lam)
    return sym_character(lam, (1,) * lam.size)


# ---------------------------------------------------------------------------
# multipartitions labeled by characters of K


class GStarLabeledPartition(tuple):
    """Tuple of partitions, one per character of K (in ``K.characters()`` order)."""

    def __new__(cls, parts: Sequence[Sequence[int]]):
        return super().__new__(cls, (Partition(p) for p in parts))

    @property
    def size(self) -> int:
        return sum(p.size for p in self)

    def __repr__(self):
        return "GStar(" + ", ".join(str(tuple(p)) for p in self) + ")"


def enumerate_multipartitions(d: int, K: FiniteAbelianGroup) -> list[GStarLabeledPartition]:
    n = K.order
    out = []

    def rec(i, remaining, acc):
        if i == n - 1:
            for p in enumerate_partitions(remaining):
                out.append(GStarLabeledPartition(acc + [p]))
            return
        for size in range(remaining, -1, -1):
            for p in enumerate_partitions(size):
                rec(i + 1, remaining - size, acc + [p])

    rec(0, d, [])
    return out


def wreath_character(lam: Sequence, mu: KLabeledPartition, K: FiniteAbelianGroup) -> Scalar:
    """Coefficient of v_lam in prod_i alpha^{c_i}_{-mu_i}|0>, where
    alpha^c_n = sum_gamma gamma(c^{-1}) alpha^gamma_n.

    Equals sum over assignments i -> gamma_i of prod_i gamma_i(-c_i) times the
    product of symmetric-group characters of the parts sent to each gamma.

    This is the complex conjugate of the group character of the irreducible
    whose restriction to K^d contains the tensor product of the gamma's (the
    values are real for K of exponent 2).  Hurwitz numbers built from products
    of two such values are rational, so they do not depend on the choice.
    """
    lam = GStarLabeledPartition(lam)
    if len(lam) != K.order:
        raise ValueError("multipartition does not match the character group")
    if lam.size != mu.size:
        raise ValueError("size mismatch")
    if K.order == 1:
        return Fraction(sym_character(lam[0], mu.parts))
    return _wreath_character(lam, KLabeledPartition(mu), K)


@lru_cache(maxsize=100_000)
def _wreath_character(lam: GStarLabeledPartition, mu: KLabeledPartition, K: FiniteAbelianGroup) -> Scalar:
    chars = K.characters()
    targets = [p.size for p in lam]
    groups: dict = {}
    for pl in mu:
        groups[pl] = groups.get(pl, 0) + 1
    items = list(groups.items())
    phases = {(gi, label): K.character_value(gamma, K.neg(label))
              for gi, gamma in enumerate(chars) for (_, label) in groups}
    total: Scalar = Fraction(0)

    # identical (part, label) pairs are distributed by counts, weighted by
    # the number of ways to choose which of them go to each character
    def compositions(n, k):
        if k == 1:
            yield (n,)
            return
        for first in range(n, -1, -1):
            for rest in compositions(n - first, k - 1):
                yield (first,) + rest

    def rec(i, remaining, weight, assigned):
        nonlocal total
        if i == len(items):
            if any(remaining):
                return
            val = weight
            for gi, lp in enumerate(lam):
                if lp.size:
                    val = val * sym_character(lp, tuple(sorted(assigned[gi], reverse=True)))
                    if not val:
                        return
            total = total + val
            return
        (part, label), mult = items[i]
        for counts in compositions(mult, len(chars)):
            if any(c * part > r for c, r in zip(counts, remaining)):
                continue
            w = weight * factorial(mult)
            new_assigned = list(assigned)
            rem = list(remaining)
            for gi, c in enumerate(counts):
                if c:
                    w = w * Fraction(1, factorial(c)) * phases[(gi, label)] ** c
                    new_assigned[gi] = assigned[gi] + (part,) * c
                    rem[gi] -= c * part
            rec(i + 1, rem, w, new_assigned)

    rec(0, targets, Fraction(1), [()] * len(chars))
    return total


def wreath_dimension(lam: Sequence, K: FiniteAbelianGroup) -> int:
    lam = GStarLabeledPartition(lam)
    mu = KLabeledPartition([(1, K.zero)] * lam.size)
    val = wreath_character(lam, mu, K)
    return int(val)


def transposition_class(d: int, c, K: FiniteAbelianGroup) -> KLabeledPartition:
    """The class T_c: one 2-cycle with cycle label c, all other cycles trivial."""
    return KLabeledPartition([(2, K.normalize(c))] + [(1, K.zero)] * (d - 2))


def central_character_fT(lam: Sequence, c, K: FiniteAbelianGroup) -> Scalar:
    """Eigenvalue of the class sum of T_c on the irreducible lam:
    |K| * sum_gamma gamma(c) * (content sum of lam^gamma)."""
    lam = GStarLabeledPartition(lam)
    total: Scalar = Fraction(0)
    for gamma, part in zip(K.characters(), lam):
        cs = part.content_sum()
        if cs:
            total = total + K.character_value(gamma, K.normalize(c)) * (K.order * cs)
    return total


def central_character_from_table(lam: Sequence, c, K: FiniteAbelianGroup) -> Scalar:
    """|C_T| chi(T)/dim, straight from the character table (cross-check path).

    ``wreath_character`` is the conjugate of the group character, hence the
    ``conj`` below."""
    lam = GStarLabeledPartition(lam)
    d = lam.size
    if d < 2:
        return Fraction(0)
    T = transposition_class(d, c, K)
    size = Fraction(wreath_order(d, K), centralizer_order(T, K))
    return conj(wreath_character(lam, T, K)) * size / wreath_dimension(lam, K)


def character_table(d: int, K: FiniteAbelianGroup):
    """(rows, columns, table) with rows = multipartitions, columns = classes."""
    rows = enumerate_multipartitions(d, K)
    cols = enumerate_labeled_partitions(d, K)
    table = [[wreath_character(lam, mu, K) for mu in cols] for lam in rows]
    return rows, cols, table
