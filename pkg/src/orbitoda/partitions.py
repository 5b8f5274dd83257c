"""Integer partitions, K-labeled partitions and Maya-diagram border strips."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Sequence


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = sorted((int(p) for p in parts), reverse=True)
        if parts and parts[-1] <= 0:
            raise ValueError("partition parts must be positive")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def content_sum(self) -> int:
        """Sum of j - i over the cells (i, j) of the diagram."""
        return sum(p * (p - 1) // 2 - i * p for i, p in enumerate(self))

    def __repr__(self):
        return f"Partition{tuple(self)!r}"


@lru_cache(maxsize=None)
def _partitions(d: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if d == 0:
        return ((),)
    out = []
    for first in range(min(d, largest), 0, -1):
        for rest in _partitions(d - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(d: int) -> list[Partition]:
    """All partitions of ``d`` in reverse-lexicographic order."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    return [Partition(p) for p in _partitions(d, d)]


def count_partitions(d: int) -> int:
    """p(d) by Euler's pentagonal recurrence (independent of the enumerator)."""
    p = [1] + [0] * d
    for n in range(1, d + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p[d]


# ---------------------------------------------------------------------------
# Maya diagrams
#
# A partition of charge n is the set of integer positions
#     { lambda_i - i + n : i >= 1 }   (position p stands for the half-integer p + 1/2).
# Everything below n - len(lambda) is occupied.


def maya_positions(lam: Sequence[int], charge: int = 0, depth: int = 0) -> list[int]:
    """The first ``len(lam) + depth`` occupied positions, decreasing."""
    lam = list(lam) + [0] * depth
    return [p - i - 1 + charge for i, p in enumerate(lam)]


def from_maya(positions: Sequence[int], charge: int = 0) -> Partition:
    """Inverse of :func:`maya_positions` (positions may be given in any order)."""
    pos = sorted(positions, reverse=True)
    return Partition(p + i + 1 - charge for i, p in enumerate(pos) if p + i + 1 - charge > 0)


def stone_move(lam: Sequence[int], src: int, dst: int, charge: int = 0):
    """Move the stone at position ``src`` to the empty position ``dst``.

    Returns ``(new_partition, sign)`` with sign = (-1)^(stones strictly between),
    or ``None`` if ``src`` is empty or ``dst`` occupied.
    """
    depth = max(0, charge - len(lam) - min(src, dst)) + 1
    pos = maya_positions(lam, charge, depth)
    bottom = pos[-1]
    occupied = set(pos)

    def filled(p):
        return p in occupied or p < bottom

    if not filled(src) or filled(dst):
        return None
    lo, hi = min(src, dst), max(src, dst)
    between = sum(1 for p in range(lo + 1, hi) if filled(p))
    occupied.discard(src)
    occupied.add(dst)
    new = from_maya(sorted(occupied, reverse=True), charge)
    return new, (-1) ** between


def border_strip_add(lam: Sequence[int], m: int) -> list[tuple[Partition, int]]:
    """All partitions obtained by adding a border strip of size ``m``, with sign
    (-1)^(height - 1).  Order: by decreasing first row change."""
    if m < 1:
        raise ValueError("strip size must be positive")
    out = []
    for p in maya_positions(lam, 0, m):
        res = stone_move(lam, p, p + m)
        if res is not None:
            out.append(res)
    return out


def border_strip_remove(lam: Sequence[int], m: int) -> list[tuple[Partition, int]]:
    """All partitions obtained by removing a border strip of size ``m``."""
    if m < 1:
        raise ValueError("strip size must be positive")
    out = []
    for p in maya_positions(lam, 0, 0):
        res = stone_move(lam, p, p - m)
        if res is not None:
            out.append(res)
    return out


# ---------------------------------------------------------------------------
# K-labeled partitions


class KLabeledPartition(tuple):
    """Multiset of (part, label) pairs, stored sorted (parts decreasing).

    Labels are elements of a finite abelian group, i.e. residue tuples.
    """

    def __new__(cls, pairs: Iterable[tuple[int, tuple]] = ()):
        norm = []
        for part, label in pairs:
            if int(part) <= 0:
                raise ValueError("parts must be positive")
            norm.append((int(part), tuple(label)))
        norm.sort(key=lambda pl: (-pl[0], pl[1]))
        return super().__new__(cls, norm)

    @property
    def parts(self) -> Partition:
        return Partition(p for p, _ in self)

    @property
    def size(self) -> int:
        return sum(p for p, _ in self)

    @property
    def length(self) -> int:
        return len(self)

    def labels(self) -> list[tuple]:
        return [lab for _, lab in self]

    def by_label(self) -> dict[tuple, Partition]:
        groups: dict[tuple, list[int]] = {}
        for p, lab in self:
            groups.setdefault(lab, []).append(p)
        return {lab: Partition(ps) for lab, ps in groups.items()}

    def text(self) -> str:
        return " ".join(f"{p}_{format_label(lab)}" for p, lab in self)

    def __repr__(self):
        return f"KLabeledPartition({self.text()!r})"


def format_label(label: tuple) -> str:
    return ".".join(str(x) for x in label) if label else "0"


def parse_label(text: str, rank: int) -> tuple:
    if rank == 0:
        if text not in ("", "0"):
            raise ValueError(f"label {text!r} given for the trivial group")
        return ()
    vals = tuple(int(x) for x in text.split("."))
    if len(vals) != rank:
        raise ValueError(f"label {text!r} does not have {rank} components")
    return vals


def parse_labeled_partition(text: str, K) -> KLabeledPartition:
    """Parse ``"2_0 1_1"``; parts without a label get the identity label.

    Commas are accepted as separators as well, so ``"1,1"`` works for trivial K.
    """
    rank = len(K.moduli)
    pairs = []
    for token in text.replace(",", " ").split():
        if "_" in token:
            p, lab = token.split("_", 1)
            label = parse_label(lab, rank)
        else:
            p, label = token, (0,) * rank
        label = tuple(x % n for x, n in zip(label, K.moduli))
        pairs.append((int(p), label))
    return KLabeledPartition(pairs)


def enumerate_labeled_partitions(d: int, K) -> list[KLabeledPartition]:
    """One representative per conjugacy class of K wr S_d (deterministic order)."""
    elements = list(K.elements())
    keyed = sorted(((-part, li), (part, lab)) for part in range(1, d + 1) for li, lab in enumerate(elements))
    out = []

    def rec(remaining: int, start: int, acc: list):
        if remaining == 0:
            out.append(KLabeledPartition(acc))
            return
        for idx in range(start, len(keyed)):
            part, lab = keyed[idx][1]
            if part > remaining:
                continue
            acc.append((part, lab))
            rec(remaining - part, idx, acc)
            acc.pop()

    rec(d, 0, [])
    return out


def aut_order(pairs: Iterable) -> int:
    """|Aut| of a multiset: product of factorials of multiplicities."""
    return prod(factorial(m) for m in Counter(pairs).values())


def centralizer_order(mu: KLabeledPartition, K) -> int:
    """The centralizer size |Aut(mu)| * prod(|K| mu_i) of the class mu in K wr S_d."""
    return aut_order(mu) * prod(K.order * p for p, _ in mu)


def wreath_order(d: int, K) -> int:
    return K.order ** d * factorial(d)


def age(residues: Iterable[int], r: int) -> Fraction:
    """Degree-shifting number sum a_i / r with a_i reduced into 0..r-1."""
    return sum((Fraction(a % r, r) for a in residues), Fraction(0))
