"""Independent brute-force oracles used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product

from orbitoda.groups import FiniteAbelianGroup
from orbitoda.hurwitz import WreathGroup


def sym_character_by_matrices(lam, perm) -> int:
    """Character of S_n (n <= 3) from explicit matrix representations."""
    n = len(perm)
    lam = tuple(lam)
    sign = 1
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        sign *= (-1) ** (length - 1)
    if lam == (n,):
        return 1
    if lam == (1,) * n:
        return sign
    if lam == (2, 1):
        # standard representation: permutation representation minus trivial
        fixed = sum(1 for i in range(3) if perm[i] == i)
        return fixed - 1
    raise ValueError("oracle only covers n <= 3")


def induced_wreath_character(lam, K: FiniteAbelianGroup, d: int):
    """True character of the irreducible of K wr S_d labeled by lam, built as
    the representation induced from K^d x| prod S_{d_gamma} of
    (tensor of the characters gamma) x (prod of S_{d_gamma} irreducibles).
    Returns a dict element -> value."""
    G = WreathGroup(d, K)
    chars = K.characters()
    blocks = []
    for gi, p in enumerate(lam):
        blocks += [gi] * sum(p)
    # H: permutations preserving the blocks
    def in_H(pi):
        return all(blocks[pi[i]] == blocks[i] for i in range(d))

    def psi(x):
        k, pi = x
        val = Fraction(1)
        for i in range(d):
            val = val * K.character_value(chars[blocks[i]], k[i])
        for gi, p in enumerate(lam):
            idx = [i for i in range(d) if blocks[i] == gi]
            if not idx:
                continue
            sub = tuple(idx.index(pi[i]) for i in idx)
            val = val * sym_character_by_matrices(tuple(p), sub)
        return val

    elements = list(G.elements())
    H_order = sum(1 for x in elements if in_H(x[1]))
    out = {}
    for x in elements:
        total = Fraction(0)
        for y in elements:
            z = G.mul(G.mul(y, x), G.inverse(y))
            if in_H(z[1]):
                total = total + psi(z)
        out[x] = total / H_order
    return out
