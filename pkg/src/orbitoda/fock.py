"""Truncated infinite wedge and its tensor powers.

A basis vector of one wedge factor is ``(charge, partition)``; the Maya
diagram of charge n occupies the half-integers lambda_i - i + 1/2 + n.  A basis
vector of the |K|-fold tensor product is a tuple of such pairs, one per
character of K (in ``K.characters()`` order).  Coefficients may be scalars or
:class:`~orbitoda.algebra.Series`.

Operators act by rules, never as matrices.  :func:`vacuum_expectation`
applies a list of operators right-to-left and discards basis vectors whose
energy cannot be brought back to the vacuum by the operators still to come,
so results are exact; an unbounded creation with nothing to stop it raises
:class:`CutoffError`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .algebra import Cyc, Series, SeriesRing
from .groups import FiniteAbelianGroup
from .partitions import Partition, maya_positions, stone_move


class CutoffError(RuntimeError):
    """Raised when an expectation would need an unbounded number of states."""


HALF = Fraction(1, 2)

# ---------------------------------------------------------------------------
# single-wedge primitives


@lru_cache(maxsize=200_000)
def wedge_moves(charge: int, lam: tuple, shift: int) -> tuple:
    """All moves of one stone by ``-shift`` positions (E_{k-shift,k}).

    Returns tuples ``(new_partition, sign, k)`` where k = p + 1/2 is the
    half-integer the stone leaves.
    """
    out = []
    if shift > 0:
        sources = maya_positions(lam, charge, 0)
    else:
        sources = maya_positions(lam, charge, -shift)
    for p in sources:
        res = stone_move(lam, p, p - shift, charge)
        if res is not None:
            new, sign = res
            out.append((tuple(new), sign, p + HALF))
    return tuple(out)


@lru_cache(maxsize=200_000)
def diagonal_support(charge: int, lam: tuple) -> tuple[tuple, tuple]:
    """(positive stones, negative holes) as half-integers; the normal-ordered
    diagonal operator sum f(k) :psi_k psi_k^*: acts by
    sum_{stones k>0} f(k) - sum_{holes k<0} f(k)."""
    depth = max(0, len(lam) - charge) + 1
    pos = maya_positions(lam, charge, depth)
    occ = set(pos)
    bottom = pos[-1]
    stones = tuple(p + HALF for p in pos if p >= 0)
    holes = tuple(p + HALF for p in range(bottom, 0) if p not in occ and p <= -1)
    return stones, holes


def diagonal_eigenvalue(f: Callable[[Fraction], object], charge: int, lam: tuple):
    stones, holes = diagonal_support(charge, tuple(lam))
    total = 0
    for k in stones:
        total = total + f(k)
    for k in holes:
        total = total - f(k)
    return total


@lru_cache(maxsize=200_000)
def f2_eigenvalue(charge: int, lam: tuple) -> Fraction:
    """Eigenvalue of F2 = sum k^2/2 :psi_k psi_k^*:.  For charge 0 this is the
    content sum of lam."""
    return Fraction(diagonal_eigenvalue(lambda k: k * k / 2, charge, lam))


def energy(lam: tuple) -> int:
    return sum(lam)


# ---------------------------------------------------------------------------
# states


def _add_into(acc: dict, key, value):
    v = acc.get(key)
    v = value if v is None else v + value
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class FockState:
    """Finite linear combination of tensor basis vectors.

    ``terms`` maps ``((n_1, lam_1), ..., (n_m, lam_m))`` to coefficients.
    """

    __slots__ = ("terms", "ncomp")

    def __init__(self, terms: dict, ncomp: int):
        self.terms = terms
        self.ncomp = ncomp

    @classmethod
    def vacuum(cls, ncomp: int = 1, charges: Sequence[int] | None = None, coeff=Fraction(1)) -> "FockState":
        charges = tuple(charges) if charges is not None else (0,) * ncomp
        return cls({tuple((n, ()) for n in charges): coeff}, ncomp)

    @classmethod
    def basis(cls, parts: Sequence[Sequence[int]], charges: Sequence[int] | None = None, coeff=Fraction(1)) -> "FockState":
        charges = tuple(charges) if charges is not None else (0,) * len(parts)
        key = tuple((n, tuple(Partition(p))) for n, p in zip(charges, parts))
        return cls({key: coeff}, len(parts))

    def __repr__(self):
        return "FockState(" + ", ".join(f"{c}*{k}" for k, c in self.terms.items()) + ")"

    def __add__(self, other: "FockState") -> "FockState":
        out = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(out, k, v)
        return FockState(out, self.ncomp)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "FockState":
        if isinstance(c, (int, Fraction)) and not c:
            return FockState({}, self.ncomp)
        out = {}
        for k, v in self.terms.items():
            w = v * c if not isinstance(c, Series) else c * v
            if w:
                out[k] = w
        return FockState(out, self.ncomp)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key) -> object:
        return self.terms.get(key, Fraction(0))

    def inner(self, other: "FockState"):
        """Bilinear pairing sum_v a_v b_v (the basis is orthonormal; the
        coefficients used here are real in every consumer)."""
        total = Fraction(0)
        for k, v in self.terms.items():
            w = other.terms.get(k)
            if w is not None:
                total = total + v * w
        return total

    def max_energy(self) -> int:
        return max((sum(sum(l) for _, l in k) for k in self.terms), default=0)

    def prune(self, max_energy: int | None) -> "FockState":
        if max_energy is None:
            return self
        return FockState({k: v for k, v in self.terms.items()
                          if sum(sum(l) for _, l in k) <= max_energy}, self.ncomp)

    def to_json(self):
        from .algebra import scalar_to_json
        out = []
        for k, v in sorted(self.terms.items(), key=lambda kv: repr(kv[0])):
            coeff = v.to_json() if isinstance(v, Series) else scalar_to_json(v)
            out.append({"basis": [[n, list(l)] for n, l in k], "coeff": coeff})
        return out


# ---------------------------------------------------------------------------
# operator actions on states


def apply_moves(state: FockState, comp: int, shift: int, weight=None) -> FockState:
    """Apply sum_k w(k) E_{k-shift,k} on tensor factor ``comp``.

    ``weight(k)`` defaults to 1 (then this is alpha_shift for shift != 0).
    """
    out: dict = {}
    for key, c in state.terms.items():
        n, lam = key[comp]
        for new, sign, k in wedge_moves(n, lam, shift):
            w = c if sign > 0 else -c
            if weight is not None:
                wk = weight(k)
                w = wk * w if isinstance(wk, Series) else w * wk
            nk = key[:comp] + ((n, new),) + key[comp + 1:]
            _add_into(out, nk, w)
    return FockState(out, state.ncomp)


def alpha_apply(gamma_index: int, n: int, v: FockState) -> FockState:
    """alpha^gamma_n on factor ``gamma_index`` (n != 0)."""
    if n == 0:
        raise ValueError("alpha_0 is the charge operator; use charge_apply")
    return apply_moves(v, gamma_index, n)


def alpha_class_apply(c, n: int, v: FockState, K: FiniteAbelianGroup) -> FockState:
    """alpha^c_n = sum_gamma gamma(c^{-1}) alpha^gamma_n."""
    out = FockState({}, v.ncomp)
    for gi, gamma in enumerate(K.characters()):
        out = out + alpha_apply(gi, n, v).scale(K.character_value(gamma, K.neg(c)))
    return out


def diagonal_apply(v: FockState, eig: Callable[[tuple], object]) -> FockState:
    out = {}
    for key, c in v.terms.items():
        e = eig(key)
        w = e * c if isinstance(e, Series) else c * e
        if w:
            out[key] = w
    return FockState(out, v.ncomp)


def F2_apply(variant: str, v: FockState, K: FiniteAbelianGroup | None = None,
             gamma_index: int = 0, c=None) -> FockState:
    """F2 variants: ``"gamma"`` (factor ``gamma_index``), ``"class"`` (F2^c for
    the class label ``c``), ``"zero"`` (F2^0 = |K| sum_gamma F2^gamma)."""
    if variant == "gamma":
        return diagonal_apply(v, lambda key: f2_eigenvalue(*key[gamma_index]))
    K = K or FiniteAbelianGroup()
    if variant == "zero":
        return diagonal_apply(v, lambda key: K.order * sum(f2_eigenvalue(*b) for b in key))
    if variant == "class":
        chars = K.characters()

        def eig(key):
            total = Fraction(0)
            for gamma, b in zip(chars, key):
                f = f2_eigenvalue(*b)
                if f:
                    total = total + K.character_value(gamma, K.normalize(c)) * (K.order * f)
            return total

        return diagonal_apply(v, eig)
    raise ValueError(f"unknown F2 variant {variant!r}")


def varsigma_series(ring: SeriesRing, var: str, scale=1) -> Series:
    """vs(x) = e^{x/2} - e^{-x/2} at x = scale*var."""
    cap = ring.caps[ring.index[var]]
    out = {}
    for j in range(1, (cap if cap is not None else 0) + 2, 2):
        # 2 sinh(x/2) = sum_{j odd} 2 (x/2)^j / j!
        c = Fraction(2) * Fraction(1, 2 ** j) * Fraction(scale) ** j
        f = 1
        for i in range(2, j + 1):
            f *= i
        out[ring.exps_of({var: j})] = c / f
    return ring.from_terms(out)


def inverse_varsigma_series(ring: SeriesRing, var: str, scale=1) -> Series:
    """1/vs(x) as a Laurent series x^{-1}(1 - x^2/24 + ...) with x = scale*var."""
    cap = ring.caps[ring.index[var]]
    # vs(x)/x = 1 + x^2/24 + ... ; invert in a helper ring with one extra order
    helper = SeriesRing([var], caps={var: (cap or 0) + 1})
    vs = varsigma_series(helper, var, scale)
    unit = helper.from_terms({(e[0] - 1,): c for e, c in vs.terms.items()}).scale(Fraction(1) / Fraction(scale))
    inv = unit.inverse()
    out = {}
    for e, c in inv.terms.items():
        ne = ring.exps_of({var: e[0] - 1})
        out[ne] = c / Fraction(scale)
    return ring.from_terms(out)


def exp_series(ring: SeriesRing, var: str, a) -> Series:
    """exp(a*var) truncated by the ring."""
    return ring.var(var).scale(a).exp() if a else ring.one()


def E_series_apply(gamma_index: int, r: int, v: FockState, ring: SeriesRing, var: str,
                   scale=1) -> FockState:
    """E_r(z) = sum_k e^{z(k - r/2)} E_{k-r,k} + delta_{r,0}/vs(z), with z = scale*var."""
    cache: dict = {}

    def weight(k):
        a = Fraction(scale) * (k - Fraction(r, 2))
        if a not in cache:
            cache[a] = exp_series(ring, var, a)
        return cache[a]

    if r != 0:
        return apply_moves(v, gamma_index, r, weight)
    inv = inverse_varsigma_series(ring, var, scale)

    def eig(key):
        n, lam = key[gamma_index]
        total = diagonal_eigenvalue(weight, n, lam)
        return inv + total

    return diagonal_apply(v, eig)


def charge_apply(gamma_index: int, v: FockState) -> FockState:
    return diagonal_apply(v, lambda key: Fraction(key[gamma_index][0]))


# ---------------------------------------------------------------------------
# operator specifications for vacuum expectations


class Op:
    """Base operator specification.

    ``lowering`` is the largest energy decrease the operator can cause
    (``None`` = unbounded); ``raising`` the largest increase (``None`` = unbounded).
    """

    lowering: int | None = 0
    raising: int | None = 0

    def apply(self, v: FockState, ctx: "Context") -> FockState:  # pragma: no cover - interface
        raise NotImplementedError


class Context:
    def __init__(self, K: FiniteAbelianGroup | None = None, ring: SeriesRing | None = None):
        self.K = K or FiniteAbelianGroup()
        self.ring = ring

    @property
    def ncomp(self) -> int:
        return self.K.order


class Alpha(Op):
    def __init__(self, n: int, gamma_index: int = 0, coeff=Fraction(1)):
        self.n, self.gamma_index, self.coeff = n, gamma_index, coeff
        self.lowering = max(n, 0)
        self.raising = max(-n, 0)

    def apply(self, v, ctx):
        return alpha_apply(self.gamma_index, self.n, v).scale(self.coeff)


class AlphaClass(Op):
    def __init__(self, n: int, c, coeff=Fraction(1)):
        self.n, self.c, self.coeff = n, c, coeff
        self.lowering = max(n, 0)
        self.raising = max(-n, 0)

    def apply(self, v, ctx):
        return alpha_class_apply(ctx.K.normalize(self.c), self.n, v, ctx.K).scale(self.coeff)


class ESeries(Op):
    def __init__(self, r: int, var: str, gamma_index: int = 0, scale=1):
        self.r, self.var, self.gamma_index, self.scale = r, var, gamma_index, scale
        self.lowering = max(r, 0)
        self.raising = max(-r, 0)

    def apply(self, v, ctx):
        return E_series_apply(self.gamma_index, self.r, v, ctx.ring, self.var, self.scale)


class F2(Op):
    def __init__(self, variant: str = "gamma", gamma_index: int = 0, c=None):
        self.variant, self.gamma_index, self.c = variant, gamma_index, c

    def apply(self, v, ctx):
        return F2_apply(self.variant, v, ctx.K, self.gamma_index, self.c)


class ExpF2(Op):
    """exp(beta * F2-variant) with beta a series variable (times a scalar)."""

    def __init__(self, var: str, variant: str = "zero", gamma_index: int = 0, scale=1):
        self.var, self.variant, self.gamma_index, self.scale = var, variant, gamma_index, scale

    def apply(self, v, ctx):
        ring, K = ctx.ring, ctx.K
        cache: dict = {}

        def eig(key):
            if self.variant == "zero":
                f = K.order * sum(f2_eigenvalue(*b) for b in key)
            else:
                f = f2_eigenvalue(*key[self.gamma_index])
            if f not in cache:
                cache[f] = exp_series(ring, self.var, f * Fraction(self.scale))
            return cache[f]

        return diagonal_apply(v, eig)


class QH(Op):
    """q^H with H measured from the charge vacuum of each factor (relative
    energy |lambda|); ``absolute`` adds n^2/2 per factor, which requires q's
    exponent lattice to contain those values."""

    def __init__(self, var: str, absolute: bool = False):
        self.var, self.absolute = var, absolute

    def apply(self, v, ctx):
        ring = ctx.ring
        cache: dict = {}

        def eig(key):
            e = sum(sum(l) for _, l in key)
            if self.absolute:
                e = e + sum(Fraction(n * n, 2) for n, _ in key)
            if e not in cache:
                cache[e] = ring.var(self.var, e) if e else ring.one()
            return cache[e]

        return diagonal_apply(v, eig)


class ExpOp(Op):
    """exp(X) for X = sum of weighted alpha operators on one factor.

    ``terms`` is a list of (n, coefficient) with coefficients scalars or series.
    Lowering exponentials terminate on their own; raising ones stop when the
    series truncation kills every new term or at the energy budget supplied by
    the expectation engine.
    """

    def __init__(self, terms: Sequence[tuple[int, object]], gamma_index: int = 0, classes=None):
        self.terms = list(terms)
        self.gamma_index = gamma_index
        self.classes = classes  # optional class label c: use alpha^c instead
        signs = {n > 0 for n, _ in self.terms}
        if len(signs) > 1:
            raise ValueError("mixed raising/lowering exponentials are not supported")
        lowering = all(n > 0 for n, _ in self.terms)
        self.lowering = None if lowering else 0
        self.raising = 0 if lowering else None

    def _X(self, v, ctx):
        out = FockState({}, v.ncomp)
        for n, c in self.terms:
            if self.classes is None:
                w = alpha_apply(self.gamma_index, n, v)
            else:
                w = alpha_class_apply(ctx.K.normalize(self.classes), n, v, ctx.K)
            out = out + w.scale(c)
        return out

    def apply(self, v, ctx, budget: int | None = None):
        result = v
        term = v
        k = 0
        while True:
            k += 1
            term = self._X(term, ctx).scale(Fraction(1, k))
            if self.raising is None:
                if budget is not None:
                    term = term.prune(budget)
                elif k > 400:
                    raise CutoffError("raising exponential does not terminate; supply series caps")
            if term.is_zero():
                break
            result = result + term
        return result


class Gamma(Op):
    """Vertex operator Gamma_{+/-}(x) = exp(sum_{k<=kmax} x_k alpha_{+/-k}/k).

    ``family`` names the series variables: x_k is ``f"{family}{k}"``.
    """

    def __init__(self, sign: int, family: str, kmax: int, gamma_index: int = 0, c=None, scale=1):
        self.sign, self.family, self.kmax = sign, family, kmax
        self.gamma_index, self.c, self.scale = gamma_index, c, scale
        self.lowering = None if sign > 0 else 0
        self.raising = 0 if sign > 0 else None

    def apply(self, v, ctx, budget: int | None = None):
        ring = ctx.ring
        terms = [(self.sign * k, ring.var(f"{self.family}{k}").scale(Fraction(self.scale) / k))
                 for k in range(1, self.kmax + 1)]
        inner = ExpOp(terms, self.gamma_index, self.c)
        return inner.apply(v, ctx, budget)


class Custom(Op):
    """Wrap an arbitrary state map with declared energy behavior."""

    def __init__(self, fn, lowering=0, raising=0):
        self.fn, self.lowering, self.raising = fn, lowering, raising

    def apply(self, v, ctx):
        return self.fn(v, ctx)


def _capacity(ops: Sequence[Op]) -> int | None:
    total = 0
    for op in ops:
        if op.lowering is None:
            return None
        total += op.lowering
    return total


def _run(ops: Sequence[Op], start: FockState, ctx: Context) -> FockState:
    state = start
    for i in range(len(ops) - 1, -1, -1):
        op = ops[i]
        budget = _capacity(ops[:i])
        if isinstance(op, (ExpOp, Gamma)):
            state = op.apply(state, ctx, budget)
        else:
            state = op.apply(state, ctx)
        state = state.prune(budget)
        if state.is_zero():
            break
    return state


def vacuum_expectation(ops: Sequence[Op], ctx: Context | None = None):
    """<0| ops[0] ops[1] ... ops[-1] |0> (scalar or series)."""
    ctx = ctx or Context()
    vac = FockState.vacuum(ctx.ncomp)
    state = _run(ops, vac, ctx)
    val = state.coefficient(next(iter(vac.terms)))
    if ctx.ring is not None and not isinstance(val, Series):
        return ctx.ring.const(val)
    return val


def charge_shifted_expectation(n: int, ops: Sequence[Op], ctx: Context | None = None, gamma_index: int = 0):
    """<T^{-n} ops T^n> where T shifts the charge of factor ``gamma_index`` by n.

    Energies inside the sector are measured from the shifted vacuum.
    """
    ctx = ctx or Context()
    charges = [0] * ctx.ncomp
    charges[gamma_index] = n
    vac = FockState.vacuum(ctx.ncomp, charges)
    state = _run(ops, vac, ctx)
    val = state.coefficient(next(iter(vac.terms)))
    if ctx.ring is not None and not isinstance(val, Series):
        return ctx.ring.const(val)
    return val
