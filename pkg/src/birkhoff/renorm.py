"""Regularized tree integrals and directional MZVs at non-positive arguments,
and their renormalized values through the Birkhoff decomposition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .exactalg import (
    CyclotomicFraction,
    QPoly,
    RationalFunction,
    SymbolicPoly,
    bernoulli,
    ratfunc_expand_at_one,
)
from .hopfconv import HopfContext, LinMap, birkhoff_decompose, tree_context, word_context
from .laurent import (
    DEFAULT_ORDER,
    LaurentSeries,
    PrecisionError,
    eval_at_zero,
    laurent_exp,
    pole_part,
    regular_part,
)
from .qshuffle import Letter, Word
from .trees import RootedForest, RootedTree, fold

__all__ = [
    "UnsupportedArgument",
    "sin_reciprocal_series",
    "tree_char",
    "tree_char_fold",
    "TreeIntegralChar",
    "NestedSumState",
    "mzv_partial_sum",
    "mzv_outer_sum",
    "mzv_rational_function",
    "mzv_char",
    "MzvChar",
    "renormalize",
    "naive_finite_part",
]

PI2 = SymbolicPoly.gen("PI2")
L = SymbolicPoly.gen("L")


class UnsupportedArgument(ValueError):
    """Word with a positive exponent s_i; only non-positive arguments are handled."""


# ---------------------------------------------------------------------------
# Tree integrals
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def sin_reciprocal_series(k: int, order: int) -> LaurentSeries:
    """pi / sin(k pi eps) through eps^order, coefficients in Q[PI2].

    Uses x/sin(x) = sum_n (-1)^(n+1) (2^(2n) - 2) B_2n x^(2n) / (2n)!.
    """
    if k < 1:
        raise ValueError("k must be positive")
    coeffs = {}
    n = 0
    fact = 1
    while 2 * n - 1 <= order:
        if n:
            fact *= (2 * n - 1) * (2 * n)
        c = Fraction((-1) ** (n + 1) * (2 ** (2 * n) - 2)) * bernoulli(2 * n) / fact
        # (k pi eps)^(2n) / (k eps)
        coeffs[2 * n - 1] = PI2**n * (c * Fraction(k) ** (2 * n - 1))
        n += 1
    return LaurentSeries(coeffs, order)


def _c_power(weight: int, order: int) -> LaurentSeries:
    """c^(-weight*eps) = exp(-weight * L * eps)."""
    return laurent_exp(LaurentSeries.exact({1: -weight * L}), order)


def _check_window(degree: int, order: int) -> None:
    if order < 0 or order < degree - 1:
        raise PrecisionError(
            f"order {order} too small for a forest of degree {degree} (need >= max(0, degree-1))")


def tree_char(forest: RootedForest | RootedTree, order: int = DEFAULT_ORDER) -> LaurentSeries:
    """f_F(c; eps) = c^(-|F| eps) * prod_v pi/sin(|T_v| pi eps), through eps^order."""
    if isinstance(forest, RootedTree):
        forest = RootedForest((forest,))
    d = forest.degree
    _check_window(d, order)
    if d == 0:
        return LaurentSeries.one()
    work = order + d
    acc = _c_power(d, work)
    for tree in forest:
        for size in tree.subtree_sizes():
            acc = acc * sin_reciprocal_series(size, work)
    return acc.truncate(order)


def tree_char_fold(forest: RootedForest | RootedTree, order: int = DEFAULT_ORDER) -> LaurentSeries:
    """Same character via the recursive integral: fold with the grafting step

    f(x; eps) -> int_0^oo f(x; eps) x^-eps dx / (x + c). Values are tracked as
    (A(eps), k) meaning A(eps) * c^(-k eps).
    """
    if isinstance(forest, RootedTree):
        forest = RootedForest((forest,))
    d = forest.degree
    _check_window(d, order)
    work = order + d

    def mul(u, v):
        return (u[0] * v[0], u[1] + v[1])

    def integrate(u):
        amp, k = u
        return (amp * sin_reciprocal_series(k + 1, work), k + 1)

    amp, k = fold(forest, (LaurentSeries.one(), 0), mul, integrate)
    return (amp * _c_power(k, work)).truncate(order) if k else amp


@dataclass
class TreeIntegralChar:
    order: int = DEFAULT_ORDER
    ctx: HopfContext = field(default_factory=tree_context)

    def linmap(self) -> LinMap:
        return LinMap(self.ctx, lambda f: tree_char(f, self.order), LaurentSeries.one(), "phi_tree")


# ---------------------------------------------------------------------------
# Directional regularized MZVs at non-positive arguments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NestedSumState:
    """sum over (b, d) of R_{b,d}(q) * n^b * q^(d n), as a function of n."""

    terms: tuple[tuple[tuple[int, int], CyclotomicFraction], ...]

    @classmethod
    def one(cls) -> NestedSumState:
        return cls((((0, 0), CyclotomicFraction(1)),))

    def as_dict(self) -> dict[tuple[int, int], RationalFunction]:
        return {k: v.to_rational_function() for k, v in self.terms}

    @classmethod
    def from_dict(cls, d: dict) -> NestedSumState:
        return cls(tuple(sorted(((k, v) for k, v in d.items() if v), key=lambda kv: kv[0])))

    def evaluate(self, n: int) -> RationalFunction:
        acc = RationalFunction(0)
        for (b, d), coeff in self.terms:
            acc = acc + coeff.to_rational_function() * RationalFunction.q_power(d * n) * (n**b)
        return acc


_ZERO = CyclotomicFraction(0)


@lru_cache(maxsize=None)
def _power_sum(j: int, d: int) -> tuple[CyclotomicFraction, tuple[CyclotomicFraction, ...]]:
    """sum_{m=1}^{n-1} m^j q^(d m) = A(q) + q^(d n) sum_i n^i B_i(q).

    Apply (1/d) q d/dq j times to (y - y^n)/(1 - y), y = q^d.
    """
    if j == 0:
        return (CyclotomicFraction.one_minus_q_power_inverse(d, QPoly.monomial(d)),
                (CyclotomicFraction.one_minus_q_power_inverse(d, -1),))
    a, bs = _power_sum(j - 1, d)
    inv_d = Fraction(1, d)
    new_a = (a.euler() * inv_d).reduced()
    new_bs = [_ZERO] * (len(bs) + 1)
    for i, b in enumerate(bs):
        new_bs[i + 1] = new_bs[i + 1] + b
        new_bs[i] = new_bs[i] + b.euler() * inv_d
    return new_a, tuple(b.reduced() for b in new_bs)


def mzv_partial_sum(state: NestedSumState, weight: tuple[int, int]) -> NestedSumState:
    """Sum the incoming terms (in m) times m^b q^(c m) over 1 <= m <= n-1."""
    b, c = weight
    if b < 0 or c < 1:
        raise ValueError("weight needs b >= 0 and c >= 1")
    out: dict[tuple[int, int], CyclotomicFraction] = {}
    for (j, d), coeff in state.terms:
        a, bs = _power_sum(j + b, d + c)
        out[(0, 0)] = out.get((0, 0), _ZERO) + coeff * a
        for i, bi in enumerate(bs):
            if bi:
                key = (i, d + c)
                out[key] = out.get(key, _ZERO) + coeff * bi
    return NestedSumState.from_dict({k: v.reduced() for k, v in out.items()})


def _outer_sum(state: NestedSumState, weight: tuple[int, int]) -> CyclotomicFraction:
    b, c = weight
    if b < 0 or c < 1:
        raise ValueError("weight needs b >= 0 and c >= 1")
    acc = _ZERO
    for (j, d), coeff in state.terms:
        acc = acc + coeff * _power_sum(j + b, d + c)[0]
    return acc


def mzv_outer_sum(state: NestedSumState, weight: tuple[int, int]) -> RationalFunction:
    """sum_{n >= 1} n^b q^(c n) * state(n); the q^(dn) tails vanish formally."""
    return _outer_sum(state, weight).to_rational_function()


def _word_weights(word: Word) -> tuple[list[tuple[int, int]], int]:
    for a in word:
        if a.s > 0:
            raise UnsupportedArgument(f"positive argument s={a.s} is not supported")
    scale = 1
    for a in word:
        scale = lcm(scale, a.r.denominator)
    return [(-a.s, int(a.r * scale)) for a in word], scale


@lru_cache(maxsize=None)
def mzv_rational_function(word: Word) -> tuple[RationalFunction, int]:
    """Z(word) as a rational function of q = e^(eps/D), together with D."""
    if not word:
        return RationalFunction(1), 1
    weights, scale = _word_weights(word)
    state = NestedSumState.one()
    # innermost summation variable belongs to the last letter
    for w in reversed(weights[1:]):
        state = mzv_partial_sum(state, w)
    return mzv_outer_sum(state, weights[0]), scale


@lru_cache(maxsize=None)
def mzv_char(word: Word, order: int = DEFAULT_ORDER) -> LaurentSeries:
    """Laurent expansion of the directional regularized MZV through eps^order."""
    word = tuple(word)
    if not word:
        return LaurentSeries.one()
    f, scale = mzv_rational_function(word)
    return ratfunc_expand_at_one(f, scale, order)


@dataclass
class MzvChar:
    order: int = DEFAULT_ORDER
    ctx: HopfContext = field(default_factory=word_context)

    def linmap(self) -> LinMap:
        return LinMap(self.ctx, lambda w: mzv_char(w, self.order), LaurentSeries.one(), "phi_mzv")


# ---------------------------------------------------------------------------
# Renormalized and naive values
# ---------------------------------------------------------------------------

_DECOMPOSITIONS: dict = {}


def _decomposition(kind: str, order: int):
    key = (kind, order)
    if key not in _DECOMPOSITIONS:
        phi = _character(kind, order)
        _DECOMPOSITIONS[key] = (phi,) + birkhoff_decompose(phi, pole_part)
    return _DECOMPOSITIONS[key]


def _character(kind: str, order: int) -> LinMap:
    if kind == "tree":
        return TreeIntegralChar(order).linmap()
    if kind == "mzv":
        return MzvChar(order).linmap()
    raise ValueError(f"unknown kind {kind!r} (expected 'tree' or 'mzv')")


def _normalize(kind: str, value):
    if kind == "tree":
        return value if isinstance(value, SymbolicPoly) else SymbolicPoly(value)
    if isinstance(value, SymbolicPoly):
        return value.constant()
    return Fraction(value)


def _coerce_element(kind: str, element):
    if kind == "tree" and isinstance(element, RootedTree):
        return RootedForest((element,))
    if kind == "mzv":
        return tuple(element)
    return element


def birkhoff_parts(kind: str, element, order: int = DEFAULT_ORDER) -> tuple[LaurentSeries, LaurentSeries, LaurentSeries]:
    """(phi(x), phi_-(x), phi_+(x)) for a forest or word."""
    element = _coerce_element(kind, element)
    phi, minus, plus = _decomposition(kind, order)
    return phi(element), minus(element), plus(element)


def renormalize(kind: str, element, order: int = DEFAULT_ORDER):
    """Renormalized value: phi_+(element) at eps = 0."""
    _, _, plus = birkhoff_parts(kind, element, order)
    return _normalize(kind, eval_at_zero(plus))


def naive_finite_part(kind: str, element, order: int = DEFAULT_ORDER):
    """(id - pole_part)(phi(element)) at eps = 0, with no subdivergence subtraction."""
    element = _coerce_element(kind, element)
    phi = _character(kind, order)
    return _normalize(kind, eval_at_zero(regular_part(phi(element))))


def mzv_letter(s: int, r=1) -> Letter:
    return Letter(s, Fraction(r))
