"""Convolution algebra Hom(H, A) over a connected filtered cograded Hopf algebra.

H is described by a :class:`HopfContext` (tree forests or words); linear maps
are :class:`LinMap` objects evaluated lazily on basis elements and memoized.
The target A only needs ``+``, ``*`` and multiplication by rationals, so the
same machinery serves Laurent-valued characters and H-valued maps such as the
identity and the antipode.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator

from . import qshuffle, trees
from .laurent import pole_part

__all__ = [
    "HopfContext",
    "HElement",
    "LinMap",
    "tree_context",
    "word_context",
    "counit_map",
    "identity_map",
    "convolve",
    "conv_power",
    "conv_inverse",
    "conv_exp",
    "conv_log",
    "antipode",
    "antipode_geometric",
    "is_character",
    "is_derivation",
    "birkhoff_decompose",
]


class HopfContext:
    """Basis-level description of a connected filtered cograded Hopf algebra."""

    def __init__(self, name: str, unit: Hashable, degree: Callable[[Any], int],
                 product: Callable[[Any, Any], Counter], reduced_coproduct: Callable[[Any], Counter],
                 basis: Callable[[int], list], render: Callable[[Any], str] = str):
        self.name = name
        self.unit = unit
        self.degree = degree
        self._product = product
        self._reduced = reduced_coproduct
        self._basis = basis
        self.render = render
        self._reduced_cache: dict = {}
        self._antipode_cache: dict = {}

    def is_unit(self, x) -> bool:
        return x == self.unit

    def product(self, x, y) -> Counter:
        if self.is_unit(x):
            return Counter({y: 1})
        if self.is_unit(y):
            return Counter({x: 1})
        return self._product(x, y)

    def reduced_coproduct(self, x) -> Counter:
        if self.is_unit(x):
            raise ValueError("reduced coproduct of the unit")
        try:
            return self._reduced_cache[x]
        except KeyError:
            out = self._reduced(x)
            self._reduced_cache[x] = out
            return out

    def coproduct(self, x) -> Counter:
        if self.is_unit(x):
            return Counter({(self.unit, self.unit): 1})
        out = Counter(self.reduced_coproduct(x))
        out[(x, self.unit)] += 1
        out[(self.unit, x)] += 1
        return out

    def basis(self, n: int) -> list:
        return list(self._basis(n))

    def basis_upto(self, n: int, include_unit: bool = True) -> Iterator:
        for d in range(0 if include_unit else 1, n + 1):
            yield from self.basis(d)

    def element(self, terms: dict | Hashable) -> HElement:
        if isinstance(terms, dict):
            return HElement(self, terms)
        return HElement(self, {terms: 1})

    def __repr__(self) -> str:
        return f"HopfContext({self.name!r})"


def tree_context() -> HopfContext:
    return HopfContext(
        "tree",
        trees.UNIT,
        degree=lambda f: f.degree,
        product=lambda f, g: Counter({f * g: 1}),
        reduced_coproduct=trees.reduced_coproduct,
        basis=trees.forests_of_degree,
        render=trees.render_forest,
    )


def word_context(alphabet: Iterable = (), merge=qshuffle.letter_merge) -> HopfContext:
    alphabet = tuple(alphabet)

    def basis(n: int) -> list:
        if n and not alphabet:
            raise ValueError("word basis enumeration needs a finite alphabet")
        return qshuffle.words_of_length(alphabet, n)

    return HopfContext(
        "word",
        qshuffle.EMPTY,
        degree=len,
        product=lambda u, w: qshuffle.quasi_shuffle(u, w, merge),
        reduced_coproduct=qshuffle.reduced_deconcat,
        basis=basis,
        render=qshuffle.render_word,
    )


class HElement:
    """Finite linear combination of basis elements of H."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: HopfContext, terms: dict):
        self.ctx = ctx
        self.terms = {k: v for k, v in terms.items() if v}

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HElement(self.ctx, {self.ctx.unit: other})
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return HElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> HElement:
        return HElement(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HElement(self.ctx, {k: v * other for k, v in self.terms.items()})
        out: dict = {}
        for x, a in self.terms.items():
            for y, b in other.terms.items():
                for z, c in self.ctx.product(x, y).items():
                    out[z] = out.get(z, 0) + a * b * c
        return HElement(self.ctx, out)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = HElement(self.ctx, {self.ctx.unit: other})
        return isinstance(other, HElement) and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        items = sorted(self.terms.items(), key=lambda kv: (self.ctx.degree(kv[0]), self.ctx.render(kv[0])))
        if not items:
            return "0"
        parts = []
        for i, (x, c) in enumerate(items):
            body = self.ctx.render(x)
            if abs(c) != 1:
                mag = abs(Fraction(c))
                body = f"{mag}*{body}"
            if i == 0:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"HElement({self})"


class LinMap:
    """Linear map H -> A given on basis elements, memoized.

    ``one`` is the unit of A. Calling the map on an :class:`HElement` or a
    ``{basis: coeff}`` dict applies the linear extension.
    """

    def __init__(self, ctx: HopfContext, rule: Callable[[Any], Any], one: Any = Fraction(1),
                 name: str = "f"):
        self.ctx = ctx
        self.rule = rule
        self.one = one
        self.zero = one * 0
        self.name = name
        self._memo: dict = {}

    def __call__(self, x):
        if isinstance(x, HElement):
            x = x.terms
        if isinstance(x, dict):
            acc = self.zero
            for b, c in x.items():
                acc = acc + self(b) * c
            return acc
        try:
            return self._memo[x]
        except KeyError:
            val = self.rule(x)
            self._memo[x] = val
            return val

    def cached(self) -> dict:
        return dict(self._memo)

    # carrier arithmetic: pointwise sum, convolution product
    def __add__(self, other: LinMap) -> LinMap:
        return LinMap(self.ctx, lambda x: self(x) + other(x), self.one, f"({self.name}+{other.name})")

    def __neg__(self) -> LinMap:
        return LinMap(self.ctx, lambda x: -self(x), self.one, f"-{self.name}")

    def __sub__(self, other: LinMap) -> LinMap:
        return LinMap(self.ctx, lambda x: self(x) - other(x), self.one, f"({self.name}-{other.name})")

    def __mul__(self, other):
        if isinstance(other, LinMap):
            return convolve(self, other)
        return LinMap(self.ctx, lambda x: self(x) * other, self.one, self.name)

    def __rmul__(self, other):
        return LinMap(self.ctx, lambda x: self(x) * other, self.one, self.name)

    def __repr__(self) -> str:
        return f"LinMap({self.name}, {self.ctx.name})"


def counit_map(ctx: HopfContext, one: Any = Fraction(1)) -> LinMap:
    """e = unit_A ∘ counit."""
    zero = one * 0
    return LinMap(ctx, lambda x: one if ctx.is_unit(x) else zero, one, "e")


def identity_map(ctx: HopfContext) -> LinMap:
    return LinMap(ctx, lambda x: ctx.element(x), ctx.element(ctx.unit), "id")


def convolve(f: LinMap, g: LinMap) -> LinMap:
    ctx = f.ctx

    def rule(x):
        if ctx.is_unit(x):
            return f(x) * g(x)
        u = ctx.unit
        acc = f(u) * g(x) + f(x) * g(u)
        for (a, b), c in ctx.reduced_coproduct(x).items():
            acc = acc + (f(a) * g(b)) * c
        return acc

    return LinMap(ctx, rule, f.one, f"({f.name}*{g.name})")


def conv_power(f: LinMap, k: int) -> LinMap:
    out = counit_map(f.ctx, f.one)
    for _ in range(k):
        out = convolve(out, f)
    return out


def _nilpotent_series(f: LinMap, coeff: Callable[[int], Fraction], name: str) -> LinMap:
    """sum_k coeff(k) f^{*k}, finite on each basis element since f(1) = 0."""
    ctx = f.ctx
    powers = [counit_map(ctx, f.one)]

    def rule(x):
        n = ctx.degree(x)
        while len(powers) <= n:
            powers.append(convolve(powers[-1], f))
        acc = f.zero
        for k in range(n + 1):
            c = coeff(k)
            if c:
                acc = acc + powers[k](x) * c
        return acc

    return LinMap(ctx, rule, f.one, name)


def _is_zero(v) -> bool:
    return not v


def conv_exp(f: LinMap) -> LinMap:
    if not _is_zero(f(f.ctx.unit)):
        raise ValueError("conv_exp needs f(1) = 0")
    fact = [Fraction(1)]

    def coeff(k):
        while len(fact) <= k:
            fact.append(fact[-1] * len(fact))
        return 1 / fact[k]

    return _nilpotent_series(f, coeff, f"exp({f.name})")


def conv_log(g: LinMap) -> LinMap:
    u = g.ctx.unit
    if not _is_zero(g(u) - g.one):
        raise ValueError("conv_log needs g(1) = 1")
    h = g - counit_map(g.ctx, g.one)
    return _nilpotent_series(h, lambda k: Fraction((-1) ** (k + 1), k) if k else Fraction(0), f"log({g.name})")


def conv_inverse(g: LinMap) -> LinMap:
    """g^{*-1} for g(1) = 1, as the geometric series in (e - g)."""
    u = g.ctx.unit
    if not _is_zero(g(u) - g.one):
        raise ValueError("conv_inverse needs g(1) = 1")
    h = counit_map(g.ctx, g.one) - g
    return _nilpotent_series(h, lambda k: Fraction(1), f"inv({g.name})")


def antipode(ctx: HopfContext, x) -> HElement:
    """S(x) = -x - sum S(x') x''; S(1) = 1."""
    memo = ctx._antipode_cache
    if x in memo:
        return memo[x]
    if ctx.is_unit(x):
        out = ctx.element(x)
    else:
        out = -ctx.element(x)
        for (a, b), c in ctx.reduced_coproduct(x).items():
            out = out - (antipode(ctx, a) * ctx.element(b)) * c
    memo[x] = out
    return out


def antipode_geometric(ctx: HopfContext, x) -> HElement:
    """S(x) = sum_{k=0}^{deg x} (e - id)^{*k}(x)."""
    ident = identity_map(ctx)
    f = counit_map(ctx, ident.one) - ident
    return _nilpotent_series(f, lambda k: Fraction(1), "S_geom")(x)


def _pairs(ctx: HopfContext, bound: int) -> Iterator[tuple[Any, Any]]:
    for dx in range(1, bound):
        for dy in range(1, bound - dx + 1):
            for x in ctx.basis(dx):
                for y in ctx.basis(dy):
                    yield x, y


def is_character(f: LinMap, bound: int) -> bool:
    ctx = f.ctx
    if not f(ctx.unit) == f.one:
        return False
    for x, y in _pairs(ctx, bound):
        if not f(ctx.product(x, y)) == f(x) * f(y):
            return False
    return True


def is_derivation(f: LinMap, bound: int) -> bool:
    """f(xy) = e(x) f(y) + e(y) f(x); on non-unit x, y this reads f(xy) = 0."""
    ctx = f.ctx
    if not _is_zero(f(ctx.unit)):
        return False
    for x, y in _pairs(ctx, bound):
        if not _is_zero(f(ctx.product(x, y))):
            return False
    return True


def birkhoff_decompose(phi: LinMap, pole_op: Callable = pole_part) -> tuple[LinMap, LinMap]:
    """Algebraic Birkhoff decomposition phi = phi_-^{*-1} * phi_+.

    phi_-(x) = -Q(phi(x) + sum phi_-(x') phi(x'')), phi_+(x) = (id - Q)(same).
    """
    ctx = phi.ctx
    bar: dict = {}

    def prepared(x):
        # phi(x) + sum phi_-(x') phi(x'')
        if x not in bar:
            acc = phi(x)
            for (a, b), c in ctx.reduced_coproduct(x).items():
                acc = acc + (minus(a) * phi(b)) * c
            bar[x] = acc
        return bar[x]

    def minus_rule(x):
        if ctx.is_unit(x):
            return phi.one
        return -pole_op(prepared(x))

    def plus_rule(x):
        if ctx.is_unit(x):
            return phi.one
        v = prepared(x)
        return v - pole_op(v)

    minus = LinMap(ctx, minus_rule, phi.one, f"{phi.name}_-")
    plus = LinMap(ctx, plus_rule, phi.one, f"{phi.name}_+")
    return minus, plus
