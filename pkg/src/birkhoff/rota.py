"""Rota-Baxter operators, Atkinson factorization, the BCH recursion and the
identities of Spitzer and Kingman.

Operators act on a :class:`Carrier`, a small description of the ambient
algebra: its unit and zero, an exact equality and, for complete filtered
algebras, truncation modulo R_n and the order function o(x).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from math import factorial
from typing import Any, Callable, Iterable, Sequence

from .hopfconv import HopfContext, LinMap, counit_map
from .laurent import LaurentSeries, pole_part

__all__ = [
    "Carrier",
    "RBOperator",
    "SeqElement",
    "XSeries",
    "FreeNCSeries",
    "laurent_carrier",
    "sequence_carrier",
    "xseries_carrier",
    "hom_carrier",
    "pole_projection",
    "partial_sum_operator",
    "shifted_partial_sum_operator",
    "scalar_operator",
    "coefficientwise_operator",
    "pointwise_operator",
    "rb_axiom_check",
    "complement_identity_check",
    "kingman_check",
    "carrier_exp",
    "carrier_log",
    "carrier_inverse",
    "AtkinsonResult",
    "atkinson_solve",
    "bch_series",
    "bch_eval",
    "bch_chi",
    "SpitzerResult",
    "spitzer_check",
]


@dataclass
class Carrier:
    name: str
    one: Any
    zero: Any
    equal: Callable[[Any, Any], bool] = lambda x, y: x == y
    # complete filtered carriers only
    truncate: Callable[[Any, int], Any] | None = None
    order: Callable[[Any, int], float] | None = None

    @property
    def filtered(self) -> bool:
        return self.truncate is not None

    def equal_mod(self, x, y, n: int) -> bool:
        """x == y modulo R_n."""
        return self.order(x - y, n) >= n

    def lincomb(self, pairs: Iterable[tuple[Any, Any]]):
        acc = self.zero
        for c, x in pairs:
            acc = acc + x * c
        return acc


@dataclass
class RBOperator:
    carrier: Carrier
    action: Callable[[Any], Any]
    weight: Fraction
    idempotent: bool = False
    name: str = "P"

    def __call__(self, x):
        return self.action(x)

    def complement(self) -> RBOperator:
        """P~ = -weight * id - P, again a Rota-Baxter operator of the same weight."""
        lam = Fraction(self.weight)
        return RBOperator(self.carrier, lambda x: x * (-lam) - self.action(x), lam,
                          self.idempotent, f"{self.name}~")


# ---------------------------------------------------------------------------
# Carriers
# ---------------------------------------------------------------------------


def laurent_carrier() -> Carrier:
    return Carrier("laurent", LaurentSeries.one(), LaurentSeries.zero())


class SeqElement:
    """Sequence (a_1, ..., a_W) with termwise operations."""

    __slots__ = ("v",)

    def __init__(self, values: Iterable):
        self.v = tuple(Fraction(x) for x in values)

    def __add__(self, o: SeqElement) -> SeqElement:
        return SeqElement(a + b for a, b in zip(self.v, o.v))

    def __sub__(self, o: SeqElement) -> SeqElement:
        return SeqElement(a - b for a, b in zip(self.v, o.v))

    def __neg__(self) -> SeqElement:
        return SeqElement(-a for a in self.v)

    def __mul__(self, o):
        if isinstance(o, SeqElement):
            return SeqElement(a * b for a, b in zip(self.v, o.v))
        return SeqElement(a * o for a in self.v)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> SeqElement:
        return SeqElement(a**n for a in self.v)

    def __eq__(self, o) -> bool:
        return isinstance(o, SeqElement) and self.v == o.v

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SeqElement({[str(a) for a in self.v]})"


def sequence_carrier(window: int = 16) -> Carrier:
    return Carrier(f"seq[{window}]", SeqElement([1] * window), SeqElement([0] * window))


class XSeries:
    """Power series sum_{k <= N} a_k x^k over a coefficient ring, modulo x^(N+1)."""

    __slots__ = ("c", "zero")

    def __init__(self, coeffs: Sequence, degree: int, zero: Any = Fraction(0)):
        c = list(coeffs)[: degree + 1]
        c += [zero] * (degree + 1 - len(c))
        self.c = tuple(c)
        self.zero = zero

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def _like(self, coeffs) -> XSeries:
        return XSeries(coeffs, self.degree, self.zero)

    def __add__(self, o: XSeries) -> XSeries:
        return self._like(a + b for a, b in zip(self.c, o.c))

    def __sub__(self, o: XSeries) -> XSeries:
        return self._like(a - b for a, b in zip(self.c, o.c))

    def __neg__(self) -> XSeries:
        return self._like(-a for a in self.c)

    def __mul__(self, o):
        if not isinstance(o, XSeries):
            return self._like(a * o for a in self.c)
        n = self.degree
        out = [self.zero] * (n + 1)
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = o.c[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return self._like(out)

    __rmul__ = __mul__

    def valuation(self) -> float:
        for i, a in enumerate(self.c):
            if a:
                return i
        return float("inf")

    def __repr__(self) -> str:
        return f"XSeries({list(map(str, self.c))})"


def xseries_carrier(degree: int, coeff_one: Any = Fraction(1), coeff_zero: Any = None,
                    coeff_equal: Callable[[Any, Any], bool] = lambda a, b: a == b) -> Carrier:
    """A[[x]] modulo x^(degree+1), filtered by powers of x."""
    zero_c = coeff_one * 0 if coeff_zero is None else coeff_zero

    def truncate(s: XSeries, n: int) -> XSeries:
        return XSeries([a if i < n else zero_c for i, a in enumerate(s.c)], s.degree, zero_c)

    def order(s: XSeries, bound: int) -> float:
        for i, a in enumerate(s.c[: bound + 1]):
            if not coeff_equal(a, zero_c):
                return i
        return float("inf")

    def equal(s: XSeries, t: XSeries) -> bool:
        return all(coeff_equal(a, b) for a, b in zip(s.c, t.c))

    return Carrier(f"A[[x]]/x^{degree + 1}", XSeries([coeff_one], degree, zero_c),
                   XSeries([], degree, zero_c), equal, truncate, order)


def hom_carrier(ctx: HopfContext, one: Any = None) -> Carrier:
    """Hom(H, A) with convolution, filtered by R_n = {f : f vanishes below degree n}."""
    if one is None:
        one = LaurentSeries.one()
    e = counit_map(ctx, one)
    zero = LinMap(ctx, lambda x: one * 0, one, "0")

    def truncate(f: LinMap, n: int) -> LinMap:
        # materialize on degrees < n; keeps evaluation chains shallow
        table = {x: f(x) for x in ctx.basis_upto(n - 1)}
        z = one * 0
        return LinMap(ctx, lambda x: table[x] if x in table else z, one, f.name)

    def order(f: LinMap, bound: int) -> float:
        for x in ctx.basis_upto(bound):
            if f(x):
                return ctx.degree(x)
        return float("inf")

    def equal(f: LinMap, g: LinMap) -> bool:
        raise TypeError("linear maps compare only modulo a filtration degree; use equal_mod")

    def lincomb(pairs):
        pairs = list(pairs)
        return LinMap(ctx, lambda x: _sum((g(x) * c for c, g in pairs), one * 0), one, "lincomb")

    carrier = Carrier(f"Hom({ctx.name},A)", e, zero, equal, truncate, order)
    carrier.lincomb = lincomb  # type: ignore[method-assign]
    return carrier


def _sum(values, zero):
    acc = zero
    for v in values:
        acc = acc + v
    return acc


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------


def pole_projection() -> RBOperator:
    return RBOperator(laurent_carrier(), pole_part, Fraction(-1), True, "Q")


def partial_sum_operator(window: int = 16) -> RBOperator:
    def action(a: SeqElement) -> SeqElement:
        out, acc = [], Fraction(0)
        for x in a.v:
            acc += x
            out.append(acc)
        return SeqElement(out)

    return RBOperator(sequence_carrier(window), action, Fraction(-1), False, "Sum")


def shifted_partial_sum_operator(window: int = 16) -> RBOperator:
    def action(a: SeqElement) -> SeqElement:
        out, acc = [], Fraction(0)
        for x in a.v:
            out.append(acc)
            acc += x
        return SeqElement(out)

    return RBOperator(sequence_carrier(window), action, Fraction(1), False, "Sum'")


def scalar_operator(weight, carrier: Carrier | None = None) -> RBOperator:
    """P(a) = -weight * a."""
    lam = Fraction(weight)
    carrier = carrier or laurent_carrier()
    return RBOperator(carrier, lambda a: a * (-lam), lam, lam in (0, -1), f"P_{lam}")


def coefficientwise_operator(base: RBOperator, degree: int) -> RBOperator:
    """Apply ``base`` to every x-coefficient of A[[x]]."""
    c = base.carrier
    carrier = xseries_carrier(degree, c.one, c.zero, c.equal)
    return RBOperator(carrier, lambda s: s._like(base(a) for a in s.c), base.weight,
                      base.idempotent, f"{base.name}[[x]]")


def pointwise_operator(ctx: HopfContext, base: Callable = pole_part, one: Any = None,
                       weight=-1, idempotent: bool = True) -> RBOperator:
    """P(f)(x) = base(f(x)) on Hom(H, A)."""
    carrier = hom_carrier(ctx, one)
    return RBOperator(carrier, lambda f: LinMap(ctx, lambda x: base(f(x)), f.one, f"P({f.name})"),
                      Fraction(weight), idempotent, "P")


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------


def rb_axiom_check(P: RBOperator, x, y) -> bool:
    """P(x)P(y) = P(xP(y)) + P(P(x)y) + weight P(xy)."""
    lhs = P(x) * P(y)
    rhs = P(x * P(y)) + P(P(x) * y) + P(x * y) * P.weight
    return P.carrier.equal(lhs, rhs)


def complement_identity_check(P: RBOperator, x, y) -> bool:
    """P(x)P~(y) = P(xP~(y)) + P~(P(x)y) and P~(x)P(y) = P(P~(x)y) + P~(xP(y))."""
    Pt = P.complement()
    eq = P.carrier.equal
    return (eq(P(x) * Pt(y), P(x * Pt(y)) + Pt(P(x) * y))
            and eq(Pt(x) * P(y), P(Pt(x) * y) + Pt(x * P(y))))


def _require_weight_minus_one(P: RBOperator) -> None:
    if Fraction(P.weight) != -1:
        raise ValueError(f"operator weight must be -1, got {P.weight}")


def kingman_check(P: RBOperator, u, n: int) -> bool:
    """P(u)^n = P(P(u)^n - (-P~(u))^n) for weight -1."""
    _require_weight_minus_one(P)
    if n < 1:
        raise ValueError("n must be positive")
    pu = P(u)
    mpt = -P.complement()(u)
    pn, tn = pu, mpt
    for _ in range(n - 1):
        pn, tn = pn * pu, tn * mpt
    return P.carrier.equal(pn, P(pn - tn))


# ---------------------------------------------------------------------------
# Complete filtered algebras
# ---------------------------------------------------------------------------


def _require_filtered(C: Carrier) -> None:
    if not C.filtered:
        raise ValueError(f"carrier {C.name} is not a complete filtered algebra")


def _require_positive_order(C: Carrier, a, order: int, what: str = "a") -> None:
    if C.order(a, order) < 1:
        raise ValueError(f"{what} must lie in R_1 (o({what}) >= 1); the iteration would not contract")


def carrier_exp(C: Carrier, x, order: int):
    """exp(x) modulo R_(order+1), x in R_1."""
    _require_filtered(C)
    terms = [C.one]
    for k in range(1, order + 1):
        terms.append(C.truncate(terms[-1] * x, order + 1))
    return C.truncate(C.lincomb((Fraction(1, factorial(k)), t) for k, t in enumerate(terms)), order + 1)


def carrier_log(C: Carrier, u, order: int):
    """log(u) modulo R_(order+1), u in 1 + R_1."""
    _require_filtered(C)
    y = u - C.one
    terms = [y]
    for _ in range(2, order + 1):
        terms.append(C.truncate(terms[-1] * y, order + 1))
    return C.truncate(C.lincomb((Fraction((-1) ** (k + 1), k), t) for k, t in enumerate(terms, 1)),
                      order + 1)


def carrier_inverse(C: Carrier, u, order: int):
    """u^(-1) modulo R_(order+1) for u in 1 + R_1."""
    _require_filtered(C)
    y = C.one - u
    acc, term = C.one, C.one
    for _ in range(order):
        term = C.truncate(term * y, order + 1)
        acc = acc + term
    return C.truncate(acc, order + 1)


@dataclass
class AtkinsonResult:
    left: Any
    right: Any
    iterations: int
    # o(b_{n+1} - b_n) along the left iteration
    left_steps: list = field(default_factory=list)
    right_steps: list = field(default_factory=list)

    def check(self, P: RBOperator, a, order: int) -> bool:
        """b_l (1 + weight a) b_r = 1 modulo R_(order+1)."""
        C = P.carrier
        prod = self.left * (C.one + a * P.weight) * self.right
        return C.equal_mod(prod, C.one, order + 1)


def _fixed_point(C: Carrier, step: Callable, start, order: int) -> tuple[Any, int, list]:
    n = order + 1
    cur = C.truncate(start, n)
    steps = []
    for it in range(1, order + 3):
        nxt = C.truncate(step(cur), n)
        o = C.order(nxt - cur, order)
        steps.append(o)
        if o >= n:
            return nxt, it, steps
        cur = nxt
    raise RuntimeError("fixed-point iteration did not stabilize within order+2 steps")


def atkinson_solve(P: RBOperator, a, order: int, initial_left=None, initial_right=None) -> AtkinsonResult:
    """Solve b_l = 1 + P(b_l a) and b_r = 1 + P~(a b_r) modulo R_(order+1)."""
    C = P.carrier
    _require_filtered(C)
    _require_positive_order(C, a, order)
    Pt = P.complement()
    left, it_l, steps_l = _fixed_point(C, lambda b: C.one + P(b * a),
                                       C.one if initial_left is None else initial_left, order)
    right, it_r, steps_r = _fixed_point(C, lambda b: C.one + Pt(a * b),
                                        C.one if initial_right is None else initial_right, order)
    return AtkinsonResult(left, right, max(it_l, it_r), steps_l, steps_r)


# ---------------------------------------------------------------------------
# Free noncommutative series and BCH
# ---------------------------------------------------------------------------


class FreeNCSeries:
    """Element of Q<<x, y>> modulo words of length > degree."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms: dict[tuple[str, ...], Any] | None = None, degree: int = 6):
        self.degree = degree
        self.terms = {tuple(w): Fraction(c) for w, c in (terms or {}).items() if c and len(w) <= degree}

    @classmethod
    def gen(cls, name: str, degree: int) -> FreeNCSeries:
        return cls({(name,): 1}, degree)

    @classmethod
    def one(cls, degree: int) -> FreeNCSeries:
        return cls({(): 1}, degree)

    def __add__(self, o: FreeNCSeries) -> FreeNCSeries:
        out = dict(self.terms)
        for w, c in o.terms.items():
            out[w] = out.get(w, 0) + c
        return FreeNCSeries(out, min(self.degree, o.degree))

    def __neg__(self) -> FreeNCSeries:
        return FreeNCSeries({w: -c for w, c in self.terms.items()}, self.degree)

    def __sub__(self, o: FreeNCSeries) -> FreeNCSeries:
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, FreeNCSeries):
            return FreeNCSeries({w: c * o for w, c in self.terms.items()}, self.degree)
        deg = min(self.degree, o.degree)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in o.terms.items():
                if len(w1) + len(w2) <= deg:
                    w = w1 + w2
                    out[w] = out.get(w, 0) + c1 * c2
        return FreeNCSeries(out, deg)

    __rmul__ = __mul__

    def homogeneous(self, k: int) -> dict[tuple[str, ...], Fraction]:
        return {w: c for w, c in self.terms.items() if len(w) == k}

    def exp(self) -> FreeNCSeries:
        if () in self.terms:
            raise ValueError("exp needs zero constant term")
        acc = term = FreeNCSeries.one(self.degree)
        for k in range(1, self.degree + 1):
            term = term * self * Fraction(1, k)
            acc = acc + term
        return acc

    def log(self) -> FreeNCSeries:
        if self.terms.get((), 0) != 1:
            raise ValueError("log needs constant term 1")
        y = self - FreeNCSeries.one(self.degree)
        acc, term = FreeNCSeries({}, self.degree), FreeNCSeries.one(self.degree)
        for k in range(1, self.degree + 1):
            term = term * y
            acc = acc + term * Fraction((-1) ** (k + 1), k)
        return acc

    def __eq__(self, o) -> bool:
        return isinstance(o, FreeNCSeries) and self.terms == o.terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        items = sorted(self.terms.items(), key=lambda wc: (len(wc[0]), wc[0]))
        return "FreeNCSeries(" + " + ".join(f"{c}*{''.join(w) or '1'}" for w, c in items) + ")"


def commutator(a: FreeNCSeries, b: FreeNCSeries) -> FreeNCSeries:
    return a * b - b * a


_BCH_CACHE: dict[int, FreeNCSeries] = {}


def bch_series(order: int) -> FreeNCSeries:
    """BCH(x, y) = log(exp(x) exp(y)) - x - y through words of length ``order``."""
    if order < 2:
        raise ValueError("order must be at least 2")
    if order not in _BCH_CACHE:
        x = FreeNCSeries.gen("x", order)
        y = FreeNCSeries.gen("y", order)
        _BCH_CACHE[order] = (x.exp() * y.exp()).log() - x - y
    return _BCH_CACHE[order]


def bch_eval(C: Carrier, X, Y, order: int):
    """Substitute X, Y in R_1 into BCH, modulo R_(order+1)."""
    series = bch_series(max(order, 2))
    prefix: dict[tuple[str, ...], Any] = {(): C.one}

    def word_value(w):
        if w not in prefix:
            head = word_value(w[:-1])
            prefix[w] = C.truncate(head * (X if w[-1] == "x" else Y), order + 1)
        return prefix[w]

    return C.truncate(C.lincomb((c, word_value(w)) for w, c in series.terms.items() if len(w) <= order),
                      order + 1)


def bch_chi(P: RBOperator, u, order: int):
    """The unique chi(u) = u - BCH(P(chi(u)), P~(chi(u))), modulo R_(order+1)."""
    _require_weight_minus_one(P)
    C = P.carrier
    _require_filtered(C)
    _require_positive_order(C, u, order, "u")
    Pt = P.complement()
    chi, _, _ = _fixed_point(C, lambda c: u - bch_eval(C, P(c), Pt(c), order), u, order)
    return chi


@dataclass
class SpitzerResult:
    holds: bool
    lhs: Any
    rhs: Any

    def __bool__(self) -> bool:
        return self.holds


def spitzer_check(P: RBOperator, a, order: int) -> SpitzerResult:
    """sum_n (Pa)^[n] = exp(-P(chi(log(1 - a)))) modulo R_(order+1), weight -1."""
    _require_weight_minus_one(P)
    C = P.carrier
    _require_filtered(C)
    _require_positive_order(C, a, order)
    n = order + 1
    term, terms = C.one, [C.one]
    for _ in range(order):
        term = C.truncate(P(term * a), n)
        terms.append(term)
    lhs = C.truncate(C.lincomb((1, t) for t in terms), n)
    u = carrier_log(C, C.one - a, order)
    chi = bch_chi(P, u, order)
    rhs = carrier_exp(C, -P(chi), order)
    return SpitzerResult(C.equal_mod(lhs, rhs, n), lhs, rhs)
