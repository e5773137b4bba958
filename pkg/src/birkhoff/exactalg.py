"""Exact arithmetic: Bernoulli numbers, the symbolic coefficient ring Q[PI2, L],
univariate polynomials and rational functions over Q.

Rationals are :class:`fractions.Fraction` throughout.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping, Union

__all__ = [
    "GENERATORS",
    "SymbolicPoly",
    "QPoly",
    "RationalFunction",
    "CyclotomicFraction",
    "cyclotomic",
    "PoleOrderError",
    "bernoulli",
    "zeta_nonpositive",
    "ratfunc_expand_at_one",
    "format_rational",
    "format_coeff",
    "parse_coeff",
]

#: Closed generator registry. PI2 stands for pi**2, L for ln(c).
GENERATORS: tuple[str, ...] = ("PI2", "L")

Number = Union[int, Fraction]

# Bound on the order of the pole at q = 1 accepted by ratfunc_expand_at_one.
MAX_POLE_ORDER = 64


class PoleOrderError(ValueError):
    """Raised when a rational function has a pole at q=1 beyond the configured bound."""


def format_rational(x: Number) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """B_k with the convention eps/(e^eps - 1) = sum B_k eps^k / k!, so B_1 = -1/2."""
    if k < 0:
        raise ValueError("bernoulli index must be non-negative")
    if k == 0:
        return Fraction(1)
    # sum_{j=0}^{k} C(k+1, j) B_j = 0
    acc = sum(comb(k + 1, j) * bernoulli(j) for j in range(k))
    return -acc / (k + 1)


def zeta_nonpositive(k: int) -> Fraction:
    """zeta(-k) = (-1)^k B_{k+1} / (k+1) for k >= 0."""
    if k < 0:
        raise ValueError("argument -k must be non-positive")
    return (-1) ** k * bernoulli(k + 1) / (k + 1)


# ---------------------------------------------------------------------------
# SymbolicPoly: Q[PI2, L]
# ---------------------------------------------------------------------------

Monomial = tuple  # exponent vector aligned with GENERATORS


def _zero_mono() -> Monomial:
    return (0,) * len(GENERATORS)


class SymbolicPoly:
    """Polynomial with rational coefficients in the registered generators.

    Immutable. Interoperates with ``int`` and ``Fraction`` on either side of
    ``+``, ``-``, ``*`` and ``==``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | Number | None = None):
        if terms is None:
            clean: dict[Monomial, Fraction] = {}
        elif isinstance(terms, (int, Fraction)):
            clean = {_zero_mono(): Fraction(terms)} if terms else {}
        else:
            clean = {}
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != len(GENERATORS) or any(e < 0 for e in mono):
                    raise ValueError(f"bad exponent vector {mono!r}")
                if c:
                    clean[mono] = Fraction(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def gen(cls, name: str, power: int = 1) -> SymbolicPoly:
        if name not in GENERATORS:
            raise ValueError(f"unknown generator {name!r}; registry is {GENERATORS}")
        mono = [0] * len(GENERATORS)
        mono[GENERATORS.index(name)] = power
        return cls({tuple(mono): 1})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_constant(self) -> bool:
        return all(m == _zero_mono() for m in self._terms)

    def constant(self) -> Fraction:
        return self._terms.get(_zero_mono(), Fraction(0))

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @staticmethod
    def _coerce(other) -> SymbolicPoly | None:
        if isinstance(other, SymbolicPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return SymbolicPoly(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            out[m] = out.get(m, 0) + c
        return SymbolicPoly(out)

    __radd__ = __add__

    def __neg__(self) -> SymbolicPoly:
        return SymbolicPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymbolicPoly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, SymbolicPoly):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return SymbolicPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> SymbolicPoly:
        if n < 0:
            raise ValueError("negative power")
        out = SymbolicPoly(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        def key(item):
            mono = item[0]
            return (-sum(mono), _mono_str(mono))

        return sorted(self._terms.items(), key=key)

    def to_string(self, pretty: bool = False) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self._sorted_terms()):
            ms = _mono_str(mono, pretty)
            mag = format_rational(abs(c))
            if not ms:
                body = mag
            elif mag == "1":
                body = ms
            else:
                body = f"{mag}*{ms}"
            if i == 0:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"SymbolicPoly({self.to_string()!r})"


_PRETTY = {"PI2": "π²", "L": "ln c"}


def _mono_str(mono: Monomial, pretty: bool = False) -> str:
    factors = []
    for name, e in zip(GENERATORS, mono):
        if e == 0:
            continue
        if pretty:
            base = _PRETTY[name]
            if e == 1:
                factors.append(base)
            else:
                factors.append(f"({base})^{e}")
        else:
            factors.append(name if e == 1 else f"{name}^{e}")
    return "*".join(factors)


def format_coeff(c, pretty: bool = False) -> str:
    """Exact text for a Laurent coefficient (rational or symbolic)."""
    if isinstance(c, SymbolicPoly):
        return c.to_string(pretty)
    return format_rational(c)


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_coeff(text: str) -> Fraction | SymbolicPoly:
    """Parse an exact coefficient string such as ``"1/2*L^2 - 1/4*PI2"``.

    Returns a Fraction when no generator occurs. A bare ``PI`` (odd power of
    pi) is rejected.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty coefficient")
    total = SymbolicPoly()
    symbolic = False
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or not m.group(2).strip():
            raise ValueError(f"malformed coefficient {text!r}")
        sign, body = m.group(1), m.group(2).strip()
        if sign is None and not first:
            raise ValueError(f"malformed coefficient {text!r}")
        first = False
        pos = m.end()
        term = SymbolicPoly(1)
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed coefficient {text!r}")
            name, _, power = factor.partition("^")
            name = name.strip()
            exp = int(power) if power else 1
            if name in GENERATORS:
                symbolic = True
                term = term * SymbolicPoly.gen(name, exp)
            elif name in ("PI", "pi", "π"):
                if exp % 2:
                    raise ValueError("odd powers of pi are not representable; use PI2")
                symbolic = True
                term = term * SymbolicPoly.gen("PI2", exp // 2)
            else:
                if power:
                    raise ValueError(f"malformed factor {factor!r}")
                term = term * Fraction(name)
        total = total - term if sign == "-" else total + term
    if not symbolic:
        return total.constant()
    return total


# ---------------------------------------------------------------------------
# Univariate polynomials and rational functions in q over Q
# ---------------------------------------------------------------------------


class QPoly:
    """Dense univariate polynomial over Q, coefficients low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        c = [Fraction(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def monomial(cls, k: int, coeff: Number = 1) -> QPoly:
        return cls([0] * k + [coeff])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QPoly([other])
        return isinstance(other, QPoly) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __add__(self, other: QPoly) -> QPoly:
        n = max(len(self.c), len(other.c))
        a = self.c + (0,) * (n - len(self.c))
        b = other.c + (0,) * (n - len(other.c))
        return QPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> QPoly:
        return QPoly(-x for x in self.c)

    def __sub__(self, other: QPoly) -> QPoly:
        return self + (-other)

    def __mul__(self, other) -> QPoly:
        if isinstance(other, (int, Fraction)):
            return QPoly(x * other for x in self.c)
        if not self.c or not other.c:
            return QPoly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def divmod(self, other: QPoly) -> tuple[QPoly, QPoly]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = other.degree
        lead = other.c[-1]
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            f = rem[k] / lead
            if f:
                quot[k - dq] = f
                for j, y in enumerate(other.c):
                    rem[k - dq + j] -= f * y
        return QPoly(quot), QPoly(rem[:dq] if dq > 0 else [])

    def monic(self) -> QPoly:
        return self * (1 / self.c[-1])

    def gcd(self, other: QPoly) -> QPoly:
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic() if a else a

    def derivative(self) -> QPoly:
        return QPoly(i * x for i, x in enumerate(self.c) if i)

    def euler(self) -> QPoly:
        """q * d/dq."""
        return QPoly(i * x for i, x in enumerate(self.c))

    def __call__(self, x):
        acc = 0
        for coef in reversed(self.c):
            acc = acc * x + coef
        return acc

    def __repr__(self) -> str:
        return f"QPoly({[format_rational(x) for x in self.c]})"


class RationalFunction:
    """num/den in q over Q, gcd-reduced with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: QPoly | Number, den: QPoly | Number = 1, *, reduce: bool = True):
        if not isinstance(num, QPoly):
            num = QPoly([num])
        if not isinstance(den, QPoly):
            den = QPoly([den])
        if not den:
            raise ZeroDivisionError("zero denominator")
        if reduce:
            if not num:
                den = QPoly([1])
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
            lead = den.c[-1]
            if lead != 1:
                num, den = num * (1 / lead), den * (1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def q_power(cls, k: int) -> RationalFunction:
        return cls(QPoly.monomial(k))

    @classmethod
    def geometric(cls, c: int) -> RationalFunction:
        """q^c / (1 - q^c)."""
        return cls(QPoly.monomial(c), QPoly([1]) - QPoly.monomial(c))

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalFunction(other)
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.num * other, self.den)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.num, self.den * other)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def euler(self) -> RationalFunction:
        """q * d/dq."""
        n, d = self.num, self.den
        return RationalFunction(n.euler() * d - n * d.euler(), d * d)

    def pole_order_at_one(self) -> int:
        m, d = 0, self.den
        one_minus = QPoly([-1, 1])
        while d.degree > 0:
            quot, rem = d.divmod(one_minus)
            if rem:
                break
            d, m = quot, m + 1
        return m

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"


@lru_cache(maxsize=None)
def cyclotomic(e: int) -> QPoly:
    """The e-th cyclotomic polynomial."""
    p = QPoly.monomial(e) - QPoly([1])
    for d in range(1, e):
        if e % d == 0:
            p = p.divmod(cyclotomic(d))[0]
    return p


class CyclotomicFraction:
    """num / prod_e Phi_e^k_e, with the denominator kept in factored form.

    Sums and Euler derivatives of such fractions never need a polynomial gcd,
    which keeps nested q-sums cheap. ``reduced`` cancels common cyclotomic
    factors by exact division.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: QPoly | Number, den: Mapping[int, int] | None = None):
        self.num = num if isinstance(num, QPoly) else QPoly([num])
        self.den = {e: k for e, k in (den or {}).items() if k}

    @classmethod
    def one_minus_q_power_inverse(cls, d: int, num: QPoly | Number = 1) -> CyclotomicFraction:
        """num / (1 - q^d); note 1 - q^d = -prod_{e | d} Phi_e."""
        num = num if isinstance(num, QPoly) else QPoly([num])
        return cls(-num, {e: 1 for e in range(1, d + 1) if d % e == 0})

    def __bool__(self) -> bool:
        return bool(self.num)

    def _lifted(self, target: Mapping[int, int]) -> QPoly:
        num = self.num
        for e, k in target.items():
            for _ in range(k - self.den.get(e, 0)):
                num = num * cyclotomic(e)
        return num

    def __add__(self, other: CyclotomicFraction) -> CyclotomicFraction:
        if not other:
            return self
        if not self:
            return other
        target = dict(self.den)
        for e, k in other.den.items():
            target[e] = max(target.get(e, 0), k)
        return CyclotomicFraction(self._lifted(target) + other._lifted(target), target)

    def __mul__(self, other) -> CyclotomicFraction:
        if isinstance(other, (int, Fraction)):
            return CyclotomicFraction(self.num * other, self.den)
        den = dict(self.den)
        for e, k in other.den.items():
            den[e] = den.get(e, 0) + k
        return CyclotomicFraction(self.num * other.num, den)

    __rmul__ = __mul__

    def euler(self) -> CyclotomicFraction:
        """q * d/dq."""
        if not self.den:
            return CyclotomicFraction(self.num.euler())
        es = list(self.den)
        full = QPoly([1])
        for e in es:
            full = full * cyclotomic(e)
        num = self.num.euler() * full
        for e in es:
            rest = QPoly([self.den[e]])
            for f in es:
                rest = rest * (cyclotomic(f).euler() if f == e else cyclotomic(f))
            num = num - self.num * rest
        return CyclotomicFraction(num, {e: k + 1 for e, k in self.den.items()})

    def reduced(self) -> CyclotomicFraction:
        num, den = self.num, dict(self.den)
        if not num:
            return CyclotomicFraction(0)
        for e in list(den):
            while den[e]:
                quot, rem = num.divmod(cyclotomic(e))
                if rem:
                    break
                num, den[e] = quot, den[e] - 1
        return CyclotomicFraction(num, den)

    def to_rational_function(self) -> RationalFunction:
        r = self.reduced()
        den = QPoly([1])
        for e, k in r.den.items():
            for _ in range(k):
                den = den * cyclotomic(e)
        # already coprime, and cyclotomic products are monic
        return RationalFunction(r.num, den, reduce=False)


def _exp_substitute(p: QPoly, n_terms: int) -> list[Fraction]:
    """Taylor coefficients in t of p(e^t): sum_i p_i i^k / k!."""
    out = []
    for k in range(n_terms):
        s = sum((c * i**k for i, c in enumerate(p.c) if c), Fraction(0))
        out.append(s / factorial(k))
    return out


def ratfunc_expand_at_one(f: RationalFunction, denom_scale: int, order: int,
                          max_pole: int = MAX_POLE_ORDER):
    """Laurent expansion in eps of f(e^{eps/D}) through eps^order."""
    from .laurent import LaurentSeries

    if denom_scale < 1:
        raise ValueError("denom_scale must be a positive integer")
    m = f.pole_order_at_one()
    if m > max_pole:
        raise PoleOrderError(f"pole of order {m} at q=1 exceeds bound {max_pole}")
    n_terms = order + 2 * m + 1
    if n_terms <= 0:
        return LaurentSeries({}, order)
    num = _exp_substitute(f.num, n_terms)
    den = _exp_substitute(f.den, n_terms)
    if any(den[:m]):
        raise ArithmeticError("internal: denominator valuation mismatch")
    unit = den[m:]
    # quotient num / unit as a power series in t, then shift by t^-m
    length = order + m + 1
    quot: list[Fraction] = []
    for k in range(length):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(unit) - 1) + 1):
            acc -= unit[j] * quot[k - j]
        quot.append(acc / unit[0])
    scale = Fraction(1, denom_scale)
    coeffs = {}
    for k, c in enumerate(quot):
        e = k - m
        if c:
            coeffs[e] = c * scale**e
    return LaurentSeries(coeffs, order)
