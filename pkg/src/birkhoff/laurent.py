"""Truncated Laurent series in the regulator eps.

A series stores its nonzero coefficients in a dict ``{exponent: coeff}`` and a
precision ``prec``: every coefficient of eps^n with n <= prec is known exactly,
nothing is known beyond it. ``prec=None`` marks an exact (finite) series, e.g.
a pole part or a polynomial.

Precision rule for products: windows [v1, N1] and [v2, N2] give
[v1+v2, min(N1+v2, N2+v1)], where the valuation of a zero series with finite
precision N counts as N+1.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .exactalg import SymbolicPoly, format_coeff, parse_coeff

__all__ = [
    "DEFAULT_ORDER",
    "LaurentSeries",
    "PoleError",
    "PrecisionError",
    "pole_part",
    "regular_part",
    "laurent_mul",
    "laurent_exp",
    "laurent_log",
    "eval_at_zero",
]

DEFAULT_ORDER = 6


class PoleError(ArithmeticError):
    """A series that should be pole-free has a nonzero negative-exponent coefficient."""


class PrecisionError(ArithmeticError):
    """A required coefficient lies outside the certified truncation window."""


def _prec(p: int | None) -> float:
    return math.inf if p is None else p


def _unprec(p: float) -> int | None:
    return None if p == math.inf else int(p)


class LaurentSeries:
    __slots__ = ("_c", "prec")

    def __init__(self, coeffs: Mapping[int, Any] | None = None, prec: int | None = DEFAULT_ORDER):
        c = {}
        for e, v in (coeffs or {}).items():
            if prec is not None and e > prec:
                continue
            if v:
                c[int(e)] = v
        self._c = c
        self.prec = prec

    # construction helpers -------------------------------------------------
    @classmethod
    def exact(cls, coeffs: Mapping[int, Any]) -> LaurentSeries:
        return cls(coeffs, None)

    @classmethod
    def constant(cls, value, prec: int | None = None) -> LaurentSeries:
        return cls({0: value}, prec)

    @classmethod
    def one(cls) -> LaurentSeries:
        return cls({0: Fraction(1)}, None)

    @classmethod
    def zero(cls, prec: int | None = None) -> LaurentSeries:
        return cls({}, prec)

    @classmethod
    def eps(cls, power: int = 1) -> LaurentSeries:
        return cls({power: Fraction(1)}, None)

    # access -----------------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, Any]:
        return dict(self._c)

    def __getitem__(self, n: int):
        if self.prec is not None and n > self.prec:
            raise PrecisionError(f"coefficient of eps^{n} beyond window (prec {self.prec})")
        return self._c.get(n, Fraction(0))

    def exponents(self) -> list[int]:
        return sorted(self._c)

    def valuation(self) -> float:
        """Lowest exponent with nonzero coefficient; prec+1 (or inf) if none."""
        if self._c:
            return min(self._c)
        return _prec(self.prec) + 1

    def is_exact(self) -> bool:
        return self.prec is None

    def truncate(self, n: int) -> LaurentSeries:
        if self.prec is not None and n > self.prec:
            raise PrecisionError(f"cannot truncate at {n}: window ends at {self.prec}")
        return LaurentSeries(self._c, n)

    def __bool__(self) -> bool:
        return bool(self._c)

    def map_coeffs(self, fn) -> LaurentSeries:
        return LaurentSeries({e: fn(v) for e, v in self._c.items()}, self.prec)

    # arithmetic ---------------------------------------------------------------
    @staticmethod
    def _coerce(other) -> LaurentSeries | None:
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, Fraction, SymbolicPoly)):
            return LaurentSeries({0: other}, None)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prec = _unprec(min(_prec(self.prec), _prec(o.prec)))
        out = dict(self._c)
        for e, v in o._c.items():
            out[e] = out[e] + v if e in out else v
        return LaurentSeries(out, prec)

    __radd__ = __add__

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries({e: -v for e, v in self._c.items()}, self.prec)

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
        if isinstance(other, (int, Fraction, SymbolicPoly)):
            return LaurentSeries({e: v * other for e, v in self._c.items()}, self.prec)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return laurent_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> LaurentSeries:
        if n < 0:
            raise ValueError("negative power")
        out = LaurentSeries.one()
        for _ in range(n):
            out = out * self
        return out

    # comparison ---------------------------------------------------------------
    def equals(self, other, upto: int | None = None) -> bool:
        """Compare coefficients on the common certified window.

        ``upto`` asserts agreement through eps^upto and raises PrecisionError if
        either window does not reach it. Without ``upto`` the common window is
        used, but it must reach the leading stored term of both operands.
        """
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare LaurentSeries with {type(other).__name__}")
        common = min(_prec(self.prec), _prec(o.prec))
        if upto is not None:
            if upto > common:
                raise PrecisionError(f"comparison through eps^{upto} exceeds window ending at {common}")
            common = upto
        stored = set(self._c) | set(o._c)
        if stored and common < min(stored):
            raise PrecisionError("common window certifies none of the stored terms")
        return all(self._c.get(e, 0) == o._c.get(e, 0) for e in stored if e <= common)

    def __eq__(self, other) -> bool:
        if self._coerce(other) is None:
            return NotImplemented
        return self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    # text / json ---------------------------------------------------------------
    def to_string(self, pretty: bool = False) -> str:
        if not self._c and self.prec is None:
            return "0"
        parts = []
        for e in self.exponents():
            c = format_coeff(self._c[e], pretty)
            if " " in c:
                c = f"({c})"
            if e == 0:
                parts.append(c)
                continue
            mon = "eps" if e == 1 else f"eps^{e}"
            if c in ("1", "-1"):
                parts.append(mon if c == "1" else f"-{mon}")
            else:
                parts.append(f"{c}*{mon}")
        if self.prec is not None:
            parts.append(f"O(eps^{self.prec + 1})")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"LaurentSeries({self.to_string()!r})"

    def to_json(self) -> dict:
        return {
            "coeffs": [[e, format_coeff(self._c[e])] for e in self.exponents()],
            "trunc": self.prec,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> LaurentSeries:
        if isinstance(data, str):
            data = json.loads(data)
        return cls({int(e): parse_coeff(c) for e, c in data["coeffs"]}, data["trunc"])


def pole_part(x: LaurentSeries) -> LaurentSeries:
    """The weight -1 Rota-Baxter projection onto negative powers of eps (exact result)."""
    if x.prec is not None and x.prec < -1:
        raise PrecisionError(f"pole part needs the window through eps^-1 (have {x.prec})")
    return LaurentSeries.exact({e: v for e, v in x._c.items() if e < 0})


def regular_part(x: LaurentSeries) -> LaurentSeries:
    """(id - pole_part)(x)."""
    if x.prec is not None and x.prec < -1:
        raise PrecisionError(f"regular part needs the window through eps^-1 (have {x.prec})")
    return LaurentSeries({e: v for e, v in x._c.items() if e >= 0}, x.prec)


def laurent_mul(x: LaurentSeries, y: LaurentSeries) -> LaurentSeries:
    v1, v2 = x.valuation(), y.valuation()
    if v1 == math.inf or v2 == math.inf:
        # an exact zero factor
        return LaurentSeries.zero(None)
    prec = min(_prec(x.prec) + v2, _prec(y.prec) + v1)
    out: dict[int, Any] = {}
    for e1, c1 in x._c.items():
        for e2, c2 in y._c.items():
            e = e1 + e2
            if e > prec:
                continue
            p = c1 * c2
            out[e] = out[e] + p if e in out else p
    return LaurentSeries(out, _unprec(prec))


def _target_order(x: LaurentSeries, order: int | None) -> int:
    if order is not None:
        if x.prec is not None and order > x.prec:
            raise PrecisionError(f"requested order {order} exceeds window {x.prec}")
        return order
    return x.prec if x.prec is not None else DEFAULT_ORDER


def laurent_exp(x: LaurentSeries, order: int | None = None) -> LaurentSeries:
    """exp(x) for valuation(x) >= 1, truncated at eps^order."""
    if x.valuation() < 1:
        raise ValueError("exp needs a series of valuation >= 1")
    n = _target_order(x, order)
    x = LaurentSeries(x.coeffs, n)
    out = LaurentSeries.one().truncate(n) if n >= 0 else LaurentSeries.zero(n)
    term = LaurentSeries.one()
    k = 1
    while k <= n:
        term = (term * x) * Fraction(1, k)
        out = out + term
        k += 1
    return out


def laurent_log(u: LaurentSeries, order: int | None = None) -> LaurentSeries:
    """log(u) for u = 1 + y with valuation(y) >= 1."""
    y = u - 1
    if y.valuation() < 1:
        raise ValueError("log needs a series of the form 1 + (valuation >= 1)")
    n = _target_order(u, order)
    y = LaurentSeries(y.coeffs, n)
    out = LaurentSeries.zero(n)
    term = LaurentSeries.one()
    for k in range(1, n + 1):
        term = term * y
        out = out + term * Fraction((-1) ** (k + 1), k)
    return out


def eval_at_zero(x: LaurentSeries):
    """Constant term of a pole-free series."""
    if x.prec is not None and x.prec < 0:
        raise PrecisionError(f"constant term not certified (window ends at {x.prec})")
    poles = [e for e in x.exponents() if e < 0]
    if poles:
        raise PoleError(f"series has a pole of order {-min(poles)}")
    return x[0]
