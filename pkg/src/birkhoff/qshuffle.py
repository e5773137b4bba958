"""Words over a commutative semigroup: quasi-shuffle, shuffle and deconcatenation.

A word is a plain tuple of letters; the empty tuple is the unit. Letters can be
any hashable value as long as a commutative ``merge`` is supplied; the default
letters are :class:`Letter` pairs (s, r) with componentwise addition.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Callable, Hashable, Iterable

__all__ = [
    "Letter",
    "Word",
    "WordSum",
    "EMPTY",
    "letter_merge",
    "quasi_shuffle",
    "shuffle",
    "deconcat_coproduct",
    "reduced_deconcat",
    "parse_word",
    "render_word",
    "words_of_length",
    "render_word_sum",
]


@dataclass(frozen=True, order=True)
class Letter:
    s: int
    r: Fraction

    def __post_init__(self):
        r = Fraction(self.r)
        if r <= 0:
            raise ValueError(f"letter needs r > 0, got {r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", int(self.s))

    def __mul__(self, other: Letter) -> Letter:
        return Letter(self.s + other.s, self.r + other.r)

    def __str__(self) -> str:
        r = self.r
        rs = str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"
        return f"{self.s}:{rs}"


Word = tuple
WordSum = Counter  # Word -> int
EMPTY: Word = ()

Merge = Callable[[Hashable, Hashable], Hashable]


def letter_merge(a, b):
    return a * b


@lru_cache(maxsize=None)
def _qsh(u: Word, w: Word, merge: Merge | None) -> tuple[tuple[Word, int], ...]:
    if not u:
        return ((w, 1),)
    if not w:
        return ((u, 1),)
    out: Counter = Counter()
    a1, b1 = u[0], w[0]
    for x, c in _qsh(u[1:], w, merge):
        out[(a1,) + x] += c
    for x, c in _qsh(u, w[1:], merge):
        out[(b1,) + x] += c
    if merge is not None:
        ab = merge(a1, b1)
        for x, c in _qsh(u[1:], w[1:], merge):
            out[(ab,) + x] += c
    return tuple(out.items())


def quasi_shuffle(u: Word, w: Word, merge: Merge = letter_merge) -> WordSum:
    """Quasi-shuffle (stuffle) product of two words."""
    return Counter(dict(_qsh(tuple(u), tuple(w), merge)))


def shuffle(u: Word, w: Word) -> WordSum:
    """Plain shuffle product: the quasi-shuffle without merged letters."""
    return Counter(dict(_qsh(tuple(u), tuple(w), None)))


def deconcat_coproduct(w: Word) -> Counter:
    w = tuple(w)
    return Counter({(w[:i], w[i:]): 1 for i in range(len(w) + 1)})


def reduced_deconcat(w: Word) -> Counter:
    w = tuple(w)
    if not w:
        raise ValueError("reduced coproduct is defined on non-empty words only")
    return Counter({(w[:i], w[i:]): 1 for i in range(1, len(w))})


def parse_word(text: str) -> Word:
    """``"0:1,-1:1/2"`` -> (Letter(0, 1), Letter(-1, 1/2)); ``"1"`` or ``""`` -> unit."""
    s = text.strip()
    if s in ("", "1"):
        return EMPTY
    letters = []
    for i, part in enumerate(s.split(",")):
        sv, sep, rv = part.strip().partition(":")
        if not sep:
            raise ValueError(f"letter {i} ({part!r}) is not of the form s:r")
        try:
            letters.append(Letter(int(sv), Fraction(rv)))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"letter {i} ({part!r}): {exc}") from None
    return tuple(letters)


def render_word(w: Word) -> str:
    return ",".join(str(a) for a in w) if w else "1"


def words_of_length(alphabet: Iterable, n: int) -> list[Word]:
    return [tuple(p) for p in cartesian(list(alphabet), repeat=n)]


def render_word_sum(ws: Counter) -> str:
    items = sorted(((w, c) for w, c in ws.items() if c), key=lambda wc: (-len(wc[0]), render_word(wc[0])))
    if not items:
        return "0"
    parts = []
    for i, (w, c) in enumerate(items):
        body = f"({render_word(w)})"
        if abs(c) != 1:
            body = f"{abs(c)}*{body}"
        parts.append((body if c > 0 else f"-{body}") if i == 0 else (f" + {body}" if c > 0 else f" - {body}"))
    return "".join(parts)
