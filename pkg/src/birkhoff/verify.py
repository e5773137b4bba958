"""Verification suites behind ``birkhoff verify``.

Each suite returns a list of :class:`Check` results; the golden suite reads
the versioned data files shipped in ``birkhoff/golden``.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Callable

from . import hopfconv, qshuffle, renorm, rota, trees
from .exactalg import (
    RationalFunction,
    bernoulli,
    parse_coeff,
    ratfunc_expand_at_one,
    zeta_nonpositive,
)
from .laurent import LaurentSeries, laurent_exp, laurent_log, pole_part, regular_part

GOLDEN_DIR = Path(__file__).with_name("golden") / "v1"


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        tail = f"  ({self.detail})" if self.detail and not self.passed else ""
        return f"{tag} {self.suite}/{self.name}{tail}"


def _guard(suite: str, name: str, fn: Callable[[], bool | tuple[bool, str]]) -> Check:
    try:
        out = fn()
    except Exception as exc:  # a crashing property is a failing property
        return Check(suite, name, False, f"{type(exc).__name__}: {exc}")
    if isinstance(out, tuple):
        return Check(suite, name, bool(out[0]), out[1])
    return Check(suite, name, bool(out))


def random_laurent(rng: random.Random, lo: int = -3, hi: int = 3) -> LaurentSeries:
    return LaurentSeries.exact({e: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for e in range(lo, hi + 1)})


def random_seq(rng: random.Random, window: int = 16) -> rota.SeqElement:
    return rota.SeqElement(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(window))


MZV_ALPHABET = (qshuffle.Letter(0, 1), qshuffle.Letter(-1, 1))


# ---------------------------------------------------------------------------
# golden
# ---------------------------------------------------------------------------


def read_golden(directory: Path | str | None = None) -> list[tuple[str, str, str]]:
    """(file name, key, value) for every data line."""
    directory = Path(directory) if directory else GOLDEN_DIR
    if not directory.is_dir():
        raise FileNotFoundError(f"no golden directory at {directory}")
    out = []
    for path in sorted(directory.glob("*.txt")):
        if path.name == "README.txt":
            continue
        for raw in path.read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition(" = ")
            if not sep:
                raise ValueError(f"{path.name}: malformed line {raw!r}")
            out.append((path.name, key.strip(), value.strip()))
    if not out:
        raise ValueError(f"no golden data in {directory}")
    return out


def _symbolic_word(text: str) -> tuple[str, ...]:
    return () if text == "1" else tuple(text.split(","))


def _name_merge(a: str, b: str) -> str:
    return "".join(sorted((a, b)))


def _forest(text: str) -> trees.RootedForest:
    return trees.parse_forest(text)


def _exponent(tok: str) -> int:
    if not tok.startswith("eps^"):
        raise ValueError(f"bad exponent token {tok!r}")
    return int(tok[4:])


def _golden_scalar(key: str, expected) -> tuple[bool, str]:
    kind, *args = key.split()
    if kind == "bernoulli":
        got = bernoulli(int(args[0]))
    elif kind == "zeta":
        got = zeta_nonpositive(-int(args[0]))
    elif kind == "tree_char":
        e = _exponent(args[1])
        got = renorm.tree_char(_forest(args[0]), max(e, 0) + 2)[e]
    elif kind == "mzv_char":
        e = _exponent(args[1])
        got = renorm.mzv_char(qshuffle.parse_word(args[0]), max(e, 0) + 2)[e]
    elif kind in ("renorm", "naive"):
        what, text = args[0], " ".join(args[1:])
        element = _forest(text) if what == "tree" else qshuffle.parse_word(text)
        fn = renorm.renormalize if kind == "renorm" else renorm.naive_finite_part
        got = fn(what, element)
    else:
        raise ValueError(f"unknown golden key kind {kind!r}")
    return got == expected, f"expected {expected}, got {got}"


def _golden_family(head: str) -> Counter:
    """Computed terms for a multi-term golden entry, keyed like the data file."""
    kind, _, arg = head.partition(" ")
    out: Counter = Counter()
    if kind == "coproduct":
        for (left, right), c in trees.coproduct(_forest(arg)).items():
            out[f"{left}⊗{right}"] += c
    elif kind == "deconcat":
        for (u, w), c in qshuffle.deconcat_coproduct(_symbolic_word(arg)).items():
            out[f"{','.join(u) or '1'}⊗{','.join(w) or '1'}"] += c
    elif kind == "qshuffle":
        u, _, w = arg.partition(" * ")
        for word, c in qshuffle.quasi_shuffle(_symbolic_word(u), _symbolic_word(w), _name_merge).items():
            out[",".join(word)] += c
    elif kind == "bch":
        deg = int(arg)
        for word, c in rota.bch_series(max(deg, 2)).homogeneous(deg).items():
            out["".join(word)] += c
    elif kind == "geometric":
        c = Fraction(arg)
        P = rota.scalar_operator(-1, rota.xseries_carrier(6))
        a = rota.XSeries([0, c], 6)
        res = rota.atkinson_solve(P, a, 6)
        for k, v in enumerate(res.left.c):
            out[f"x^{k}"] += v
    else:
        raise ValueError(f"unknown golden key kind {kind!r}")
    return Counter({k: v for k, v in out.items() if v})


def golden_checks(directory: Path | str | None = None) -> list[Check]:
    checks: list[Check] = []
    families: dict[str, dict[str, object]] = {}
    for fname, key, value in read_golden(directory):
        head, bar, term = key.partition(" | ")
        if bar:
            fam = families.setdefault(head, {})
            fam[term] = value
            continue
        checks.append(_guard("golden", key, lambda k=key, v=value: _golden_scalar(k, parse_coeff(v))))
    for head, terms in families.items():
        def family_check(head=head, terms=terms):
            expected = Counter({t: parse_coeff(v) for t, v in terms.items()})
            expected = Counter({k: v for k, v in expected.items() if v})
            got = _golden_family(head)
            if head.startswith("geometric"):
                # only the listed coefficients are stored
                got = Counter({k: v for k, v in got.items() if k in terms})
            diff = {k: (expected.get(k, 0), got.get(k, 0)) for k in set(expected) | set(got)
                    if expected.get(k, 0) != got.get(k, 0)}
            return not diff, f"mismatch (expected, got): {diff}"
        checks.append(_guard("golden", head, family_check))
    return checks


# ---------------------------------------------------------------------------
# module suites
# ---------------------------------------------------------------------------


def exactalg_checks(max_degree: int) -> list[Check]:
    s = "exactalg"

    def bernoulli_recurrence():
        return all(sum(comb(k + 1, j) * bernoulli(j) for j in range(k + 1)) == 0 for k in range(1, 20))

    def zeta_values():
        return [zeta_nonpositive(k) for k in range(4)] == [Fraction(-1, 2), Fraction(-1, 12), 0, Fraction(1, 120)]

    def geometric_expansion():
        q = RationalFunction.q_power(1)
        got = ratfunc_expand_at_one(q / (1 - q), 1, 2)
        return got.equals(LaurentSeries({-1: -1, 0: Fraction(-1, 2), 1: Fraction(-1, 12), 2: 0}, 2))

    def coeff_roundtrip():
        rng = random.Random(7)
        for _ in range(50):
            c = sum((parse_coeff(f"{rng.randint(-5, 5)}/{rng.randint(1, 4)}*L^{rng.randint(0, 3)}*PI2^{rng.randint(0, 2)}")
                     for _ in range(3)), Fraction(0))
            if parse_coeff(str(c)) != c:
                return False
        return True

    return [_guard(s, "bernoulli_recurrence", bernoulli_recurrence),
            _guard(s, "coefficient_round_trip", coeff_roundtrip),
            _guard(s, "geometric_expansion_at_one", geometric_expansion),
            _guard(s, "zeta_nonpositive", zeta_values)]


def laurent_checks(max_degree: int) -> list[Check]:
    s = "laurent"
    rng = random.Random(11)
    pairs = [(random_laurent(rng), random_laurent(rng), random_laurent(rng)) for _ in range(20)]

    def ring_axioms():
        return all((x * y) * z == x * (y * z) and x * (y + z) == x * y + x * z and x * y == y * x
                   for x, y, z in pairs)

    def projections():
        return all(pole_part(pole_part(x)) == pole_part(x) and pole_part(x) + regular_part(x) == x
                   for x, _, _ in pairs)

    def exp_log():
        for x, _, _ in pairs:
            u = regular_part(x) - x[0]  # valuation >= 1
            if u and laurent_log(laurent_exp(u, 6), 6) != u.truncate(6):
                return False
        return True

    return [_guard(s, "exp_log_inverse", exp_log),
            _guard(s, "pole_projection_splitting", projections),
            _guard(s, "ring_axioms", ring_axioms)]


def _coassociative(ctx: hopfconv.HopfContext, x) -> bool:
    cop = ctx.coproduct(x)
    left: Counter = Counter()
    right: Counter = Counter()
    for (a, b), c in cop.items():
        for (a1, a2), c1 in ctx.coproduct(a).items():
            left[(a1, a2, b)] += c * c1
        for (b1, b2), c2 in ctx.coproduct(b).items():
            right[(a, b1, b2)] += c * c2
    return +left == +right


def trees_checks(max_degree: int) -> list[Check]:
    s = "trees"
    ctx = hopfconv.tree_context()
    forests = list(ctx.basis_upto(max_degree))

    def counts():
        # rooted trees on n vertices: 1, 1, 2, 4, 9, 20, 48
        known = [1, 1, 2, 4, 9, 20, 48]
        return all(len(trees.trees_of_degree(n)) == known[n - 1] for n in range(1, min(max_degree, 7) + 1))

    def roundtrip():
        return all(trees.parse_forest(trees.render_forest(f)) == f for f in forests)

    def coassoc():
        return all(_coassociative(ctx, f) for f in forests)

    def multiplicative():
        for f in forests:
            for g in forests:
                if f.degree + g.degree > max_degree:
                    continue
                lhs = trees.coproduct(f * g)
                rhs: Counter = Counter()
                for (a, b), c in trees.coproduct(f).items():
                    for (a2, b2), c2 in trees.coproduct(g).items():
                        rhs[(a * a2, b * b2)] += c * c2
                if +lhs != +rhs:
                    return False
        return True

    return [_guard(s, "coassociativity", coassoc),
            _guard(s, "coproduct_multiplicative", multiplicative),
            _guard(s, "parse_render_round_trip", roundtrip),
            _guard(s, "tree_counts", counts)]


def qshuffle_checks(max_degree: int) -> list[Check]:
    s = "qshuffle"
    n = min(max_degree, 3)
    words = [w for k in range(n + 1) for w in qshuffle.words_of_length(MZV_ALPHABET, k)]

    def commutative():
        return all(qshuffle.quasi_shuffle(u, w) == qshuffle.quasi_shuffle(w, u) for u in words for w in words)

    def associative():
        small = [w for w in words if len(w) <= 2]
        for u in small:
            for v in small:
                for w in small:
                    left: Counter = Counter()
                    for x, c in qshuffle.quasi_shuffle(u, v).items():
                        for y, d in qshuffle.quasi_shuffle(x, w).items():
                            left[y] += c * d
                    right: Counter = Counter()
                    for x, c in qshuffle.quasi_shuffle(v, w).items():
                        for y, d in qshuffle.quasi_shuffle(u, x).items():
                            right[y] += c * d
                    if +left != +right:
                        return False
        return True

    def bialgebra():
        ctx = hopfconv.word_context(MZV_ALPHABET)
        small = [w for w in words if len(w) <= 2]
        for u in small:
            for w in small:
                lhs: Counter = Counter()
                for x, c in qshuffle.quasi_shuffle(u, w).items():
                    for pair, d in ctx.coproduct(x).items():
                        lhs[pair] += c * d
                rhs: Counter = Counter()
                for (u1, u2), c in ctx.coproduct(u).items():
                    for (w1, w2), d in ctx.coproduct(w).items():
                        for x, e in qshuffle.quasi_shuffle(u1, w1).items():
                            for y, f in qshuffle.quasi_shuffle(u2, w2).items():
                                rhs[(x, y)] += c * d * e * f
                if +lhs != +rhs:
                    return False
        return True

    def roundtrip():
        return all(qshuffle.parse_word(qshuffle.render_word(w)) == w for w in words)

    def term_count():
        # |u| = m, |w| = n: sum_k C(m+n-k, k, m-k, n-k) terms counted with multiplicity
        u = tuple("ab")
        w = tuple("cd")
        return sum(qshuffle.quasi_shuffle(u, w, _name_merge).values()) == 13

    return [_guard(s, "associative", associative),
            _guard(s, "bialgebra_compatibility", bialgebra),
            _guard(s, "commutative", commutative),
            _guard(s, "parse_render_round_trip", roundtrip),
            _guard(s, "two_by_two_term_count", term_count)]


def _antipode_axiom(ctx: hopfconv.HopfContext, x) -> bool:
    acc = hopfconv.HElement(ctx, {})
    for (a, b), c in ctx.coproduct(x).items():
        acc = acc + hopfconv.antipode(ctx, a) * ctx.element(b) * c
    expected = ctx.element(ctx.unit) if ctx.is_unit(x) else hopfconv.HElement(ctx, {})
    return acc == expected


def hopf_checks(max_degree: int) -> list[Check]:
    s = "hopf"
    tctx = hopfconv.tree_context()
    wctx = hopfconv.word_context(MZV_ALPHABET)
    forests = list(tctx.basis_upto(max_degree))
    words = list(wctx.basis_upto(max_degree))

    def agree(ctx, xs):
        return all(hopfconv.antipode(ctx, x) == hopfconv.antipode_geometric(ctx, x) for x in xs)

    return [_guard(s, "antipode_axiom_trees", lambda: all(_antipode_axiom(tctx, f) for f in forests)),
            _guard(s, "antipode_axiom_words", lambda: all(_antipode_axiom(wctx, w) for w in words)),
            _guard(s, "antipode_formulas_agree_trees", lambda: agree(tctx, forests)),
            _guard(s, "antipode_formulas_agree_words", lambda: agree(wctx, words))]


def abd_checks(max_degree: int, order: int = 6) -> list[Check]:
    s = "abd"
    out = []
    for kind, ctx, bound in (("tree", hopfconv.tree_context(), max_degree),
                             ("mzv", hopfconv.word_context(MZV_ALPHABET), min(max_degree, 3))):
        phi, minus, plus = renorm._decomposition(kind, order)
        basis = list(ctx.basis_upto(bound))

        def factorization(minus=minus, phi=phi, plus=plus, basis=basis):
            conv = hopfconv.convolve(minus, phi)
            return all(conv(x).equals(plus(x)) for x in basis)

        def codomains(minus=minus, plus=plus, basis=basis, ctx=ctx):
            return all(plus(x).valuation() >= 0 and (ctx.is_unit(x) or regular_part(minus(x)).valuation() == float("inf"))
                       for x in basis)

        def multiplicative(minus=minus, plus=plus, ctx=ctx, bound=bound):
            for dx in range(1, bound):
                for dy in range(1, bound - dx + 1):
                    for x in ctx.basis(dx):
                        for y in ctx.basis(dy):
                            prod = ctx.product(x, y)
                            for f in (minus, plus):
                                if not f(prod).equals(f(x) * f(y)):
                                    return False
            return True

        out += [_guard(s, f"{kind}_factorization", factorization),
                _guard(s, f"{kind}_codomains", codomains),
                _guard(s, f"{kind}_multiplicative", multiplicative)]
    return sorted(out, key=lambda c: c.name)


def rota_checks(max_degree: int) -> list[Check]:
    s = "rota"
    rng = random.Random(23)
    Q = rota.pole_projection()
    S = rota.partial_sum_operator(16)
    lpairs = [(random_laurent(rng), random_laurent(rng)) for _ in range(100)]
    spairs = [(random_seq(rng), random_seq(rng)) for _ in range(100)]
    scalars = {lam: rota.scalar_operator(lam) for lam in (-1, 1, 3)}

    def rb_scalar():
        return all(rota.rb_axiom_check(P, x, y) for P in scalars.values() for x, y in lpairs[:20])

    def kingman():
        ops = [(Q, lpairs), (S, spairs), (scalars[-1], lpairs)]
        return all(rota.kingman_check(P, x, n) for P, pairs in ops for x, _ in pairs[:10] for n in (1, 2, 3, 4))

    def complements():
        return (all(rota.complement_identity_check(Q, x, y) for x, y in lpairs[:30])
                and all(rota.complement_identity_check(S, x, y) for x, y in spairs[:30]))

    def atkinson():
        order = 6
        P = rota.coefficientwise_operator(Q, order)
        for _ in range(10):
            a = rota.XSeries([LaurentSeries.zero()] + [random_laurent(rng) for _ in range(order)], order,
                             LaurentSeries.zero())
            res = rota.atkinson_solve(P, a, order)
            if not res.check(P, a, order):
                return False
            if any(b <= a_ for a_, b in zip(res.left_steps, res.left_steps[1:])):
                return False
        return True

    def spitzer():
        order = min(max_degree, 4)
        P = rota.pointwise_operator(hopfconv.tree_context())
        phi = renorm.TreeIntegralChar(order + 6).linmap()
        a = P.carrier.one - phi
        return rota.spitzer_check(P, a, order).holds

    return [_guard(s, "atkinson_factorization", atkinson),
            _guard(s, "kingman", kingman),
            _guard(s, "complement_identities", complements),
            _guard(s, "rb_partial_sum", lambda: all(rota.rb_axiom_check(S, x, y) for x, y in spairs)),
            _guard(s, "rb_pole_projection", lambda: all(rota.rb_axiom_check(Q, x, y) for x, y in lpairs)),
            _guard(s, "rb_scalar", rb_scalar),
            _guard(s, "spitzer_trees", spitzer)]


def bch_checks(max_degree: int) -> list[Check]:
    s = "bch"

    def exp_identity():
        n = max(max_degree, 5)
        x = rota.FreeNCSeries.gen("x", n)
        y = rota.FreeNCSeries.gen("y", n)
        return x.exp() * y.exp() == (x + y + rota.bch_series(n)).exp()

    def lie_degree_two():
        return rota.bch_series(2).homogeneous(2) == {("x", "y"): Fraction(1, 2), ("y", "x"): Fraction(-1, 2)}

    def vanishes_on_x_alone():
        return all(set(w) != {"x"} for w in rota.bch_series(max(max_degree, 3)).terms)

    return [_guard(s, "degree_two", lie_degree_two),
            _guard(s, "exp_identity", exp_identity),
            _guard(s, "no_pure_x_words", vanishes_on_x_alone)]


def renorm_checks(max_degree: int) -> list[Check]:
    s = "renorm"
    z = qshuffle.Letter(0, 1)

    def consistency():
        return renorm.renormalize("mzv", (z,)) ** 2 == 2 * renorm.renormalize("mzv", (z, z)) + renorm.renormalize("mzv", (z,))

    def naive_fails():
        return renorm.naive_finite_part("mzv", (z,)) ** 2 != (2 * renorm.naive_finite_part("mzv", (z, z))
                                                              + renorm.naive_finite_part("mzv", (z,)))

    def depth_one():
        return all(renorm.renormalize("mzv", (qshuffle.Letter(-k, 1),)) == zeta_nonpositive(k) for k in range(7))

    def fold_agrees():
        return all(renorm.tree_char(f, 6).equals(renorm.tree_char_fold(f, 6))
                   for f in hopfconv.tree_context().basis_upto(min(max_degree, 5)))

    return [_guard(s, "closed_form_matches_fold", fold_agrees),
            _guard(s, "depth_one_zeta", depth_one),
            _guard(s, "naive_breaks_quasi_shuffle", naive_fails),
            _guard(s, "quasi_shuffle_consistency", consistency)]


SUITES: dict[str, Callable[[int], list[Check]]] = {
    "abd": abd_checks,
    "bch": bch_checks,
    "exactalg": exactalg_checks,
    "hopf": hopf_checks,
    "laurent": laurent_checks,
    "qshuffle": qshuffle_checks,
    "renorm": renorm_checks,
    "rota": rota_checks,
    "trees": trees_checks,
}
SUITE_NAMES = ("golden",) + tuple(SUITES) + ("all",)


def run_suites(suite: str, max_degree: int = 4, golden_dir: Path | str | None = None) -> list[Check]:
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}")
    names = sorted(("golden",) + tuple(SUITES)) if suite == "all" else [suite]
    out: list[Check] = []
    for name in names:
        checks = golden_checks(golden_dir) if name == "golden" else SUITES[name](max_degree)
        out.extend(sorted(checks, key=lambda c: c.name))
    return out
