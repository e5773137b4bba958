from fractions import Fraction
from itertools import product

import pytest

from birkhoff.hopfconv import (
    HElement,
    LinMap,
    antipode,
    antipode_geometric,
    birkhoff_decompose,
    conv_exp,
    conv_inverse,
    conv_log,
    conv_power,
    convolve,
    counit_map,
    identity_map,
    is_character,
    is_derivation,
    tree_context,
    word_context,
)
from birkhoff.laurent import LaurentSeries, pole_part, regular_part
from birkhoff.qshuffle import Letter
from birkhoff.renorm import TreeIntegralChar
from birkhoff.trees import UNIT, RootedForest, RootedTree, ladder

TREES = tree_context()
ALPHABET = (Letter(0, 1), Letter(-1, 1))
WORDS = word_context(ALPHABET)
DOT = RootedForest((RootedTree(),))
L2 = RootedForest((ladder(2),))


def m_S_id(ctx, x, left=True):
    acc = HElement(ctx, {})
    for (a, b), c in ctx.coproduct(x).items():
        if left:
            acc = acc + antipode(ctx, a) * ctx.element(b) * c
        else:
            acc = acc + ctx.element(a) * antipode(ctx, b) * c
    return acc


@pytest.mark.parametrize("ctx,bound", [(TREES, 5), (WORDS, 5)], ids=["trees", "words"])
def test_antipode_axiom(ctx, bound):
    for x in ctx.basis_upto(bound):
        expected = ctx.element(ctx.unit) if ctx.is_unit(x) else HElement(ctx, {})
        assert m_S_id(ctx, x) == expected
        assert m_S_id(ctx, x, left=False) == expected


@pytest.mark.parametrize("ctx,bound", [(TREES, 5), (WORDS, 4)], ids=["trees", "words"])
def test_antipode_formulas_agree(ctx, bound):
    for x in ctx.basis_upto(bound):
        assert antipode(ctx, x) == antipode_geometric(ctx, x)


def test_antipode_examples():
    assert antipode(TREES, UNIT) == TREES.element(UNIT)
    assert antipode(TREES, DOT) == -TREES.element(DOT)
    assert antipode(TREES, L2) == -TREES.element(L2) + TREES.element(DOT * DOT)
    assert str(antipode(TREES, L2)) == "-[[]] + [] []"


def compositions(n):
    for cuts in product((0, 1), repeat=max(n - 1, 0)):
        blocks, size = [], 1
        for c in cuts:
            if c:
                blocks.append(size)
                size = 1
            else:
                size += 1
        blocks.append(size)
        yield blocks


def hoffman_antipode(word):
    """S(a_1..a_n) = (-1)^n sum over compositions of the reversed word, blocks merged."""
    rev = word[::-1]
    out = {}
    for blocks in compositions(len(word)):
        i, letters = 0, []
        for b in blocks:
            merged = rev[i]
            for a in rev[i + 1:i + b]:
                merged = merged * a
            letters.append(merged)
            i += b
        w = tuple(letters)
        out[w] = out.get(w, 0) + (-1) ** len(word)
    return out


def test_word_antipode_closed_form():
    ctx = word_context((Letter(0, 1), Letter(-1, 2), Letter(-2, 1)))
    for x in ctx.basis_upto(4):
        if x:
            assert antipode(ctx, x).terms == {k: v for k, v in hoffman_antipode(x).items() if v}


def random_map(ctx, seed, unit_value=Fraction(0)):
    def rule(x):
        if ctx.is_unit(x):
            return unit_value
        return Fraction(hash((seed, ctx.render(x))) % 17 - 8, 1 + hash((seed, "d", ctx.render(x))) % 5)

    return LinMap(ctx, rule, Fraction(1), f"r{seed}")


@pytest.mark.parametrize("ctx", [TREES, WORDS], ids=["trees", "words"])
def test_convolution_laws(ctx):
    f, g, h = (random_map(ctx, s, Fraction(s + 1)) for s in range(3))
    e = counit_map(ctx)
    lhs, rhs = convolve(convolve(f, g), h), convolve(f, convolve(g, h))
    for x in ctx.basis_upto(4):
        assert lhs(x) == rhs(x)
        assert convolve(e, f)(x) == f(x) == convolve(f, e)(x)


def test_primitive_convolution():
    f, g = random_map(TREES, 1, Fraction(2)), random_map(TREES, 2, Fraction(3))
    assert convolve(f, g)(DOT) == f(UNIT) * g(DOT) + f(DOT) * g(UNIT)


@pytest.mark.parametrize("ctx", [TREES, WORDS], ids=["trees", "words"])
def test_nilpotence(ctx):
    f = random_map(ctx, 5)
    for x in ctx.basis_upto(5):
        if not ctx.is_unit(x):
            assert conv_power(f, ctx.degree(x) + 1)(x) == 0


def test_s_star_id_vanishes():
    S = LinMap(TREES, lambda x: antipode(TREES, x), TREES.element(UNIT), "S")
    assert convolve(S, identity_map(TREES))(L2) == HElement(TREES, {})


@pytest.fixture(scope="module")
def phi():
    return TreeIntegralChar(6).linmap()


def test_characters_and_derivations(phi):
    assert is_character(counit_map(TREES), 5)
    assert is_character(phi, 5)
    assert is_derivation(conv_log(phi), 4)
    assert not is_derivation(phi, 3)


def test_exp_log_round_trip(phi):
    back = conv_exp(conv_log(phi))
    for x in TREES.basis_upto(4):
        assert back(x).equals(phi(x))
    zero = LinMap(TREES, lambda x: Fraction(0), Fraction(1), "0")
    e = counit_map(TREES)
    for x in TREES.basis_upto(3):
        assert conv_exp(zero)(x) == e(x)
        assert conv_log(e)(x) == 0


def test_unit_preconditions(phi):
    with pytest.raises(ValueError):
        conv_exp(phi)
    with pytest.raises(ValueError):
        conv_log(random_map(TREES, 3))
    with pytest.raises(ValueError):
        conv_inverse(random_map(TREES, 3))


def test_inverse_of_character_is_composition_with_antipode(phi):
    inv = conv_inverse(phi)
    for x in TREES.basis_upto(4):
        assert inv(x).equals(phi(antipode(TREES, x)))
        assert convolve(inv, phi)(x).equals(counit_map(TREES, LaurentSeries.one())(x))


@pytest.fixture(scope="module")
def parts(phi):
    return birkhoff_decompose(phi, pole_part)


class TestBirkhoff:

    def test_units_and_primitives(self, phi, parts):
        minus, plus = parts
        assert minus(UNIT) == 1 and plus(UNIT) == 1
        assert minus(DOT) == -pole_part(phi(DOT))
        assert minus(DOT) == LaurentSeries.exact({-1: -1})
        assert plus(DOT).equals(regular_part(phi(DOT)))

    def test_reconstruction(self, phi, parts):
        minus, plus = parts
        conv = convolve(minus, phi)
        for x in TREES.basis_upto(4):
            assert conv(x).equals(plus(x))

    def test_codomains(self, parts):
        minus, plus = parts
        for x in TREES.basis_upto(4):
            assert plus(x).valuation() >= 0
            if x != UNIT:
                assert regular_part(minus(x)) == LaurentSeries.zero()

    def test_characters(self, parts):
        minus, plus = parts
        assert is_character(minus, 4)
        assert is_character(plus, 4)

    def test_right_recursion_gives_inverse_of_plus(self, phi, parts):
        # b(x) = -(id - Q)(phi(x) + sum phi(x') b(x'')) is solved by b = phi_+^{*-1}
        _, plus = parts
        inv = conv_inverse(plus)
        for x in TREES.basis_upto(4):
            if x == UNIT:
                continue
            acc = phi(x)
            for (a, b), c in TREES.reduced_coproduct(x).items():
                acc = acc + phi(a) * inv(b) * c
            assert (-regular_part(acc)).equals(inv(x))

    def test_right_recursion_with_plus_itself_fails(self, phi, parts):
        # substituting phi_+ (not its inverse) breaks already at the 2-vertex ladder
        _, plus = parts
        acc = phi(L2) + phi(DOT) * plus(DOT)
        assert not regular_part(acc).equals(plus(L2))

    def test_order_independence(self, phi):
        basis = list(TREES.basis_upto(4))
        m1, p1 = birkhoff_decompose(phi)
        m2, p2 = birkhoff_decompose(phi)
        first = {x: (m1(x), p1(x)) for x in basis}
        second = {x: (m2(x), p2(x)) for x in reversed(basis)}
        assert all(first[x][0].equals(second[x][0]) and first[x][1].equals(second[x][1]) for x in basis)
