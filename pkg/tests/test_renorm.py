from collections import Counter
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from birkhoff.exactalg import RationalFunction, SymbolicPoly, ratfunc_expand_at_one, zeta_nonpositive
from birkhoff.hopfconv import tree_context
from birkhoff.laurent import LaurentSeries, PrecisionError, regular_part
from birkhoff.qshuffle import Letter, quasi_shuffle
from birkhoff.renorm import (
    NestedSumState,
    UnsupportedArgument,
    birkhoff_parts,
    mzv_char,
    mzv_outer_sum,
    mzv_partial_sum,
    mzv_rational_function,
    naive_finite_part,
    renormalize,
    sin_reciprocal_series,
    tree_char,
    tree_char_fold,
)
from birkhoff.trees import RootedForest, RootedTree, forests_of_degree, graft, ladder
from strategies import forests

PI2 = SymbolicPoly.gen("PI2")
L = SymbolicPoly.gen("L")
DOT = RootedForest((RootedTree(),))
L2 = RootedForest((ladder(2),))
Z0 = Letter(0, 1)


class TestSinReciprocal:
    def test_terms(self):
        s = sin_reciprocal_series(1, 3)
        assert s[-1] == 1
        assert s[1] == PI2 / 6
        assert s[3] == PI2**2 * Fraction(7, 360)
        assert s[0] == 0 and s[2] == 0

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_times_sine_is_one(self, k):
        order = 7
        # sin(k pi eps)/pi = sum (-1)^n k^(2n+1) PI2^n eps^(2n+1)/(2n+1)!
        sine = LaurentSeries({2 * n + 1: PI2**n * Fraction((-1) ** n * k ** (2 * n + 1), factorial(2 * n + 1))
                              for n in range(5)}, order + 1)
        prod = sin_reciprocal_series(k, order) * sine
        assert prod.equals(LaurentSeries.one(), upto=order)

    def test_bad_k(self):
        with pytest.raises(ValueError):
            sin_reciprocal_series(0, 2)


class TestTreeChar:
    def test_dot(self):
        f = tree_char(DOT, 1)
        assert f.equals(LaurentSeries({-1: 1, 0: -L, 1: PI2 / 6 + L**2 / 2}, 1), upto=1)

    def test_ladder2(self):
        f = tree_char(L2, 1)
        expected = {-2: Fraction(1, 2), -1: -L, 0: L**2 + PI2 * Fraction(5, 12),
                    1: -(L / 6) * (4 * L**2 + 5 * PI2)}
        assert f.equals(LaurentSeries(expected, 1), upto=1)

    def test_unit(self):
        assert tree_char(RootedForest(), 3) == LaurentSeries.one()

    def test_product(self):
        assert tree_char(DOT * DOT, 4).equals(tree_char(DOT, 5) * tree_char(DOT, 5), upto=4)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_fold_agrees(self, n):
        for f in forests_of_degree(n):
            assert tree_char(f, 5).equals(tree_char_fold(f, 5), upto=5)

    @settings(max_examples=25, deadline=None)
    @given(forests, forests)
    def test_multiplicative(self, f, g):
        if f.degree + g.degree > 6:
            return
        order = 3
        lhs = tree_char(f * g, order + 6)
        rhs = tree_char(f, order + 6) * tree_char(g, order + 6)
        assert lhs.equals(rhs, upto=order)

    def test_precision_window(self):
        with pytest.raises(PrecisionError):
            tree_char(RootedForest((ladder(4),)), 2)
        with pytest.raises(PrecisionError):
            tree_char(DOT, -1)
        assert tree_char(RootedForest((ladder(4),)), 3).prec == 3


def brute_sum(n, weights, q):
    """sum_{n > m_1 > ... > m_k >= 1} prod m_i^b_i q^(c_i m_i) over a nested chain."""
    if not weights:
        return RationalFunction(1)
    (b, c), rest = weights[0], weights[1:]
    acc = RationalFunction(0)
    for m in range(1, n):
        acc = acc + RationalFunction.q_power(c * m) * (m**b) * brute_sum(m, rest, q)
    return acc


class TestNestedSums:
    def test_geometric(self):
        state = mzv_partial_sum(NestedSumState.one(), (0, 1))
        for n in range(1, 7):
            y = RationalFunction.q_power(1)
            closed = (y - RationalFunction.q_power(n)) / (1 - y)
            assert state.evaluate(n) == closed

    def test_b1_n3(self):
        state = mzv_partial_sum(NestedSumState.one(), (1, 1))
        y = RationalFunction.q_power(1)
        assert state.evaluate(3) == y + y * y * 2

    @pytest.mark.parametrize("b", range(4))
    @pytest.mark.parametrize("c", [1, 2])
    def test_single_oracle(self, b, c):
        state = mzv_partial_sum(NestedSumState.one(), (b, c))
        for n in range(1, 7):
            assert state.evaluate(n) == brute_sum(n, [(b, c)], None)

    @pytest.mark.parametrize("w1,w2", [((0, 1), (0, 1)), ((1, 1), (0, 2)), ((2, 1), (1, 1)), ((0, 3), (3, 1))])
    def test_nested_oracle(self, w1, w2):
        state = mzv_partial_sum(mzv_partial_sum(NestedSumState.one(), w2), w1)
        for n in range(1, 7):
            assert state.evaluate(n) == brute_sum(n, [w1, w2], None)

    def test_outer_sum(self):
        f = mzv_outer_sum(NestedSumState.one(), (0, 1))
        assert f == RationalFunction.geometric(1)
        assert ratfunc_expand_at_one(f, 1, 3).equals(mzv_char((Z0,), 3), upto=3)

    def test_bad_weight(self):
        with pytest.raises(ValueError):
            mzv_partial_sum(NestedSumState.one(), (0, 0))
        with pytest.raises(ValueError):
            mzv_outer_sum(NestedSumState.one(), (-1, 1))


class TestMzvChar:
    def test_depth_one_zero(self):
        z = mzv_char((Z0,), 6)
        assert z[-1] == -1
        for k in range(7):
            assert z[k] == zeta_nonpositive(k) / factorial(k)

    @pytest.mark.parametrize("k", range(5))
    def test_depth_one_negative(self, k):
        z = mzv_char((Letter(-k, 1),), 5)
        assert z[-k - 1] == (-1) ** (k + 1) * factorial(k)
        assert all(z[e] == 0 for e in range(-k, 0))
        for j in range(6):
            assert z[j] == zeta_nonpositive(k + j) / factorial(j)

    def test_depth_two(self):
        z = mzv_char((Z0, Z0), 1)
        assert z.equals(LaurentSeries({-2: Fraction(1, 2), -1: Fraction(3, 4), 0: Fraction(11, 24)}, 0), upto=0)

    def test_depth_two_product_form(self):
        # Z(0,0) with r = (1,1) is q/(1-q) * q^2/(1-q^2)
        f, scale = mzv_rational_function((Z0, Z0))
        assert scale == 1
        assert f == RationalFunction.geometric(1) * RationalFunction.geometric(2)

    def test_rational_direction(self):
        half = Letter(0, Fraction(1, 2))
        f, scale = mzv_rational_function((half,))
        assert scale == 2
        # Z(0; r=1/2) at eps equals Z(0; r=1) at eps/2
        z = mzv_char((half,), 4)
        base = mzv_char((Z0,), 4)
        for e in range(-1, 5):
            assert z[e] == base[e] * Fraction(1, 2) ** e

    def test_unsupported(self):
        with pytest.raises(UnsupportedArgument):
            mzv_char((Letter(1, 1),), 3)

    def test_unit(self):
        assert mzv_char((), 3) == LaurentSeries.one()

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.sampled_from([Letter(0, 1), Letter(-1, 1), Letter(0, 2), Letter(-1, Fraction(1, 2))]),
                    min_size=1, max_size=2).map(tuple),
           st.lists(st.sampled_from([Letter(0, 1), Letter(-2, 1), Letter(0, Fraction(1, 2))]),
                    min_size=1, max_size=2).map(tuple))
    def test_quasi_shuffle_character(self, u, w):
        order = 8
        lhs = mzv_char(u, order) * mzv_char(w, order)
        rhs = LaurentSeries.zero()
        for x, c in quasi_shuffle(u, w).items():
            rhs = rhs + mzv_char(x, order) * c
        assert lhs.equals(rhs, upto=2)


class TestRenormalize:
    def test_trees(self):
        assert renormalize("tree", DOT) == -L
        assert renormalize("tree", L2) == L**2 / 2 + PI2 / 4
        assert str(renormalize("tree", L2)) == "1/2*L^2 + 1/4*PI2"
        assert renormalize("tree", RootedTree()) == -L

    def test_mzv(self):
        assert renormalize("mzv", (Z0, Z0)) == Fraction(3, 8)
        assert naive_finite_part("mzv", (Z0, Z0)) == Fraction(11, 24)
        assert naive_finite_part("mzv", (Z0,)) == Fraction(-1, 2)
        assert naive_finite_part("tree", DOT) == -L

    @pytest.mark.parametrize("k", range(7))
    def test_depth_one(self, k):
        assert renormalize("mzv", (Letter(-k, 1),)) == zeta_nonpositive(k)

    def test_quasi_shuffle_consistency(self):
        z0 = renormalize("mzv", (Z0,))
        assert z0 * z0 == 2 * renormalize("mzv", (Z0, Z0)) + z0 == Fraction(1, 4)
        n0 = naive_finite_part("mzv", (Z0,))
        assert n0 * n0 != 2 * naive_finite_part("mzv", (Z0, Z0)) + n0
        assert 2 * naive_finite_part("mzv", (Z0, Z0)) + n0 == Fraction(5, 12)

    def test_consistency_general(self):
        letters = [Letter(0, 1), Letter(-1, 1), Letter(-2, 1)]
        for a in letters:
            for b in letters:
                lhs = renormalize("mzv", (a,)) * renormalize("mzv", (b,))
                rhs = sum(renormalize("mzv", x) * c for x, c in quasi_shuffle((a,), (b,)).items())
                assert lhs == rhs

    def test_codomains(self):
        for kind, elements in (("tree", list(tree_context().basis_upto(4))[1:]),
                               ("mzv", [(Z0,), (Z0, Z0), (Letter(-1, 1), Z0), (Z0, Letter(-2, 2), Z0)])):
            for x in elements:
                _, minus, plus = birkhoff_parts(kind, x)
                assert plus.valuation() >= 0
                assert regular_part(minus) == LaurentSeries.zero()

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            renormalize("graph", DOT)

    def test_unsupported_argument(self):
        with pytest.raises(UnsupportedArgument):
            renormalize("mzv", (Letter(2, 1),))
