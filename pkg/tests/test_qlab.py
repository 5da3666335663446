from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from ckit.qlab import (ONE, LaurentPoly, RationalFunc, Sl2Module, a_coeff, regularized_coefficient_closed_form,
                       identity_sum, scan_qbinomial_identity, gauss_poly, pochhammer, qbin_gauss, qbinom_sym,
                       qint, qpow, regularized_coefficients, regularized_ok, verify_qbinomial_identity)

q = sympy.Symbol("q")

coefficients = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))
laurent_dicts = st.dictionaries(st.integers(-6, 6), coefficients, max_size=5)


def to_sympy(p: LaurentPoly):
    return sum((sympy.Rational(c.numerator, c.denominator) * q ** e for e, c in p.terms().items()),
               sympy.Integer(0))


def dict_to_sympy(d):
    return sum((sympy.Rational(c.numerator, c.denominator) * q ** e for e, c in d.items()),
               sympy.Integer(0))


@given(laurent_dicts, laurent_dicts)
def test_laurent_arithmetic_matches_sympy(a, b):
    x, y = LaurentPoly(a), LaurentPoly(b)
    sa, sb = dict_to_sympy(a), dict_to_sympy(b)
    assert sympy.expand(to_sympy(x + y) - (sa + sb)) == 0
    assert sympy.expand(to_sympy(x * y) - sa * sb) == 0
    assert sympy.expand(to_sympy(x.bar()) - sa.subs(q, 1 / q)) == 0
    assert x.bar().bar() == x


@given(laurent_dicts, laurent_dicts)
def test_rational_functions_reduce_and_bar(a, b):
    x, y = LaurentPoly(a), LaurentPoly(b) + qpow(7)
    r = RationalFunc(x, y)
    assert r * RationalFunc(y) == RationalFunc(x)
    assert r.bar().bar() == r
    if not x.is_zero():
        assert r / r == RationalFunc(ONE)


def q_pascal(n, k, memo={}):
    """Independent oracle: symmetric Gaussian binomial by the q-Pascal rule on exponent dicts."""
    if k < 0 or k > n:
        return {}
    if k == 0 or k == n:
        return {0: 1}
    key = (n, k)
    if key not in memo:
        out = {}
        for e, c in q_pascal(n - 1, k).items():
            out[e - k] = out.get(e - k, 0) + c
        for e, c in q_pascal(n - 1, k - 1).items():
            out[e + n - k] = out.get(e + n - k, 0) + c
        memo[key] = {e: c for e, c in out.items() if c}
    return memo[key]


@pytest.mark.parametrize("n", range(0, 9))
def test_symmetric_binomial_matches_q_pascal(n):
    for k in range(n + 1):
        assert qbinom_sym(n, k).terms() == {e: Fraction(c) for e, c in q_pascal(n, k).items()}


def test_q_number_examples():
    assert qint(2) == LaurentPoly({1: 1, -1: 1})
    assert qbin_gauss(2, 1) == LaurentPoly({1: 1, -1: 1})
    for n in range(6):
        assert qbinom_sym(n, 0) == ONE
    assert pochhammer(1, 1, 1) == LaurentPoly({0: 1, 1: -1})
    assert pochhammer(2, 2, 2) == LaurentPoly({0: 1, 2: -1}) * LaurentPoly({0: 1, 4: -1})
    assert pochhammer(5, 0, 3) == ONE
    assert gauss_poly(4, 2, 1) == LaurentPoly({0: 1, 1: 1, 2: 2, 3: 1, 4: 1})


def test_a_coefficients():
    for n in range(-3, 4):
        assert a_coeff(0, n, 5) == ONE
        t = 3
        expected = -qpow(1 - n) * qpow(t) * (ONE - qpow(n))
        assert a_coeff(1, n, t) == expected


@pytest.mark.parametrize("n", range(1, 5))
def test_a_coefficient_valuation(n):
    # a_k(q^t) has valuation k(t + 1 - n), so it is regular exactly when t >= n - 1
    for k in range(11):
        for t in range(-2, 6):
            assert a_coeff(k, n, t).valuation() == k * (t + 1 - n)


def test_qbinomial_identity_identity_small_cases():
    assert identity_sum(3, 0, 2) == ONE
    assert verify_qbinomial_identity(0, 0, 0)
    assert verify_qbinomial_identity(5, 2, 3)


def test_qbinomial_identity_membership_needs_l_at_least_n_plus_m():
    # the identity itself holds, but A = 2 + q^2 leaves 1 + qZ[q] when l < n + m
    assert identity_sum(1, 1, 2) == LaurentPoly({0: 2, 2: 1})
    assert not verify_qbinomial_identity(1, 1, 2)


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_qbinomial_identity_identity_holds_for_l_at_least_n_plus_m(n, m, extra):
    assert verify_qbinomial_identity(n + m + extra, m, n)


def test_scan_qbinomial_identity_small_box_failures_are_outside_the_range():
    failures = scan_qbinomial_identity(3, 3, 3)
    assert failures == [(1, 1, 2), (2, 2, 2), (3, 3, 2), (1, 1, 3), (2, 2, 3), (3, 3, 3)]
    assert all(l < n + m for l, m, n in failures)


def test_sl2_module_relations():
    for l in range(6):
        assert Sl2Module(l).check_relations()
        assert Sl2Module(l, step=2).check_relations()


def test_regularized_operator_examples():
    assert regularized_coefficients(0, Sl2Module(3))[0] == ONE
    c = regularized_coefficients(1, Sl2Module(4))[1]
    assert c.is_regular() and c.is_integral() and c.at_zero() == 1


@pytest.mark.parametrize("l", range(0, 11))
def test_regularized_operators_nonnegative_and_minus_one(l):
    for n in range(-1, 5):
        assert regularized_ok(n, l)


@pytest.mark.parametrize("l", range(0, 8))
def test_closed_form_coefficient_matches_matrix(l):
    module = Sl2Module(l)
    for n in range(0, 4):
        coeffs = regularized_coefficients(n, module)
        for m in range(l + 1 - n):
            assert coeffs[m] == regularized_coefficient_closed_form(l, m, n)


def test_regularized_operator_at_minus_two_vanishes():
    # the defining sum cancels completely for even n <= -2 (see the acceptance analysis)
    assert regularized_coefficients(-2, Sl2Module(4)) == {}
