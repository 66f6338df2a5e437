from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from singcurve.errors import DivisionByHigherOrder
from singcurve.numerics import (
    INDETERMINATE,
    BivariatePolynomial,
    PowerSeries,
    binomial_series,
    lowest_homogeneous_form,
    poly_eval_on_param,
    series_arith,
    series_order,
    squarefree_check,
    to_sympy,
)
from singcurve.curves import parse_polynomial

t = PowerSeries.monomial


def S(coeffs, prec=None):
    return PowerSeries(coeffs, prec)


def test_order_examples():
    assert series_order(S({2: 1, 3: 1}, 10)) == 2
    assert series_order(S({}, 10)) is INDETERMINATE
    assert series_order(S({5: 3}, 10) - S({5: 3}, 10) + S({7: 1}, 10)) == 7


def test_exact_zero_has_infinite_order():
    assert series_order(S({})) == float("inf")


def test_arith_examples():
    assert series_arith(t(2), t(3), "mul") == t(5)
    assert series_arith(S({6: 1, 8: 1}), t(6), "div") == S({0: 1, 2: 1})
    q = series_arith(S({3: 1, 5: Fraction(1, 2)}), t(2), "div")
    assert q == S({1: 1, 3: Fraction(1, 2)})


def test_division_by_higher_order():
    with pytest.raises(DivisionByHigherOrder):
        series_arith(t(2), t(3), "div")


def test_truncated_division_loses_precision():
    a = S({4: 1, 5: 2}, 10)
    q = a.div(t(2), None)
    assert q.prec == 8
    assert q == S({2: 1, 3: 2}, 8)


def test_truncated_product_precision():
    a = S({2: 1}, 10)
    b = S({3: 1, 4: 1}, 12)
    # min(10 + ord b, 12 + ord a)
    p = a * b
    assert p.prec == 13
    assert p.coefficient(5) == 1 and p.coefficient(6) == 1


def test_poly_eval_examples():
    x, y = t(3), t(2)
    assert series_order(poly_eval_on_param(parse_polynomial("x^2-y^3"), x, y)) == float("inf")
    r = poly_eval_on_param(parse_polynomial("x^2-y^3-y^4"), x.truncate(20), y.truncate(20))
    assert series_order(r) == 8 and r.coefficient(8) == -1
    assert poly_eval_on_param(parse_polynomial("y"), x, y) == t(2)


def test_lowest_homogeneous_form():
    assert lowest_homogeneous_form(parse_polynomial("x^2-y^3")) == parse_polynomial("x^2")
    assert lowest_homogeneous_form(parse_polynomial("x^2-y^2+x^3")) == parse_polynomial("x^2-y^2")
    assert lowest_homogeneous_form(parse_polynomial("x")) == parse_polynomial("x")


def test_squarefree():
    assert squarefree_check(parse_polynomial("x^2-y^3"))
    assert not squarefree_check(parse_polynomial("(x-y)^2"))
    assert squarefree_check(parse_polynomial("x*y"))
    assert not squarefree_check(parse_polynomial("x*(x^2-y^3)^2"))


def test_binomial_series_matches_sympy():
    # (1 + t^2)^(1/2) through t^11
    s = binomial_series(S({2: 1}), Fraction(1, 2), 12)
    T = sympy.Symbol("T")
    ref = sympy.series(sympy.sqrt(1 + T ** 2), T, 0, 12).removeO()
    for k in range(12):
        assert s.coefficient(k) == Fraction(str(ref.coeff(T, k)))


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
series = st.dictionaries(st.integers(0, 12), rationals, max_size=6).map(lambda d: PowerSeries(d, 14))


@given(rationals, rationals)
def test_rational_add_sub(a, b):
    assert (a + b) - b == a


@given(series, series, series)
def test_mul_commutative_associative(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@given(series, series)
def test_division_inverts_multiplication(a, b):
    if b.order() in (INDETERMINATE, float("inf")) or b.order() > 4:
        return
    p = a * b
    if p.order() is INDETERMINATE:
        return
    q = p.div(b)
    assert q.agrees_with(a)


polys = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), rationals, min_size=1, max_size=6)


@given(polys)
def test_lowest_form_is_homogeneous(d):
    f = BivariatePolynomial(d)
    if not f:
        return
    g = lowest_homogeneous_form(f)
    assert g.is_homogeneous()
    assert g.total_degree() == min(i + j for i, j in f.terms)


@given(polys, polys)
def test_poly_ring_against_sympy(d1, d2):
    f, g = BivariatePolynomial(d1), BivariatePolynomial(d2)
    assert sympy.expand((to_sympy(f) * to_sympy(g)).as_expr() - to_sympy(f * g).as_expr()) == 0
    pt = (Fraction(2, 3), Fraction(-5, 7))
    assert (f * g)(*pt) == f(*pt) * g(*pt)
