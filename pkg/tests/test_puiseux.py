from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from singcurve.curves import parse_polynomial as P
from singcurve.errors import IrrationalBranch, NotSquarefree
from singcurve.numerics import PowerSeries, lowest_homogeneous_form, poly_eval_on_param
from singcurve.puiseux import BranchParam, branches, extend_branch, newton_polygon, normalize_branch


def vanishes(f, b):
    r = poly_eval_on_param(f, b.x, b.y)
    return r.order() is None or r.order() == float("inf")


def test_newton_polygon_cusp():
    (e,) = newton_polygon(P("x^2-y^3"))
    assert set(e.endpoints) == {(2, 0), (0, 3)}
    assert e.slope == Fraction(-2, 3)
    assert e.exponent == Fraction(3, 2)


def test_newton_polygon_single_point_support():
    # x*y has the single support point (1, 1): no compact edge
    assert newton_polygon(P("x*y")) == []


def test_newton_polygon_axis_factors():
    (e,) = newton_polygon(P("x^2*y + x*y^3"))
    assert e.endpoints == ((1, 3), (2, 1))
    bs = branches(P("x^2*y + x*y^3"))
    assert len(bs) == 3
    axes = {(b.x.is_monomial() and b.y.order() == float("inf")) or (b.y.is_monomial() and b.x.order() == float("inf"))
            for b in bs}
    assert True in axes


def test_newton_polygon_points_above_edges():
    f = P("x^5 + x^3*y - 2*x^2*y^2 + y^4 + y^7")
    for e in newton_polygon(f):
        (i0, j0), (i1, j1) = e.endpoints
        for (i, j) in f.terms:
            # (j - j0)*(i1 - i0) >= (i - i0)*(j1 - j0) above the line
            assert (j - j0) * (i1 - i0) - (i - i0) * (j1 - j0) >= 0


def test_cusp_branch():
    (b,) = branches(P("x^2-y^3"))
    assert b.exact
    assert b.x == PowerSeries({3: 1}) and b.y == PowerSeries({2: 1})


def test_example4_branches():
    f = P("(x^2-y^3)*(x^2-y^3-y^4)")
    bs = branches(f, 16)
    assert len(bs) == 2
    exact = [b for b in bs if b.exact]
    other = [b for b in bs if not b.exact]
    assert len(exact) == 1 and len(other) == 1
    g = other[0]
    assert g.y == PowerSeries({2: 1})
    assert [g.x.coefficient(k) for k in (3, 5, 7)] == [1, Fraction(1, 2), Fraction(-1, 8)]
    for b in bs:
        assert vanishes(f, b)


def test_example4_extension_is_binomial_series():
    f = P("x^2-y^3-y^4")
    (b,) = branches(f, 6)
    e = extend_branch(f, b, 12)
    assert e.truncation_order >= 12
    T = sympy.Symbol("T")
    ref = sympy.series(T ** 3 * sympy.sqrt(1 + T ** 2), T, 0, 12).removeO()
    for k in range(12):
        assert e.x.coefficient(k) == Fraction(str(ref.coeff(T, k)))
    # prefix consistency and the no-op case
    assert e.x.agrees_with(b.x)
    assert extend_branch(f, e, 5) is e


def test_exact_extension_is_identity():
    f = P("x^2-y^3")
    (b,) = branches(f, 5)
    assert extend_branch(f, b, 20) == b


def test_irrational_branch():
    with pytest.raises(IrrationalBranch) as exc:
        branches(P("x^2+y^2"))
    assert exc.value.face_polynomial is not None
    with pytest.raises(IrrationalBranch):
        branches(P("x^2-2*y^2"))
    # x^2 = 2y^3 is rational after rescaling the parameter
    (b,) = branches(P("x^2-2*y^3"))
    assert vanishes(P("x^2-2*y^3"), b)


def test_not_squarefree():
    with pytest.raises(NotSquarefree):
        branches(P("(x-y)^2"))


def test_vertical_tangent_orientation():
    (b,) = branches(P("y^2-x^3"))
    assert b.y.order() > b.x.order()


def test_normalize_branch():
    b = BranchParam(PowerSeries({2: 1, 3: 1}), PowerSeries({5: 1}), exact=True).validate()
    n, c, Y = normalize_branch(b, 12)
    assert (n, c) == (2, 1)
    # reference: solve t^2 + t^3 = s^2 for t(s) by fixed point, then y = t^5
    s = sympy.Symbol("s")
    t = s
    for _ in range(12):
        t = sympy.series(s * (1 + t) ** sympy.Rational(-1, 2), s, 0, 12).removeO()
    ref = sympy.expand(sympy.series(t ** 5, s, 0, 12).removeO())
    for k in range(12):
        assert Y.coefficient(k) == Fraction(str(ref.coeff(s, k)))


@pytest.mark.parametrize("text", [
    "x^2-y^3", "x^2-y^5", "x^3-y^5", "(x^2-y^3)*(x^2-y^3-y^4)",
    "(y-x^2)*(y+x^2)*(x-y^3)", "x^4-2*x^2*y^3-4*x*y^5+y^6-y^7",
])
def test_multiplicities_sum_to_tangent_cone(text):
    f = P(text)
    bs = branches(f, 24)
    assert sum(b.multiplicity() for b in bs) == lowest_homogeneous_form(f).order()
    for b in bs:
        assert vanishes(f, b)


@given(st.sampled_from([(2, 3), (2, 5), (3, 4), (3, 5), (2, 7), (4, 5)]),
       st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(lambda q: q != 0))
def test_quasi_homogeneous_branches(pq, a):
    p, q = pq
    f = P(f"x^{p}-{a.numerator}/{a.denominator}*y^{q}")
    try:
        bs = branches(f, 16)
    except IrrationalBranch:
        return
    assert len(bs) == 1 and bs[0].multiplicity() == min(p, q)
    assert vanishes(f, bs[0])
