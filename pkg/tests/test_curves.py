import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from singcurve.curves import (
    CurveSpec,
    curve_from_branches,
    load_curve,
    parse_parametrization,
    parse_polynomial,
    parse_series,
    save_curve,
)
from singcurve.errors import (
    ConsistencyError,
    CurveSyntaxError,
    ImprimitiveBranch,
    InputError,
    NonPositiveOrder,
    SchemaError,
    UnknownVariable,
)
from singcurve.numerics import BivariatePolynomial, PowerSeries, poly_eval_on_param


def test_parse_simple():
    assert parse_polynomial("x^2 - y^3").terms == {(2, 0): 1, (0, 3): -1}
    assert parse_polynomial("x + 1/2*y").terms == {(1, 0): 1, (0, 1): Fraction(1, 2)}


def test_example_product_expansion():
    f = parse_polynomial("(x^2-y^3)*(x^2-y^3-y^4)")
    assert f.total_degree() == 7
    # x^4 - 2x^2y^3 - x^2y^4 + y^6 + y^7
    assert f.terms == {(4, 0): 1, (2, 3): -2, (2, 4): -1, (0, 6): 1, (0, 7): 1}
    assert len(f) == 5
    g1, g2 = parse_polynomial("x^2-y^3"), parse_polynomial("x^2-y^3-y^4")
    rng = random.Random(4)
    for _ in range(5):
        p = (Fraction(rng.randint(-9, 9), rng.randint(1, 9)), Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        assert f(*p) == g1(*p) * g2(*p)


@pytest.mark.parametrize("text,pos", [
    ("x^2-", 4),
    ("x y", 2),
    ("2x", 1),
    ("(x^2-y^3)(x-y)", 9),
    ("x^-1", 2),
    ("x/y", 1),
    ("x^2 + + ", 8),
    ("((x)", 4),
])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(CurveSyntaxError) as exc:
        parse_polynomial(text)
    assert exc.value.position == pos


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as exc:
        parse_polynomial("x^2 - z")
    assert exc.value.position == 6


def test_rational_and_unary():
    assert parse_polynomial("-(x - 3/4*y)^2").terms == {
        (2, 0): -1, (1, 1): Fraction(3, 2), (0, 2): Fraction(-9, 16)}
    with pytest.raises(CurveSyntaxError):
        parse_polynomial("1/0*x")


def test_parametrization():
    b = parse_parametrization("x(t)=t^3; y(t)=t^2")
    assert b.exact and b.x == PowerSeries({3: 1}) and b.y == PowerSeries({2: 1})
    assert b.truncation_order == 4
    assert poly_eval_on_param(parse_polynomial("x^2-y^3"), b.x, b.y).order() == float("inf")
    axis = parse_parametrization("x(t) = t; y(t) = 0")
    assert axis.multiplicity() == 1
    with pytest.raises(ImprimitiveBranch):
        parse_parametrization("x(t)=t^2; y(t)=t^4")
    with pytest.raises(NonPositiveOrder):
        parse_parametrization("x(t)=1+t; y(t)=t")
    with pytest.raises(NonPositiveOrder):
        parse_parametrization("x(t)=0; y(t)=0")
    with pytest.raises(CurveSyntaxError):
        parse_parametrization("x(t)=t^3, y(t)=t^2")


def test_hidden_imprimitivity():
    # exponent gcd is 1 but the map factors through s = t^2 + t^3
    with pytest.raises(ImprimitiveBranch):
        parse_parametrization("x(t)=t^2+t^3; y(t)=(t^2+t^3)^3")
    with pytest.raises(ImprimitiveBranch):
        parse_parametrization("x(t)=2*t^5-t^9; y(t)=0")


def test_load_examples():
    c = load_curve('{"branches":[{"x":"t^3","y":"t^2"}]}')
    assert len(c.branches) == 1
    p = load_curve('{"polynomial":"x^2-y^3"}')
    (b,) = p.branches
    assert b.exact and b.multiplicity() == 2
    assert {b.x.leading()[0], b.y.leading()[0]} == {2, 3}
    with pytest.raises(SchemaError):
        load_curve("{not json")
    with pytest.raises(SchemaError):
        load_curve('{"branches": []}')
    with pytest.raises(SchemaError):
        load_curve('{"branches": [{"x": "t"}]}')
    with pytest.raises(SchemaError):
        load_curve('{"polynomial": "x", "branches": []}')
    with pytest.raises(SchemaError):
        load_curve('{"polynomial": "x", "truncation": 0.5}')


def test_consistency_error():
    doc = {"polynomial": "x^2-y^3", "branches": [{"x": "t^3", "y": "t^2"}, {"x": "t", "y": "t"}]}
    with pytest.raises(ConsistencyError):
        load_curve(doc)


def test_rationals_serialized_as_strings():
    spec = load_curve({"branches": [{"x": "t^2", "y": "1/3*t^3 - 2/5*t^5", "label": "g"}]})
    doc = json.loads(save_curve(spec))
    assert "1/3" in doc["branches"][0]["y"] and doc["branches"][0]["label"] == "g"
    assert load_curve(save_curve(spec)) == spec


def test_polynomial_round_trip():
    spec = load_curve({"polynomial": "(x^2-y^3)*(x^2-y^3-y^4)", "truncation": 24})
    doc = json.loads(save_curve(spec))
    assert parse_polynomial(doc["polynomial"]) == parse_polynomial("(x^2-y^3)*(x^2-y^3-y^4)")
    again = load_curve(save_curve(spec))
    assert again.branches == spec.branches


def test_zero_and_offorigin_polynomials_rejected():
    with pytest.raises(InputError):
        load_curve({"polynomial": "0"})
    with pytest.raises(InputError):
        load_curve({"polynomial": "1+x"})


def test_union_multiplies_equations():
    a = load_curve({"polynomial": "x^2-y^3"})
    b = load_curve({"polynomial": "y"})
    u = a.union(b)
    assert u.implicit_equation == parse_polynomial("x^2*y-y^4")
    assert len(u.branches) == 2


small = st.fractions(min_value=-9, max_value=9, max_denominator=7)
polys = st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)), small, min_size=1, max_size=6)


@given(polys)
def test_print_parse_round_trip(d):
    f = BivariatePolynomial(d)
    assert parse_polynomial(str(f)) == f


@given(st.dictionaries(st.integers(0, 9), small, max_size=5))
def test_series_round_trip(d):
    s = PowerSeries(d)
    assert parse_series(s.to_str(big_o=False)) == s


@given(st.text(alphabet="xyt0123456789+-*/^() .", max_size=25))
def test_parser_never_crashes(text):
    try:
        parse_polynomial(text)
    except InputError as exc:
        assert getattr(exc, "position", None) is not None or isinstance(exc, UnknownVariable)
    except ZeroDivisionError:
        pytest.fail("division by zero leaked")
