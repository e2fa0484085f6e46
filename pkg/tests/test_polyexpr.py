from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conelab.errors import PolySyntaxError
from conelab.polyexpr import Poly, jet2, parse_poly


def test_parse_quadratic():
    p = parse_poly("-y1^2 + y2", ["y1", "y2"])
    assert p.terms == {(2, 0): -1, (0, 1): 1}


def test_parse_zero():
    assert parse_poly("0", ["y1"]).is_zero()


def test_parse_cubic():
    p = parse_poly("y3 - y1^3", ["y1", "y2", "y3"])
    assert p.terms == {(0, 0, 1): 1, (3, 0, 0): -1}


def test_parse_products_and_rationals():
    p = parse_poly("(y1 - 2)*(y1 + 2) + 3/2*y2", ["y1", "y2"])
    assert p.terms == {(2, 0): 1, (0, 1): Fraction(3, 2), (0, 0): -4}


@pytest.mark.parametrize("text", ["y1^", "y1 + ", "z", "y1^-1", "(y1", "y1 y2"])
def test_syntax_errors_carry_position(text):
    with pytest.raises(PolySyntaxError) as err:
        parse_poly(text, ["y1", "y2"])
    assert err.value.position >= 0


def test_jet_of_fixture_constraint():
    val, grad, hess = jet2(parse_poly("-y1^2 + y2", ["y1", "y2"]), (0, 0))
    assert val == 0 and grad == (0, 1)
    assert hess == ((-2, 0), (0, 0))


def test_jet_of_zero():
    val, grad, hess = jet2(Poly(["a", "b"]), (5, 7))
    assert val == 0 and grad == (0, 0) and hess == ((0, 0), (0, 0))


def test_jet_of_cubic_at_origin():
    val, grad, hess = jet2(parse_poly("y3 - y1^3", ["y1", "y2", "y3"]), (0, 0, 0))
    assert val == 0 and grad == (0, 0, 1)
    assert all(x == 0 for row in hess for x in row)


coef = st.integers(-5, 5)


@given(coef, coef, coef, coef, st.integers(-3, 3), st.integers(-3, 3))
def test_jet_matches_finite_differences(a, b, c, d, x, y):
    # exact second differences of a cubic agree with its jet up to the cubic term
    p = parse_poly(f"{a}*y1^2 + {b}*y1*y2 + {c}*y2 + {d}*y1^3", ["y1", "y2"])
    val, grad, hess = jet2(p, (x, y))
    assert val == p((x, y))
    assert grad[0] == 2 * a * x + b * y + 3 * d * x * x
    assert grad[1] == b * x + c
    assert hess[0][0] == 2 * a + 6 * d * x and hess[0][1] == b and hess[1][1] == 0


def test_render_roundtrip():
    p = parse_poly("-y1^2 + 3*y1*y2 - 1/2", ["y1", "y2"])
    assert parse_poly(p.render(), ["y1", "y2"]) == p
