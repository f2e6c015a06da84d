import pytest
from hypothesis import given, settings, strategies as st
from fractions import Fraction

from gmmp.algebra import PolyRing
from gmmp.parser import ParseError, parse_poly

R = PolyRing(["x0", "x1", "x2", "x3"])


def test_generator_example():
    p = parse_poly("x1^2 - x0*x2", R)
    assert p.terms == {(0, 2, 0, 0): 1, (1, 0, 1, 0): -1}


def test_zero_and_binomial():
    assert parse_poly("0", R).is_zero()
    assert str(parse_poly("(x0 + x1)^2", R)) == "x0^2 + 2*x0*x1 + x1^2"


def test_rational_constants_and_unary_minus():
    p = parse_poly("-x0/2 + 3/4*x1", R)
    assert p.terms[(1, 0, 0, 0)] == Fraction(-1, 2)
    assert p.terms[(0, 1, 0, 0)] == Fraction(3, 4)


@pytest.mark.parametrize("src,col,fragment", [
    ("x0 x1", 4, "implicit"),
    ("x0*x9", 4, "unknown variable"),
    ("x0^-1", 4, "exponent"),
    ("x0^", 4, "exponent"),
    ("(x0 + x1", 9, ""),
    ("x0 + ", 6, ""),
])
def test_errors_carry_column(src, col, fragment):
    with pytest.raises(ParseError) as ei:
        parse_poly(src, R, line=7)
    assert ei.value.line == 7
    assert ei.value.col == col
    assert fragment in ei.value.msg


exps = st.tuples(*[st.integers(0, 3)] * 4)
coef = st.fractions(min_value=-20, max_value=20, max_denominator=6).filter(bool)


@given(st.dictionaries(exps, coef, max_size=6))
@settings(max_examples=100, deadline=None)
def test_print_parse_roundtrip(terms):
    p = R.poly(terms)
    assert parse_poly(str(p), R) == p
