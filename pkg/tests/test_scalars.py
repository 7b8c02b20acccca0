from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgkit.scalars import I, ONE, ZERO, Scalar, ScalarParseError


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
scalars = st.builds(Scalar, rationals, rationals)


def test_parse_plain_integers():
    assert Scalar.parse("2") == Scalar(2)
    assert Scalar.parse("-7") == Scalar(-7)
    assert Scalar.parse("1/3") == Scalar(Fraction(1, 3))


def test_parse_complex_forms():
    assert Scalar.parse("-1/3+1*i") == Scalar(Fraction(-1, 3), 1)
    assert Scalar.parse("0-2/5*i") == Scalar(0, Fraction(-2, 5))


def test_parse_rejects_zero_denominator():
    with pytest.raises(ScalarParseError):
        Scalar.parse("1/0")


@pytest.mark.parametrize("bad", ["", "i", "1+i", "1 + 2*i", "1/2/3", "1*j"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ScalarParseError):
        Scalar.parse(bad)


@given(scalars)
def test_format_parse_round_trip(x):
    assert Scalar.parse(str(x)) == x


@given(scalars, scalars)
def test_exact_addition(a, b):
    assert (a + b) - b == a


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@given(scalars)
def test_multiplicative_inverse(a):
    if not a.is_zero():
        assert a * a.inverse() == ONE


def test_i_squares_to_minus_one():
    assert I * I == -ONE


def test_division_exact():
    x = Scalar(Fraction(3, 4), Fraction(-1, 2))
    y = Scalar(Fraction(1, 3), Fraction(5, 7))
    assert (x / y) * y == x
    with pytest.raises(ZeroDivisionError):
        x / ZERO
