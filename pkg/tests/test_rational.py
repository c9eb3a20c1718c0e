from fractions import Fraction

import pytest

from models.errors import DomainError
from models.rational import (
    decimal_string,
    exponent_vector,
    format_rational,
    from_exponent_vector,
    never_connect,
    parse_rational,
    rational_from_json,
    rational_to_json,
)
from models.semigroup import frobenius_number, minimal_generators


@pytest.mark.parametrize("text,expected", [
    ("1/2", Fraction(1, 2)),
    ("3", Fraction(3)),
    (" 10 / 4 ", Fraction(5, 2)),
    ("-2/3", Fraction(-2, 3)),
    (7, Fraction(7)),
])
def test_parse_rational_accepts_exact_forms(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("bad", ["0.5", "1e3", "1/0", "abc", "", 0.5, True])
def test_parse_rational_rejects_inexact_or_malformed(bad):
    with pytest.raises(DomainError):
        parse_rational(bad)


def test_format_and_json():
    assert format_rational(Fraction(3, 6)) == "1/2"
    assert format_rational(Fraction(4)) == "4"
    assert rational_to_json(Fraction(5, 6)) == {"num": "5", "den": "6"}
    assert rational_from_json({"num": "5", "den": "6"}) == Fraction(5, 6)
    with pytest.raises(DomainError):
        rational_from_json({"num": "0.5", "den": "1"})
    with pytest.raises(DomainError):
        rational_from_json({"num": "1", "den": "0"})


def test_decimal_string_rounds_half_up():
    assert decimal_string(Fraction(1, 9), 12) == "0.111111111111"
    assert decimal_string(Fraction(2, 3), 3) == "0.667"
    assert decimal_string(Fraction(1), 2) == "1.00"


def test_exponent_vector():
    assert exponent_vector(Fraction(1, 2)) == {2: -1}
    assert exponent_vector(Fraction(12, 5)) == {2: 2, 3: 1, 5: -1}
    assert exponent_vector(Fraction(1)) == {}
    assert from_exponent_vector({2: 2, 3: 1, 5: -1}) == Fraction(12, 5)
    with pytest.raises(DomainError):
        exponent_vector(Fraction(0))


@pytest.mark.parametrize("r,rho,expected", [
    (Fraction(1, 2), Fraction(3), True),
    (Fraction(1, 4), Fraction(2), False),
    (Fraction(4, 9), Fraction(3, 2), False),
    (Fraction(1, 2), Fraction(6), True),
    (Fraction(1, 3), Fraction(5), True),
    (Fraction(1), Fraction(3), False),
])
def test_never_connect(r, rho, expected):
    assert never_connect(r, rho) is expected


def test_minimal_generators_and_frobenius():
    assert minimal_generators([2, 3, 4, 5, 6]) == [2, 3]
    assert minimal_generators([4, 6, 8, 10, 12]) == [4, 6]
    assert frobenius_number([3, 5]) == 7
    assert frobenius_number([6, 9, 20]) == 43
    assert frobenius_number([1, 4]) == -1
    with pytest.raises(DomainError):
        frobenius_number([4, 6])
