from fractions import Fraction

import pytest

from patrol.rationals import format_fraction, lcm_fractions, to_fraction


def test_parse_forms():
    assert to_fraction("2.5") == Fraction(5, 2)
    assert to_fraction("5/2") == Fraction(5, 2)
    assert to_fraction(" -0.125 ") == Fraction(-1, 8)
    assert to_fraction(3) == 3
    assert to_fraction(2.5) == Fraction(5, 2)  # via repr, not binary expansion
    assert to_fraction(Fraction(7, 3)) == Fraction(7, 3)


def test_parse_rejects_non_numbers():
    with pytest.raises(ValueError):
        to_fraction(True)
    with pytest.raises(ValueError):
        to_fraction(None)


def test_format_decimal_when_possible():
    assert format_fraction(Fraction(5, 2)) == "2.5"
    assert format_fraction(Fraction(1, 8)) == "0.125"
    assert format_fraction(Fraction(3, 5)) == "0.6"
    assert format_fraction(Fraction(-7, 4)) == "-1.75"
    assert format_fraction(Fraction(12)) == "12"
    assert format_fraction(Fraction(0)) == "0"


def test_format_fraction_when_not_decimal():
    assert format_fraction(Fraction(1, 3)) == "1/3"
    assert format_fraction(Fraction(-10, 7)) == "-10/7"


def test_round_trip():
    values = [Fraction(3, 7), Fraction(22, 10), Fraction(-9, 20), Fraction(10**12, 3)]
    for v in values:
        assert to_fraction(format_fraction(v)) == v


def test_lcm_fractions():
    assert lcm_fractions([Fraction(4), Fraction(6)]) == 12
    assert lcm_fractions([Fraction(1, 2), Fraction(1, 3)]) == 1
    assert lcm_fractions([Fraction(3, 2), Fraction(2)]) == 6
    with pytest.raises(ValueError):
        lcm_fractions([])
    with pytest.raises(ValueError):
        lcm_fractions([Fraction(0)])
