import pytest

from utils.helpers import format_fraction, nonincreasing_tuples, parse_fraction, weak_compositions
from utils.validators import parse_exponents, parse_number_range, validate_b_spec


class TestParseNumberRange:

    @pytest.mark.parametrize("text,expected", [
        ("5", [5]),
        ("0-3", [0, 1, 2, 3]),
        ("1,3,5", [1, 3, 5]),
        ("0-2,5", [0, 1, 2, 5]),
        ("3,1-2,3", [1, 2, 3]),
    ])
    def test_valid(self, text, expected):
        assert parse_number_range(text) == expected

    @pytest.mark.parametrize("text", ["3-1", "a", "1-b", "", "-1", "1-2-3", "2,,3"])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            parse_number_range(text)


class TestParseExponents:

    def test_valid(self):
        assert parse_exponents("2, 0,1") == (2, 0, 1)

    @pytest.mark.parametrize("text", ["", "1,x", "1,-2"])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            parse_exponents(text)


class TestValidateBSpec:

    def test_valid_spec(self):
        assert validate_b_spec(1, 2, 2, (2, 1)) == []

    def test_every_problem_listed(self):
        problems = validate_b_spec(-1, 0, -1, (1,))
        assert len(problems) == 4

    def test_unstable_space(self):
        assert validate_b_spec(0, 1, 1, (0,)) == ["M_{0,2} is unstable (2g-2+n+m <= 0)"]


class TestHelpers:

    def test_fraction_format(self):
        assert format_fraction(1) == "1/1"
        assert parse_fraction("-3/7") == parse_fraction("6/-14")

    def test_weak_compositions(self):
        assert list(weak_compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]
        assert list(weak_compositions(2, 2, caps=(1, None))) == [(1, 1), (0, 2)]
        assert list(weak_compositions(-1, 2)) == []

    def test_nonincreasing_tuples(self):
        assert list(nonincreasing_tuples(3, 2, floor=1)) == [(2, 1)]
        assert sorted(nonincreasing_tuples(2, 3)) == [(1, 1, 0), (2, 0, 0)]
