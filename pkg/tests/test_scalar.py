#!/usr/bin/env python3
"""
Tests for the Laurent-polynomial scalar layer.

Covers ring arithmetic, exact division, the fraction field used by the
window solver, and the canonical text form.
"""
import sys
from fractions import Fraction
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalar import (
    ONE,
    ZERO,
    Scalar,
    ScalarFraction,
    div_exact,
    format_fraction,
    format_scalar,
    frac,
    frac_inv,
    scalar_gcd,
    t_pow,
)
from skein_errors import DivisionByZero, NotExactDivision


scalars = st.dictionaries(
    st.integers(min_value=-5, max_value=5),
    st.integers(min_value=-4, max_value=4),
    max_size=4,
).map(Scalar)


class TestScalarArithmetic:
    """Tests for ring operations on Scalar."""

    def test_zero_coefficients_are_dropped(self):
        s = Scalar({2: 0, 1: 3})
        assert s.terms == {1: 3}
        assert Scalar({0: 0}).is_zero()

    def test_square_of_unknot(self):
        circle = t_pow(1) + t_pow(-1)
        assert circle * circle == t_pow(2) + 2 + t_pow(-2)

    def test_int_promotion(self):
        assert t_pow(0) == 1
        assert ONE + 1 == Scalar({0: 2})
        assert 3 - t_pow(1) == Scalar({0: 3, 1: -1})

    def test_bar_and_shift(self):
        s = Scalar({3: 2, -1: -1})
        assert s.bar() == Scalar({-3: 2, 1: -1})
        assert s.shift(2) == Scalar({5: 2, 1: -1})

    def test_at_one(self):
        assert (t_pow(1) + t_pow(-1)).at_one() == 2
        assert Scalar({4: Fraction(1, 2), 0: -3}).at_one() == Fraction(-5, 2)

    def test_power(self):
        assert (t_pow(1) + 1) ** 2 == t_pow(2) + t_pow(1) * 2 + 1
        assert t_pow(3) ** 0 == ONE

    def test_degree_range_of_zero_raises(self):
        with pytest.raises(ValueError):
            ZERO.degree_range()

    @settings(max_examples=50, deadline=None)
    @given(scalars, scalars, scalars)
    def test_ring_laws(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a - a == ZERO


class TestExactDivision:
    """Tests for div_exact."""

    def test_monomial_divisor(self):
        assert div_exact(Scalar({3: 4, 1: 2}), Scalar({1: 2})) == Scalar({2: 2, 0: 1})

    def test_polynomial_divisor(self):
        num = t_pow(2) - t_pow(-2)
        den = t_pow(1) - t_pow(-1)
        assert div_exact(num, den) == t_pow(1) + t_pow(-1)

    def test_inexact_division_raises(self):
        with pytest.raises(NotExactDivision):
            div_exact(t_pow(1) + 1, t_pow(1) - 1)

    def test_division_by_zero_raises(self):
        with pytest.raises(DivisionByZero):
            div_exact(ONE, ZERO)

    @settings(max_examples=40, deadline=None)
    @given(scalars, scalars)
    def test_divides_products(self, a, b):
        if b.is_zero():
            return
        assert div_exact(a * b, b) == a

    def test_gcd_strips_units(self):
        a = (t_pow(1) + 1) * (t_pow(1) - 1) * t_pow(-3)
        b = (t_pow(1) + 1) * 2
        assert scalar_gcd(a, b) == t_pow(1) + 1
        assert scalar_gcd(a, t_pow(5)) == ONE
        assert scalar_gcd(ZERO, b) == b

    @settings(max_examples=30, deadline=None)
    @given(scalars, scalars)
    def test_gcd_divides_both(self, a, b):
        if a.is_zero() or b.is_zero():
            return
        g = scalar_gcd(a, b)
        assert div_exact(a, g) * g == a
        assert div_exact(b, g) * g == b


class TestScalarFraction:
    """Tests for the reduced fraction field."""

    def test_common_factor_cancels(self):
        x = frac(t_pow(2) - 1, t_pow(1) - 1)
        assert x.is_polynomial()
        assert x.to_scalar() == t_pow(1) + 1

    def test_sum_to_one(self):
        den = t_pow(1) + 1
        assert frac(1, den) + frac(t_pow(1), den) == frac(1)

    def test_inverse(self):
        x = frac(t_pow(1) + 1, t_pow(2) + 3)
        assert x * frac_inv(x) == frac(1)

    def test_inverse_of_zero_raises(self):
        with pytest.raises(DivisionByZero):
            frac_inv(frac(0))

    def test_zero_denominator_raises(self):
        with pytest.raises(DivisionByZero):
            ScalarFraction(ONE, ZERO)

    def test_equality_is_syntactic(self):
        assert frac(t_pow(1) * 2, t_pow(2) * 2 + 2) == frac(t_pow(1), t_pow(2) + 1)


class TestCanonicalText:
    """Tests for format_scalar / format_fraction."""

    def test_descending_exponents(self):
        s = Scalar({2: Fraction(3, 2), 0: 1, -4: -1})
        assert format_scalar(s) == "3/2*t^2 + 1 - t^-4"

    def test_zero_and_constants(self):
        assert format_scalar(ZERO) == "0"
        assert format_scalar(Scalar({0: -7})) == "-7"
        assert format_scalar(t_pow(1)) == "t"
        assert format_scalar(Scalar({1: -1})) == "-t"

    def test_fraction_text(self):
        assert format_fraction(frac(t_pow(2))) == "t^2"
        assert format_fraction(frac(1, t_pow(1) + 1)) == "(1)/(t + 1)"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
