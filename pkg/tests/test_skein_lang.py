#!/usr/bin/env python3
"""
Tests for the expression language.

Tests parsing of the four sorts, sort checking, error positions, and the
canonical printer that parsing inverts.
"""
import random
import sys
from fractions import Fraction
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from annulus_module import AnnulusWord, core, from_word, identity, t_core, wedge1, x
from lens_reduction import LensElement
from scalar import Scalar, frac, t_pow
from skein_errors import DomainError, ParseError, SortError
from skein_lang import (
    format_annulus_word,
    format_torus_word,
    parse_annulus,
    parse_any,
    parse_fraction_text,
    parse_lens,
    parse_scalar_text,
    parse_torus,
    print_element,
)
from torus_algebra import TorusWord, t_curve, wedge
from verify_suite import random_annulus, random_lens, random_torus


class TestParsing:
    """Tests for parse_* on well-formed input."""

    def test_torus_product(self):
        assert parse_torus("T(1,0)*T(1,0)") == t_curve(2, 0) + wedge(1, 0).scale(2)

    def test_torus_with_scalars(self):
        expected = t_curve(1, -1).scale(t_pow(2)) - wedge(0, 1).scale(Fraction(1, 2))
        assert parse_torus("t^2*T(1,-1) - 1/2*W(0,1)") == expected

    def test_scalar_promotes_to_torus(self):
        assert parse_torus("3") == wedge(0, 0).scale(3)

    def test_annulus_atoms(self):
        assert parse_annulus("c(2)*w(-1)") == from_word(2, -1)
        assert parse_annulus("xT(2)") == t_core(2)
        assert parse_annulus("x(2,1)") == x(2, 1)
        assert parse_annulus("y(1,1)") == wedge1(1).scale(t_pow(-2))

    def test_grouping_and_whitespace(self):
        assert parse_annulus(" ( t + t^-1 ) * c( 1 ) ") == core(1).scale(t_pow(1) + t_pow(-1))

    def test_scalar_text(self):
        assert parse_scalar_text("3/2*t^2 + 1 - t^-4") == Scalar({2: Fraction(3, 2), 0: 1, -4: -1})

    def test_fraction_text(self):
        assert parse_fraction_text("(1)/(t + 1)") == frac(1, t_pow(1) + 1)
        assert parse_fraction_text("t^2 + 2 + t^-2") == frac(t_pow(2) + 2 + t_pow(-2))


class TestLensParsing:
    """Tests for tensors and their right-hand sides."""

    def test_plain_expression_is_tensored_with_one(self):
        assert parse_lens("c(2)") == LensElement.from_left(core(2))
        assert parse_lens("c(2) (x) 1") == LensElement.from_left(core(2))

    def test_sum_of_tensors(self):
        e = parse_lens("c(1) (x) w(1) - c(2) (x) 1")
        expected = LensElement([(core(1), wedge1(1), 1), (core(2), identity(), -1)])
        assert e == expected

    def test_right_side_extends_to_next_tensor(self):
        e = parse_lens("c(1) (x) 1 + c(2)")
        assert e == LensElement([(core(1), identity() + core(2), 1)])

    def test_equal_right_factors_merge(self):
        e = parse_lens("c(1) (x) w(1) + c(2) (x) w(1)")
        assert len(e.terms) == 1
        assert print_element(e) == "(c(2) + c(1)) (x) (w(1))"


class TestErrors:
    """Tests for parse and sort errors."""

    @pytest.mark.parametrize("text", ["T(1,", "c(1) +", "2**c(1)", "q(1)", ""])
    def test_malformed(self, text):
        with pytest.raises(ParseError) as exc:
            parse_annulus(text)
        assert exc.value.position is not None
        assert exc.value.exit_code == 2

    def test_mixed_sorts(self):
        with pytest.raises(SortError):
            parse_any("T(1,0) + c(1)")
        with pytest.raises(SortError):
            parse_any("W(1,0)*w(1)")

    def test_wrong_sort_for_entry_point(self):
        with pytest.raises(SortError):
            parse_annulus("T(1,0)")
        with pytest.raises(SortError):
            parse_torus("c(1)")
        with pytest.raises(SortError):
            parse_lens("T(1,0) (x) 1")

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_annulus("1/0*c(1)")

    def test_atom_index_bound(self):
        with pytest.raises(DomainError):
            parse_annulus("x(5000,1)")

    @pytest.mark.parametrize("text", ["T(100000,0)", "W(0,-3000)", "T(1,2)*T(2001,1)"])
    def test_torus_atom_index_bound(self, text):
        with pytest.raises(DomainError):
            parse_torus(text)

    def test_non_text(self):
        with pytest.raises(ParseError):
            parse_annulus(42)


class TestPrinting:
    """Tests for print_element."""

    def test_word_text(self):
        assert format_torus_word(TorusWord((1, 2), (0, 0))) == "T(1,2)"
        assert format_torus_word(TorusWord((1, 2), (3, -1))) == "T(1,2)*W(3,-1)"
        assert format_annulus_word(AnnulusWord(2, -1)) == "c(2)*w(-1)"

    def test_canonical_forms(self):
        assert print_element(parse_torus("T(1,0)*T(1,0)")) == "T(2,0) + 2*W(1,0)"
        assert print_element(parse_annulus("c(1)*c(1) - 2*w(1)")) == "c(2) - 2*w(1)"
        assert print_element(parse_annulus("x(2,1)")) == "t*c(2) + (-t - t^-1)*w(1)"
        assert print_element(wedge(1, 1).scale(t_pow(-2))) == "t^-2*W(1,1)"
        assert print_element(core(1).scale(-1)) == "-c(1)"

    def test_zero_and_identity(self):
        assert print_element(parse_annulus("c(1) - c(1)")) == "0"
        assert print_element(parse_annulus("1")) == "1"
        assert print_element(LensElement()) == "0"

    def test_unprintable(self):
        with pytest.raises(TypeError):
            print_element(object())

    def test_parse_inverts_print(self):
        rng = random.Random("printer")
        for _ in range(20):
            A = random_torus(rng, 3)
            assert parse_torus(print_element(A)) == A
            u = random_annulus(rng, 4, 3)
            assert parse_annulus(print_element(u)) == u
            e = random_lens(rng, 3, 2)
            assert parse_lens(print_element(e)) == e


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
