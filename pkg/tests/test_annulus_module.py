#!/usr/bin/env python3
"""
Tests for the solid-torus skein algebra.

Tests the canonical basis, the T-form change of basis, and the memoized
x- and y-projections.
"""
import random
import sys
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from annulus_module import (
    AnnulusWord,
    clear_memo,
    core,
    evaluate_unknots,
    from_tform,
    from_word,
    identity,
    leading_word,
    make_word,
    preload_x_table,
    scalar_element,
    shift_wedge,
    t_core,
    to_tform,
    wedge1,
    winding,
    windings,
    x,
    x_table_snapshot,
    y,
)
from scalar import t_pow
from skein_errors import DomainError
from verify_suite import random_annulus


class TestCanonicalBasis:
    """Tests for words, products and simple accessors."""

    def test_make_word_rejects_negative_core(self):
        with pytest.raises(DomainError):
            make_word(-1, 0)

    def test_negative_core_reads_as_wedged(self):
        assert core(-2) == from_word(2, -2)

    def test_product_adds_indices(self):
        assert core(1) * wedge1(2) * from_word(3, -1) == from_word(4, 1)

    def test_identity_and_scalars(self):
        assert identity() * core(2) == core(2)
        assert scalar_element(t_pow(1)) * core(1) == core(1).scale(t_pow(1))

    def test_shift_wedge(self):
        assert shift_wedge(core(2) + wedge1(1), 3) == from_word(2, 3) + wedge1(4)

    def test_leading_word(self):
        assert leading_word(core(2) + wedge1(5) + from_word(2, -1)) == AnnulusWord(2, 0)
        with pytest.raises(ValueError):
            leading_word(core(0) - core(0))

    def test_winding(self):
        assert winding(AnnulusWord(1, 2)) == 5
        assert windings(core(1) + wedge1(-1) + from_word(3, -1)) == [-2, 1]

    def test_evaluate_unknots(self):
        circle = t_pow(1) + t_pow(-1)
        assert evaluate_unknots(core(2) + wedge1(4)) == circle * circle + 1

    def test_sort_key_orders_high_core_first(self):
        words = sorted([AnnulusWord(0, 1), AnnulusWord(2, 0), AnnulusWord(2, -1)], key=AnnulusWord.sort_key)
        assert words == [AnnulusWord(2, -1), AnnulusWord(2, 0), AnnulusWord(0, 1)]


class TestTForm:
    """Tests for the (k)_T * W(l) basis."""

    def test_low_t_cores(self):
        assert t_core(0) == scalar_element(2)
        assert t_core(1) == core(1)
        assert t_core(2) == core(2) - wedge1(1).scale(2)
        assert t_core(3) == core(3) - from_word(1, 1).scale(3)

    def test_negative_t_core(self):
        assert t_core(-1) == from_word(1, -1)

    def test_to_tform_of_core(self):
        assert to_tform(core(2)) == {(2, 0): t_pow(0), (0, 1): t_pow(0)}

    def test_t_core_is_a_basis_word(self):
        for k in range(6):
            assert to_tform(t_core(k)) == {(k, 0): t_pow(0)}

    def test_round_trip(self):
        rng = random.Random("tform")
        for _ in range(30):
            u = random_annulus(rng, 4, 3)
            assert from_tform(to_tform(u)) == u

    def test_from_tform_rejects_negative_core(self):
        with pytest.raises(DomainError):
            from_tform({(-1, 0): t_pow(0)})


class TestProjections:
    """Tests for x(m,n) and y(r,s)."""

    def test_seeds(self):
        assert x(0, 3) == scalar_element(t_pow(3) + t_pow(-3))
        assert x(1, 2) == core(1).scale(t_pow(2))
        assert x(0, 0) == scalar_element(2)

    def test_recursion(self):
        expected = core(2).scale(t_pow(1)) - wedge1(1).scale(t_pow(1) + t_pow(-1))
        assert x(2, 1) == expected

    def test_x_is_t_core_times_unit(self):
        for m in range(1, 6):
            assert x(m, 0) == t_core(m)

    def test_mirror(self):
        assert x(-1, 2) == from_word(1, -1, t_pow(-2))
        # (-m,-n)_T reoriented is (m,n)_T * W(-m,-n)
        assert x(-2, 0) == shift_wedge(x(2, 0), -2)

    def test_y(self):
        assert y(1, 1) == wedge1(1).scale(t_pow(-2))
        assert y(0, 5) == identity()

    def test_memo_snapshot_and_preload(self):
        x(3, 2)
        table = x_table_snapshot()
        assert table[(3, 2)] == x(3, 2)
        # existing entries win over preloaded ones
        preload_x_table({(3, 2): core(7)})
        assert x(3, 2) == table[(3, 2)]

    def test_cold_memo_recomputes(self):
        keys = [(-2, 0), (-1, 2), (2, 1), (4, 3)]
        warm = {k: x(*k) for k in keys}
        preload_x_table({(5, 1): core(7)})
        clear_memo()
        assert x_table_snapshot() == {}
        # mirror keys first, so they build their positive partners from scratch
        for k in keys:
            assert x(*k) == warm[k]
        assert x(5, 1) != core(7)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
