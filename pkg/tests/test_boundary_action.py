#!/usr/bin/env python3
"""
Tests for the projection to the solid torus and the boundary action.

The closed-form action on the T-form basis is checked against the
multiply-then-project route, and the x/y pull identities are checked on
both sides.
"""
import random
import sys
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from annulus_module import core, from_word, identity, scalar_element, wedge1, x, y
from boundary_action import act, act_oracle, project, pull_x, pull_y
from scalar import t_pow
from torus_algebra import TorusElement, from_word as torus_word, make_word, mul, t_curve, wedge
from verify_suite import random_annulus, random_torus


class TestProjection:
    """Tests for project."""

    def test_meridian_is_unknot(self):
        assert project(t_curve(0, 1)) == scalar_element(t_pow(1) + t_pow(-1))

    def test_pure_wedge(self):
        assert project(wedge(1, 1)) == wedge1(1).scale(t_pow(-2))

    def test_mixed_word(self):
        # (1,0)_T * W(1,1): t^{-2rn-2rs} x(1,0) W(1) with r=1, n=0, s=1
        word = torus_word(make_word((1, 0), (1, 1)))
        assert project(word) == from_word(1, 1, t_pow(-2))

    def test_linear(self):
        A = t_curve(2, 1).scale(t_pow(3)) - wedge(0, 2)
        assert project(A) == x(2, 1).scale(t_pow(3)) - y(0, 2)

    def test_zero(self):
        assert project(TorusElement()).is_zero()


class TestAction:
    """Tests for act against act_oracle."""

    def test_identity_acts_trivially(self):
        assert act(wedge(0, 0), core(3)) == core(3)

    def test_curve_on_core(self):
        expected = core(2).scale(t_pow(1)) + wedge1(1).scale(t_pow(-3) - t_pow(1))
        assert act(t_curve(1, 1), core(1)) == expected

    def test_curve_on_unknot_multiple(self):
        circle = t_pow(1) + t_pow(-1)
        assert act(t_curve(1, 0), project(t_curve(0, 1))) == core(1).scale(circle)

    def test_matches_oracle_on_words(self):
        rng = random.Random("action-words")
        for _ in range(40):
            A = random_torus(rng, 2, max_terms=1)
            B = random_torus(rng, 2, max_terms=1)
            assert act(A, project(B)) == act_oracle(A, B)

    def test_matches_oracle_on_sums(self):
        rng = random.Random("action-sums")
        for _ in range(15):
            A = random_torus(rng, 2)
            B = random_torus(rng, 2)
            assert act(A, project(B)) == act_oracle(A, B)

    def test_module_axiom(self):
        rng = random.Random("module")
        for _ in range(15):
            A = random_torus(rng, 2, max_terms=1)
            B = random_torus(rng, 2, max_terms=1)
            u = random_annulus(rng, 3, 2)
            assert act(mul(A, B), u) == act(A, act(B, u))

    def test_zero_inputs(self):
        assert act(TorusElement(), core(1)).is_zero()
        assert act(t_curve(1, 0), identity() - identity()).is_zero()


class TestPullIdentities:
    """Tests for pulling x- and y-factors through products."""

    @pytest.mark.parametrize("m,n,r,s", [(1, 0, 1, 0), (1, 1, 1, 1), (2, -1, 1, 2), (3, 1, -1, 1), (0, 2, 2, -1)])
    def test_pull_x(self, m, n, r, s):
        lhs, rhs = pull_x(m, n, r, s)
        assert lhs == rhs

    @pytest.mark.parametrize("m,n,r,s", [(1, 0, 1, 0), (2, 1, 1, 1), (3, -2, -1, 2), (1, 1, 2, 0)])
    def test_pull_y(self, m, n, r, s):
        lhs, rhs = pull_y(m, n, r, s)
        assert lhs == rhs


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
