#!/usr/bin/env python3
"""
Tests for the seeded property suites behind ``verify``.

Every suite should pass on the real implementation, replay identically for
a fixed seed, and catch a deliberately broken action formula.
"""
import random
import sys
from math import gcd
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

import boundary_action
from verify_suite import (
    DEFAULT_CASES,
    SUITES,
    SuiteResult,
    coprime_pairs,
    random_lens,
    run_suite,
    run_suites,
    suite_names,
)


class TestRunSuite:
    """Tests for run_suite on the unmodified engine."""

    @pytest.mark.parametrize("name", list(SUITES))
    def test_suite_passes(self, name):
        result = run_suite(name, seed=3, cases=2)
        assert result.passed, result.counterexample
        assert result.counterexample is None
        assert result.cases >= 1

    def test_every_suite_has_default_cases(self):
        assert set(DEFAULT_CASES) == set(SUITES)
        assert suite_names()[-1] == "all"

    def test_deterministic_for_seed(self):
        first = run_suite("associativity", seed=11, cases=5).to_dict()
        second = run_suite("associativity", seed=11, cases=5).to_dict()
        assert first == second

    def test_unknown_suite(self):
        with pytest.raises(KeyError):
            run_suite("no-such-suite")

    def test_solver_agreement_respects_case_count(self):
        result = run_suite("solver-agreement", seed=1, cases=1)
        assert result.passed, result.counterexample
        assert result.cases == 1 + len(coprime_pairs(range(2, 6)))

    def test_result_dict(self):
        result = SuiteResult("scalar-laws", False, 4, "x != y")
        assert result.to_dict() == {
            "suite": "scalar-laws",
            "passed": False,
            "cases": 4,
            "counterexample": "x != y",
        }


class TestRunSuites:
    """Tests for run_suites name expansion."""

    def test_all_expands_once(self):
        results = run_suites(["revorien", "all"], seed=0, cases=1)
        names = [r.suite for r in results]
        assert names[0] == "revorien"
        assert sorted(names) == sorted(SUITES)

    def test_duplicates_dropped(self):
        results = run_suites(["fg-adjoint", "fg-adjoint"], cases=1)
        assert [r.suite for r in results] == ["fg-adjoint"]


class TestMutation:
    """A broken wedge exponent must be reported, not silently passed."""

    def test_flipped_wedge_exponent_is_caught(self, monkeypatch):
        monkeypatch.setattr(
            boundary_action,
            "_wedge_line_exponent",
            lambda r, s, k, l: 2 * s * (r + k + 2 * l),
        )
        result = run_suite("action-oracle", seed=7, cases=20)
        assert not result.passed
        assert "disagree" in result.counterexample


class TestGenerators:
    """Tests for the shared random generators."""

    def test_coprime_pairs(self):
        pairs = coprime_pairs(range(1, 6))
        assert (1, 0) in pairs
        assert (4, 2) not in pairs
        assert all(p == 1 or (1 <= q < p and gcd(p, q) == 1) for p, q in pairs)

    def test_random_lens_is_seeded(self):
        a = random_lens(random.Random("gen"), 3, 2)
        b = random_lens(random.Random("gen"), 3, 2)
        assert a == b


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
