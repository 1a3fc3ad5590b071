#!/usr/bin/env python3
"""
Tests for run configuration.

Tests flag > environment > default precedence and validation.
"""
import sys
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from skein_config import (
    DEFAULT_BUDGET,
    DEFAULT_FORMAT,
    DEFAULT_SEED,
    ENV_VARS,
    RunConfig,
    window_for,
)
from skein_errors import DomainError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_VARS.values():
        monkeypatch.delenv(name, raising=False)


class TestResolve:
    """Tests for RunConfig.resolve."""

    def test_defaults(self):
        cfg = RunConfig.resolve("reduce")
        assert cfg.p is None and cfg.q is None
        assert cfg.budget == DEFAULT_BUDGET
        assert cfg.output_format == DEFAULT_FORMAT
        assert cfg.seed == DEFAULT_SEED
        assert cfg.cache_path is None

    def test_table_defaults_to_csv(self, monkeypatch):
        assert RunConfig.resolve("table").output_format == "csv"
        assert RunConfig.resolve("table", output_format="text").output_format == "text"
        monkeypatch.setenv("SKEIN_FORMAT", "json")
        assert RunConfig.resolve("table").output_format == "json"

    def test_environment_overrides_default(self, monkeypatch):
        monkeypatch.setenv("SKEIN_P", "5")
        monkeypatch.setenv("SKEIN_Q", "2")
        monkeypatch.setenv("SKEIN_FORMAT", "json")
        monkeypatch.setenv("SKEIN_CACHE", "/tmp/skein.json")
        cfg = RunConfig.resolve("table")
        assert (cfg.p, cfg.q) == (5, 2)
        assert cfg.output_format == "json"
        assert cfg.cache_path == Path("/tmp/skein.json")

    def test_flag_overrides_environment(self, monkeypatch):
        monkeypatch.setenv("SKEIN_BUDGET", "50")
        monkeypatch.setenv("SKEIN_SEED", "9")
        cfg = RunConfig.resolve("verify", budget=7, seed=0)
        assert cfg.budget == 7
        assert cfg.seed == 0

    def test_malformed_environment_warns(self, monkeypatch):
        monkeypatch.setenv("SKEIN_BUDGET", "lots")
        with pytest.warns(UserWarning):
            cfg = RunConfig.resolve("reduce")
        assert cfg.budget == DEFAULT_BUDGET

    def test_extras_are_kept(self):
        cfg = RunConfig.resolve("table", n_max=4)
        assert cfg.extras == {"n_max": 4}


class TestValidate:
    """Tests for RunConfig.validate."""

    @pytest.mark.parametrize("kwargs", [
        {"budget": 0},
        {"budget": -3},
        {"window": 0},
        {"output_format": "xml"},
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(DomainError):
            RunConfig.resolve("reduce", **kwargs)

    def test_window_for(self):
        assert window_for(3) == 12
        assert window_for(1) == 4
        assert window_for(3, 5) == 5


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
