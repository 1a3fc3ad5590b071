#!/usr/bin/env python3
"""
Tests for the command-line entry point.

Runs main() in-process and checks printed output, JSON payloads, table
rows and exit codes.
"""
import json
import sys
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

import boundary_action
from skein_cli import main
from skein_config import ENV_VARS


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_VARS.values():
        monkeypatch.delenv(name, raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err.strip()


class TestAlgebraCommands:
    """Tests for mul, project, act and simplify."""

    def test_mul(self, capsys):
        assert run(capsys, "mul", "T(1,0)", "T(1,0)") == (0, "T(2,0) + 2*W(1,0)", "")

    def test_mul_single_operand(self, capsys):
        code, out, _ = run(capsys, "mul", "W(1,0)*W(0,1)")
        assert (code, out) == (0, "t^2*W(1,1)")

    def test_project(self, capsys):
        assert run(capsys, "project", "W(1,1)") == (0, "t^-2*w(1)", "")

    def test_act_identity(self, capsys):
        assert run(capsys, "act", "W(0,0)", "c(3)") == (0, "c(3)", "")

    def test_act_curve(self, capsys):
        code, out, _ = run(capsys, "act", "T(1,1)", "c(1)")
        assert (code, out) == (0, "t*c(2) + (-t + t^-3)*w(1)")

    def test_simplify(self, capsys):
        assert run(capsys, "simplify", "c(1)*c(1) - 2*w(1)") == (0, "c(2) - 2*w(1)", "")

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "simplify", "c(1)*c(1)", "--format", "json")
        assert code == 0
        assert json.loads(out) == {"result": "c(2)"}

    def test_csv_terms(self, capsys):
        code, out, _ = run(capsys, "project", "T(0,1) + W(1,1)", "--format", "csv")
        assert code == 0
        assert out.splitlines() == ["word,coeff", "1,t + t^-1", "w(1),t^-2"]


class TestReduce:
    """Tests for the reduce command."""

    def test_s3_json(self, capsys):
        code, out, _ = run(capsys, "reduce", "-p", "1", "-q", "0", "c(2) (x) 1", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["coords"] == [{"n": 0, "m": 0, "coeff": "t^2 + 2 + t^-2"}]
        assert payload["path"] == "recursive"
        assert payload["matrix"] == {"a": 0, "b": 1}
        assert (payload["p"], payload["q"]) == (1, 0)

    def test_right_factor_is_balanced(self, capsys):
        code, out, _ = run(capsys, "reduce", "-p", "1", "-q", "0", "1 (x) c(1)")
        assert code == 0
        assert out.splitlines() == ["L(1,0) path=recursive", "(0,0): t + t^-1"]

    def test_wedge_in_l21(self, capsys):
        code, out, _ = run(capsys, "reduce", "-p", "2", "-q", "1", "w(2) (x) 1")
        assert code == 0
        assert out.splitlines()[1:] == ["(0,0): t^4"]

    def test_grid_word_is_fixed(self, capsys):
        code, out, _ = run(capsys, "reduce", "-p", "3", "-q", "1", "c(1)*w(1) (x) 1", "--format", "json")
        assert code == 0
        assert json.loads(out)["coords"] == [{"n": 1, "m": 1, "coeff": "1"}]

    def test_zero_prints_zero(self, capsys):
        code, out, _ = run(capsys, "reduce", "-p", "2", "-q", "1", "c(1) - c(1)")
        assert code == 0
        assert out.splitlines()[1:] == ["0"]

    def test_environment_supplies_lens(self, capsys, monkeypatch):
        monkeypatch.setenv("SKEIN_P", "2")
        monkeypatch.setenv("SKEIN_Q", "1")
        code, out, _ = run(capsys, "reduce", "w(2)")
        assert code == 0
        assert out.splitlines()[0].startswith("L(2,1)")

    def test_cache_hit(self, capsys, tmp_path):
        cache = str(tmp_path / "cache.json")
        args = ("reduce", "-p", "2", "-q", "1", "w(2) (x) 1", "--format", "json", "--cache", cache)
        first = json.loads(run(capsys, *args)[1])
        second = json.loads(run(capsys, *args)[1])
        assert first["coords"] == second["coords"]
        assert "cached" not in first["stats"]
        assert second["stats"]["cached"] == 1


class TestTable:
    """Tests for the table command."""

    def test_s3_csv(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "table", "-p", "1", "-q", "0", "--n-max", "3", "--w-max", "0",
            "--format", "csv", "--cache", str(tmp_path / "cache.json"),
        )
        assert code == 0
        assert out.splitlines() == [
            "n1,n2,n,m,coeff",
            "0,0,0,0,1",
            "1,0,0,0,t + t^-1",
            "2,0,0,0,t^2 + 2 + t^-2",
            "3,0,0,0,t^3 + 3*t + 3*t^-1 + t^-3",
        ]
        assert (tmp_path / "cache.json").exists()

    def test_csv_is_the_default(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "table", "-p", "1", "-q", "0", "--n-max", "1", "--w-max", "0",
            "--cache", str(tmp_path / "cache.json"),
        )
        assert code == 0
        assert out.splitlines() == ["n1,n2,n,m,coeff", "0,0,0,0,1", "1,0,0,0,t + t^-1"]

    def test_json_rows(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "table", "-p", "2", "-q", "1", "--n-max", "1", "--w-max", "1",
            "--format", "json", "--cache", str(tmp_path / "cache.json"),
        )
        assert code == 0
        payload = json.loads(out)
        assert (payload["p"], payload["q"]) == (2, 1)
        assert {(r["n1"], r["n2"]) for r in payload["rows"]} <= {(n1, n2) for n1 in (0, 1) for n2 in (-1, 0, 1)}

    def test_negative_bound(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "table", "-p", "2", "-q", "1", "--n-max", "-1", "--cache", str(tmp_path / "c.json"),
        )
        assert code == 3
        assert err.startswith("Error:")


class TestVerify:
    """Tests for the verify command."""

    def test_json_report(self, capsys):
        code, out, _ = run(capsys, "verify", "fg-adjoint", "--cases", "3", "--seed", "5", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["seed"] == 5
        assert payload["results"][0]["suite"] == "fg-adjoint"
        assert payload["results"][0]["passed"] is True

    def test_text_report(self, capsys):
        code, out, _ = run(capsys, "verify", "revorien", "--cases", "2")
        assert code == 0
        assert out == "PASS revorien (2 cases)"

    def test_failure_exit_code(self, capsys, monkeypatch):
        monkeypatch.setattr(
            boundary_action,
            "_wedge_line_exponent",
            lambda r, s, k, l: 2 * s * (r + k + 2 * l),
        )
        code, out, _ = run(capsys, "verify", "action-oracle", "--cases", "20", "--seed", "7")
        assert code == 1
        assert out.startswith("FAIL action-oracle")
        assert "counterexample:" in out


class TestErrors:
    """Tests for exit codes and error text."""

    def test_parse_error(self, capsys):
        code, out, err = run(capsys, "simplify", "c(1) +")
        assert code == 2
        assert out == ""
        assert err.startswith("Error:")

    def test_sort_error(self, capsys):
        code, _, err = run(capsys, "mul", "c(1)")
        assert code == 2
        assert err.startswith("Error:")

    def test_non_coprime_lens(self, capsys):
        code, _, err = run(capsys, "reduce", "-p", "4", "-q", "2", "c(1)")
        assert code == 3
        assert "gcd" in err

    def test_missing_lens_parameters(self, capsys):
        code, _, err = run(capsys, "reduce", "c(1)")
        assert code == 3
        assert "-p" in err

    def test_bad_budget(self, capsys):
        code, _, _ = run(capsys, "reduce", "-p", "2", "-q", "1", "c(1)", "--budget", "0")
        assert code == 3

    @pytest.mark.parametrize("argv", [["project", "T(100000,0)"], ["act", "T(100000,1)", "c(1)"]])
    def test_oversized_atom_index(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 3
        assert out == ""
        assert "index bound" in err

    @pytest.mark.parametrize("argv", [[], ["frobnicate"], ["verify", "no-such-suite"], ["table", "--n-max", "x"]])
    def test_usage_errors(self, argv):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
