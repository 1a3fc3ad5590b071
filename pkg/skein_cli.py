#!/usr/bin/env python3
"""
skein_cli.py

Command-line entry point.

    python skein_cli.py mul "T(1,0)" "T(1,0)"
    python skein_cli.py project "W(1,1)"
    python skein_cli.py act "T(1,1)" "c(1)"
    python skein_cli.py reduce -p 2 -q 1 "w(2) (x) 1"
    python skein_cli.py table -p 3 -q 1 --n-max 3 --w-max 1 --format csv
    python skein_cli.py verify associativity --seed 7
    python skein_cli.py simplify "c(1)*c(1) - 2*w(1)"

Exit codes: 0 ok, 1 verify failure, 2 parse/sort error, 3 domain error,
4 reduction failure. Errors are printed as "Error: ..." on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

import pandas as pd

from annulus_module import from_word
from boundary_action import act, project
from lens_reduction import (
    GluingMatrix,
    LensElement,
    ReductionResult,
    gluing_for,
    reduce_with_fallback,
)
from scalar import Scalar, format_fraction, format_scalar
from skein_cache import SkeinCache, coords_to_json
from skein_config import (
    DEFAULT_CACHE_PATH,
    DEFAULT_N_MAX,
    DEFAULT_W_MAX,
    OUTPUT_FORMATS,
    RunConfig,
)
from skein_errors import DomainError, SkeinError
from skein_lang import (
    format_annulus_word,
    format_torus_word,
    parse_annulus,
    parse_any,
    parse_lens,
    parse_torus,
    print_element,
)
from torus_algebra import TorusElement, mul
from verify_suite import run_suites, suite_names

TABLE_COLUMNS = ["n1", "n2", "n", "m", "coeff"]


# ─────────────────────────────────────────────────────────────────────────────
# Argument parsing
# ─────────────────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, default=None, help="lens space parameter p (>= 1)")
    common.add_argument("-q", type=int, default=None, help="lens space parameter q, coprime to p")
    common.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default=None)
    common.add_argument("--budget", type=int, default=None, help="elementary-move budget per reduction")
    common.add_argument("--window", type=int, default=None, help="initial solver window bound")
    common.add_argument("--cache", dest="cache_path", default=None, help="path of the JSON cache")
    common.add_argument("--seed", type=int, default=None, help="random seed for verify")

    parser = argparse.ArgumentParser(
        prog="skein_cli.py",
        description="Exact gl2 skein computations on the torus, the solid torus and lens spaces.",
    )
    verbs = parser.add_subparsers(dest="command", required=True)

    p_mul = verbs.add_parser("mul", parents=[common], help="multiply torus expressions left to right")
    p_mul.add_argument("exprs", nargs="+")

    p_project = verbs.add_parser("project", parents=[common], help="project a torus expression to the solid torus")
    p_project.add_argument("expr")

    p_act = verbs.add_parser("act", parents=[common], help="act by a torus expression on a solid-torus expression")
    p_act.add_argument("torus")
    p_act.add_argument("annulus")

    p_reduce = verbs.add_parser("reduce", parents=[common], help="reduce a lens expression to the spanning grid")
    p_reduce.add_argument("expr")

    p_table = verbs.add_parser("table", parents=[common], help="reduce every (n1) W(n2) (x) 1 in a range")
    p_table.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p_table.add_argument("--w-max", type=int, default=DEFAULT_W_MAX)

    p_verify = verbs.add_parser("verify", parents=[common], help="run property suites")
    p_verify.add_argument("suite", nargs="?", default="all", choices=suite_names())
    p_verify.add_argument("--cases", type=int, default=None, help="override the number of random cases")

    p_simplify = verbs.add_parser("simplify", parents=[common], help="parse, canonicalize and print")
    p_simplify.add_argument("expr")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    extras = {k: v for k, v in vars(args).items() if k not in {
        "command", "p", "q", "budget", "window", "output_format", "cache_path", "seed",
    }}
    return RunConfig.resolve(
        args.command,
        p=args.p,
        q=args.q,
        budget=args.budget,
        window=args.window,
        output_format=args.output_format,
        cache_path=args.cache_path,
        seed=args.seed,
        **extras,
    )


def _gluing(cfg: RunConfig) -> GluingMatrix:
    if cfg.p is None or cfg.q is None:
        raise DomainError(f"'{cfg.command}' needs both -p and -q (or SKEIN_P / SKEIN_Q)")
    return gluing_for(cfg.p, cfg.q)


# ─────────────────────────────────────────────────────────────────────────────
# Rendering
# ─────────────────────────────────────────────────────────────────────────────

def _terms_frame(e) -> pd.DataFrame:
    """One row per word of a combination; scalars are a single row on the word 1."""
    if isinstance(e, Scalar):
        rows = [{"word": "1", "coeff": format_scalar(e)}]
    else:
        word_text = format_torus_word if isinstance(e, TorusElement) else format_annulus_word
        ordered = sorted(e.items(), key=lambda kv: kv[0].sort_key())
        rows = [{"word": word_text(w) or "1", "coeff": format_scalar(c)} for w, c in ordered]
    return pd.DataFrame(rows, columns=["word", "coeff"])


def render_element(e, cfg: RunConfig) -> str:
    text = print_element(e)
    if cfg.output_format == "json":
        return json.dumps({"result": text})
    if cfg.output_format == "csv" and not isinstance(e, LensElement):
        return _terms_frame(e).to_csv(index=False, lineterminator="\n").rstrip("\n")
    return text


def reduction_payload(G: GluingMatrix, result: ReductionResult) -> dict:
    return {
        "p": G.p,
        "q": G.q,
        "matrix": {"a": G.a, "b": G.b},
        "path": result.path,
        "coords": coords_to_json(result.coords),
        "stats": dict(result.stats),
    }


def render_reduction(G: GluingMatrix, result: ReductionResult, cfg: RunConfig) -> str:
    if cfg.output_format == "json":
        return json.dumps(reduction_payload(G, result))
    frame = pd.DataFrame(
        [{"n": n, "m": m, "coeff": format_fraction(c)} for (n, m), c in result.coords.items()],
        columns=["n", "m", "coeff"],
    )
    if cfg.output_format == "csv":
        return frame.to_csv(index=False, lineterminator="\n").rstrip("\n")
    lines = [f"{G.label()} path={result.path}"]
    lines += [f"({r.n},{r.m}): {r.coeff}" for r in frame.itertuples(index=False)] or ["0"]
    return "\n".join(lines)


# ─────────────────────────────────────────────────────────────────────────────
# Commands
# ─────────────────────────────────────────────────────────────────────────────

def cmd_mul(exprs: Sequence[str], cfg: RunConfig) -> str:
    """Normal-form product of torus expressions, left to right."""
    value = parse_torus(exprs[0])
    for text in exprs[1:]:
        value = mul(value, parse_torus(text))
    return render_element(value, cfg)


def cmd_project(text: str, cfg: RunConfig) -> str:
    return render_element(project(parse_torus(text)), cfg)


def cmd_act(torus_text: str, annulus_text: str, cfg: RunConfig) -> str:
    return render_element(act(parse_torus(torus_text), parse_annulus(annulus_text)), cfg)


def cmd_simplify(text: str, cfg: RunConfig) -> str:
    return render_element(parse_any(text), cfg)


def _reduce_cached(e: LensElement, G: GluingMatrix, cfg: RunConfig, cache: Optional[SkeinCache]) -> ReductionResult:
    key = print_element(e)
    if cache is not None:
        hit = cache.get_reduction(key)
        if hit is not None:
            path, coords = hit
            return ReductionResult(coords, path, {"moves": 0, "window": 0, "retries": 0, "cached": 1})
    result = reduce_with_fallback(e, G, budget=cfg.budget, window=cfg.window)
    if cache is not None:
        cache.put_reduction(key, result)
    return result


def cmd_reduce(text: str, cfg: RunConfig) -> str:
    """Grid coordinates of a lens expression in L(p,q)."""
    G = _gluing(cfg)
    e = parse_lens(text)
    cache = SkeinCache(cfg.cache_path, G) if cfg.cache_path else None
    result = _reduce_cached(e, G, cfg, cache)
    if cache is not None:
        cache.save()
    return render_reduction(G, result, cfg)


def build_table(G: GluingMatrix, n_max: int, w_max: int, cfg: RunConfig, cache: Optional[SkeinCache]) -> pd.DataFrame:
    """Rows n1,n2,n,m,coeff of reduce((n1) W(n2) (x) 1), in input then grid order."""
    if n_max < 0 or w_max < 0:
        raise DomainError(f"table bounds must be nonnegative, got n_max={n_max}, w_max={w_max}")
    rows = []
    for n1 in range(n_max + 1):
        for n2 in range(-w_max, w_max + 1):
            e = LensElement.from_left(from_word(n1, n2))
            result = _reduce_cached(e, G, cfg, cache)
            for (n, m), c in result.coords.items():
                rows.append({"n1": n1, "n2": n2, "n": n, "m": m, "coeff": format_fraction(c)})
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def cmd_table(n_max: int, w_max: int, cfg: RunConfig) -> str:
    G = _gluing(cfg)
    cache = SkeinCache(cfg.cache_path or DEFAULT_CACHE_PATH, G)
    frame = build_table(G, n_max, w_max, cfg, cache)
    cache.save()
    if cfg.output_format == "json":
        return json.dumps({"p": G.p, "q": G.q, "rows": frame.to_dict(orient="records")})
    if cfg.output_format == "text":
        return frame.to_string(index=False) if len(frame) else "(no rows)"
    return frame.to_csv(index=False, lineterminator="\n").rstrip("\n")


def cmd_verify(suite: str, cfg: RunConfig, cases: Optional[int] = None) -> tuple:
    """Run suites; returns (rendered report, all passed)."""
    results = run_suites([suite], seed=cfg.seed, cases=cases)
    ok = all(r.passed for r in results)
    if cfg.output_format == "json":
        return json.dumps({"seed": cfg.seed, "results": [r.to_dict() for r in results]}), ok
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.suite} ({r.cases} cases)"
        if r.counterexample:
            line += f"\n  counterexample: {r.counterexample}"
        lines.append(line)
    return "\n".join(lines), ok


# ─────────────────────────────────────────────────────────────────────────────
# Main
# ─────────────────────────────────────────────────────────────────────────────

def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg.command == "mul":
            out = cmd_mul(args.exprs, cfg)
        elif cfg.command == "project":
            out = cmd_project(args.expr, cfg)
        elif cfg.command == "act":
            out = cmd_act(args.torus, args.annulus, cfg)
        elif cfg.command == "reduce":
            out = cmd_reduce(args.expr, cfg)
        elif cfg.command == "table":
            out = cmd_table(args.n_max, args.w_max, cfg)
        elif cfg.command == "simplify":
            out = cmd_simplify(args.expr, cfg)
        else:
            out, ok = cmd_verify(args.suite, cfg, args.cases)
            print(out)
            return 0 if ok else 1
    except SkeinError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
