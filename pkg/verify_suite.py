"""
verify_suite.py

Seeded property suites run by ``skein_cli.py verify``.

Each suite draws its random cases from ``random.Random("<seed>:<suite>")`` so
a (seed, suite) pair always replays the same cases, and reports the first
failing case as a printed counterexample.

This module provides:
- SuiteResult: outcome of one suite
- SUITES: suite name -> check function, DEFAULT_CASES: name -> case count
- run_suite / run_suites
- random element generators shared with the tests
"""
from __future__ import annotations

import random
import string
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import annulus_module as am
import boundary_action as ba
import lens_reduction as lr
import torus_algebra as ta
from scalar import ONE, Scalar, ScalarFraction, div_exact, frac, frac_inv, frac_mul, t_pow
from skein_config import WINDOW_RETRIES
from skein_errors import SkeinError, SolverFallbackWarning, WindowTooSmall
from skein_lang import (
    parse_annulus,
    parse_lens,
    parse_scalar_text,
    parse_torus,
    print_element,
)


@dataclass
class SuiteResult:
    """Outcome of one property suite."""
    suite: str
    passed: bool
    cases: int
    counterexample: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "cases": self.cases,
            "counterexample": self.counterexample,
        }


class _Failure(Exception):
    """Raised inside a suite to stop at the first counterexample."""


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise _Failure(message)


# ─────────────────────────────────────────────────────────────────────────────
# Random generators
# ─────────────────────────────────────────────────────────────────────────────

def random_scalar(rng: random.Random, span: int = 4, max_terms: int = 3) -> Scalar:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        c = rng.choice([1, -1, 2, -2, 3, Fraction(1, 2), Fraction(-3, 2)])
        terms[rng.randint(-span, span)] = c
    return Scalar(terms)


def random_nonzero_scalar(rng: random.Random, span: int = 4) -> Scalar:
    s = random_scalar(rng, span)
    return s if not s.is_zero() else t_pow(rng.randint(-span, span))


def random_torus_word(rng: random.Random, bound: int) -> ta.TorusWord:
    m, n = rng.randint(-bound, bound), rng.randint(-bound, bound)
    wpart = (rng.randint(-bound, bound), rng.randint(-bound, bound))
    if m == 0 and n == 0:
        return ta.TorusWord(None, wpart)
    if not ta.in_cone(m, n):
        m, n = -m, -n
    return ta.TorusWord((m, n), wpart)


def random_torus(rng: random.Random, bound: int, max_terms: int = 2) -> ta.TorusElement:
    total = ta.TorusElement()
    for _ in range(rng.randint(1, max_terms)):
        total = total + ta.from_word(random_torus_word(rng, bound), random_nonzero_scalar(rng, 2))
    return total


def random_annulus(rng: random.Random, core_bound: int, wedge_bound: int, max_terms: int = 3) -> am.AnnulusElement:
    total = am.AnnulusElement()
    for _ in range(rng.randint(1, max_terms)):
        word = am.from_word(rng.randint(0, core_bound), rng.randint(-wedge_bound, wedge_bound))
        total = total + word.scale(random_nonzero_scalar(rng, 2))
    return total


def random_lens(rng: random.Random, core_bound: int, wedge_bound: int) -> lr.LensElement:
    terms = []
    for _ in range(rng.randint(1, 2)):
        terms.append((
            random_annulus(rng, core_bound, wedge_bound, 2),
            random_annulus(rng, core_bound, wedge_bound, 2),
            ONE,
        ))
    return lr.LensElement(terms)


def coprime_pairs(p_values: Sequence[int]) -> List[Tuple[int, int]]:
    """(p, q) with 1 <= q < p coprime, plus (1, 0)."""
    out = []
    for p in p_values:
        if p == 1:
            out.append((1, 0))
            continue
        out.extend((p, q) for q in range(1, p) if gcd(p, q) == 1)
    return out


# ─────────────────────────────────────────────────────────────────────────────
# Suites
# ─────────────────────────────────────────────────────────────────────────────

def _suite_scalar_laws(rng: random.Random, cases: int) -> int:
    for _ in range(cases):
        a, b, c = random_scalar(rng), random_scalar(rng), random_scalar(rng)
        _check((a + b) + c == a + (b + c), f"addition not associative on {a}, {b}, {c}")
        _check((a * b) * c == a * (b * c), f"multiplication not associative on {a}, {b}, {c}")
        _check(a * (b + c) == a * b + a * c, f"distributivity fails on {a}, {b}, {c}")
        _check(a * b == b * a, f"multiplication not commutative on {a}, {b}")
        _check(Scalar(a.terms) == a, f"renormalizing {a} changed it")
        _check((a * b).at_one() == a.at_one() * b.at_one(), f"evaluation at 1 not multiplicative on {a}, {b}")
        d = random_nonzero_scalar(rng)
        _check(div_exact(a * d, d) == a, f"div_exact({a} * {d}, {d}) != {a}")
        x = frac(random_nonzero_scalar(rng), random_nonzero_scalar(rng))
        _check(frac_mul(x, frac_inv(x)) == ScalarFraction.of(1), f"{x} times its inverse is not 1")
    return cases


def _suite_associativity(rng: random.Random, cases: int) -> int:
    for _ in range(cases):
        w1, w2, w3 = (random_torus_word(rng, 8) for _ in range(3))
        A, B, C = ta.from_word(w1), ta.from_word(w2), ta.from_word(w3)
        _check(
            ta.mul(ta.mul(A, B), C) == ta.mul(A, ta.mul(B, C)),
            f"(AB)C != A(BC) for A={print_element(A)}, B={print_element(B)}, C={print_element(C)}",
        )
        h1, h2 = ta.homology_class(w1), ta.homology_class(w2)
        for w in ta.mul(A, B).words():
            _check(
                ta.homology_class(w) == (h1[0] + h2[0], h1[1] + h2[1]),
                f"grading broken in {print_element(A)} * {print_element(B)} at {w}",
            )
    return cases


def _suite_fg_adjoint(rng: random.Random, cases: int) -> int:
    for _ in range(cases):
        m, n, r, s = (rng.randint(-6, 6) for _ in range(4))
        lhs = ta.mul(ta.t_curve(m, n), ta.t_curve(r, s))
        _check(lhs == ta.fg_adjoint(m, n, r, s), f"adjoint product-to-sum fails at ({m},{n}),({r},{s})")
    return cases


def _suite_revorien(rng: random.Random, cases: int) -> int:
    for _ in range(cases):
        m, n = rng.randint(-8, 8), rng.randint(-8, 8)
        _check(
            ta.mul(ta.t_curve(m, n), ta.wedge(-m, -n)) == ta.t_curve(-m, -n),
            f"T({m},{n})*W({-m},{-n}) != T({-m},{-n})",
        )
    return cases


def _suite_tbasis_gcd(rng: random.Random, cases: int) -> int:
    for _ in range(cases):
        d = rng.randint(3, 6)
        while True:
            a, b = rng.randint(-2, 2), rng.randint(-2, 2)
            if gcd(a, b) == 1:
                break
        m, n = d * a, d * b
        via_rule = (
            ta.mul(ta.t_curve(m - a, n - b), ta.t_curve(a, b))
            - ta.mul(ta.t_curve(m - 2 * a, n - 2 * b), ta.wedge(a, b))
        )
        _check(via_rule == ta.t_curve(m, n), f"gcd recursion fails at ({m},{n})")
        _check(ta.tbasis_curve(m, n) == ta.t_curve(m, n), f"tbasis_curve({m},{n}) != T({m},{n})")
    return cases


def _suite_action_oracle(rng: random.Random, cases: int) -> int:
    for _ in range(cases):
        A = ta.from_word(random_torus_word(rng, 6), random_nonzero_scalar(rng, 2))
        B = ta.from_word(random_torus_word(rng, 6))
        _check(
            ba.act(A, ba.project(B)) == ba.act_oracle(A, B),
            f"action formula and oracle disagree for A={print_element(A)}, B={print_element(B)}",
        )
        # words with n = s = 0 act by multiplication with their projection
        k, l = rng.randint(0, 4), rng.randint(-4, 4)
        flat = ta.word_element((k, 0), (l, 0)) if k else ta.wedge(l, 0)
        u = random_annulus(rng, 3, 3)
        _check(
            ba.act(flat, u) == ba.project(flat) * u,
            f"meridian-free action is not multiplication for {print_element(flat)} on {print_element(u)}",
        )
    return cases


def _suite_module_axioms(rng: random.Random, cases: int) -> int:
    for _ in range(cases):
        w1, w2 = random_torus_word(rng, 4), random_torus_word(rng, 4)
        A, B = ta.from_word(w1), ta.from_word(w2)
        u = random_annulus(rng, 3, 3, 2)
        _check(
            ba.act(ta.mul(A, B), u) == ba.act(A, ba.act(B, u)),
            f"(AB).u != A.(B.u) for A={print_element(A)}, B={print_element(B)}, u={print_element(u)}",
        )
        _check(ba.act(ta.identity(), u) == u, f"identity does not act trivially on {print_element(u)}")
        shift = ta.homology_class(w1)[0]
        before = {am.winding(w) for w in u.words()}
        after = {am.winding(w) for w in ba.act(A, u).words()}
        _check(
            after <= {w + shift for w in before},
            f"{print_element(A)} does not shift winding by {shift} on {print_element(u)}",
        )
    return cases


def _suite_projection_seeds(rng: random.Random, cases: int) -> int:
    checked = 0
    for n in range(-12, 13):
        _check(am.x(0, n) == am.scalar_element(t_pow(n) + t_pow(-n)), f"x(0,{n}) seed is wrong")
        _check(am.x(1, n) == am.core(1).scale(t_pow(n)), f"x(1,{n}) seed is wrong")
        _check(am.x(-1, n) == am.core(-1).scale(t_pow(-n)), f"x(-1,{n}) seed is wrong")
        checked += 3
    for m in range(-10, 11):
        if m == 0:
            continue
        for n in range(-5, 6):
            value = am.x(m, n)
            lead = am.leading_word(value)
            expected = t_pow(n if m > 0 else -n)
            _check(lead.n == abs(m), f"x({m},{n}) leads with core {lead.n}")
            _check(value.coefficient(lead) == expected, f"x({m},{n}) leading coefficient is not a unit")
            _check(all(am.winding(w) == m for w in value.words()), f"x({m},{n}) is not winding-homogeneous")
            checked += 1
    for k in range(0, 8):
        _check(am.to_tform(am.t_core(k)) == {(k, 0): ONE}, f"t_core({k}) is not a T-form basis word")
    for _ in range(cases):
        u = random_annulus(rng, 5, 4)
        _check(am.from_tform(am.to_tform(u)) == u, f"T-form round trip fails on {print_element(u)}")
        checked += 1
    return checked


def _suite_s3_oracle(rng: random.Random, cases: int) -> int:
    G = lr.gluing_for(1, 0)
    for _ in range(cases):
        u = random_annulus(rng, 6, 6)
        coords = lr.reduce(lr.LensElement.from_left(u), G)
        expected = am.evaluate_unknots(u)
        _check(
            set(coords.support()) <= {(0, 0)} and coords.coefficient((0, 0)) == frac(expected),
            f"S3 evaluation of {print_element(u)} gave {coords.items()} instead of {expected}",
        )
    return cases


def _winding_conserved(coords: lr.SpanningCoordinates, classes, p: int) -> bool:
    return all((n + 2 * m) % p in classes for n, m in coords.support())


def _suite_spanning(rng: random.Random, cases: int) -> int:
    total = 0
    for p, q in coprime_pairs(range(2, 8)):
        G = lr.gluing_for(p, q)
        for _ in range(cases):
            n1, n2 = rng.randint(-3 * p, 3 * p), rng.randint(-3 * p, 3 * p)
            e = lr.LensElement.from_left(am.core(n1) * am.wedge1(n2))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SolverFallbackWarning)
                result = lr.reduce_with_fallback(e, G)
            support = result.coords.support()
            _check(
                all(lr.in_grid(w, G) for w in support) and len(support) <= lr.grid_size(G),
                f"({n1})W({n2}) in {G.label()} reduced outside the grid: {support}",
            )
            _check(
                _winding_conserved(result.coords, lr.lens_winding_class(e, G), p),
                f"({n1})W({n2}) in {G.label()} broke winding conservation: {support}",
            )
            total += 1
    return total


def _suite_move_soundness(rng: random.Random, cases: int) -> int:
    pairs = coprime_pairs(range(1, 8))
    for _ in range(cases):
        G = lr.gluing_for(*rng.choice(pairs))
        kl = (rng.randint(0, 6), rng.randint(-10, 10))
        down, c_down = lr.wedge_period(kl, G, "down")
        back, c_up = lr.wedge_period(down, G, "up")
        _check(back == kl and c_down * c_up == ONE, f"wedge_period down/up is not inverse at {kl} in {G.label()}")
        kind, j = rng.choice(["T", "W"]), rng.randint(-5, 5)
        _, c_strip = lr.strip_ab(kind, j, G)
        index, c_unstrip = lr.unstrip_ab(kind, j, G)
        _check(
            index == G.apply(1, j) and c_strip * c_unstrip == ONE,
            f"strip/unstrip {kind} with j={j} is not inverse in {G.label()}",
        )
    G = lr.gluing_for(1, 0)
    for rel in lr.relation_set(G, lr.Window(3, 2)):
        u = am.AnnulusElement({am.AnnulusWord(n, m): c.to_scalar() for (n, m), c in rel.terms})
        _check(
            lr.reduce(lr.LensElement.from_left(u), G).grid == {},
            f"relation {rel.origin} does not reduce to zero in S3: {print_element(u)}",
        )
    return cases


def _suite_eta_base(rng: random.Random, cases: int) -> int:
    pairs = coprime_pairs(range(1, 8))
    for _ in range(cases):
        G = lr.gluing_for(*rng.choice(pairs))
        k, r, s = rng.randint(-4, 4), rng.randint(-3, 3), rng.randint(-3, 3)
        printed = t_pow(2 * (G.a * r + G.p * s) * (k * G.q)) * (t_pow(k) + t_pow(-k))
        _check(
            lr.base_case_scalar(k, r, s, G) == printed,
            f"base scalar differs from the closed form at k={k}, r={r}, s={s} in {G.label()}",
        )
        Y = G.apply(r, s)
        direct = lr.reduce(lr.LensElement.from_left(am.y(*Y)), G)
        via_xy = lr.reduce_xy(0, k, r, s, G)
        expected = {w: c * frac(printed) for w, c in direct.grid.items()}
        _check(via_xy.grid == expected, f"reduce_xy(0,{k},{r},{s}) disagrees with the base scalar in {G.label()}")
    return cases


def _suite_solver_agreement(rng: random.Random, cases: int) -> int:
    G = lr.gluing_for(1, 0)
    for _ in range(cases):
        e = lr.LensElement.from_left(random_annulus(rng, 4, 3, 2))
        words = [(w.n, w.r) for w in lr.balanced_left(e, G).words()]
        recursive = lr.reduce(e, G)
        solved = _solve_with_retries(e, G, words)
        _check(recursive == solved, f"solver and recursion disagree at p=1 on {print_element(e)}")
    total = cases
    for p, q in coprime_pairs(range(2, 6)):
        G = lr.gluing_for(p, q)
        candidates = [(n, l) for n, m in lr.grid_words(G) for l in (m, m + p, m - p)]
        for n, l in rng.sample(candidates, min(cases, len(candidates))):
            e = lr.LensElement.from_left(am.from_word(n, l))
            recursive = lr.reduce(e, G)
            solved = _solve_with_retries(e, G, [(n, l)])
            _check(recursive == solved, f"solver and recursion disagree on ({n})W({l}) in {G.label()}")
            total += 1
    return total


def _solve_with_retries(e: lr.LensElement, G: lr.GluingMatrix, words) -> lr.SpanningCoordinates:
    window = lr.Window.covering(G.p, words)
    for _ in range(WINDOW_RETRIES):
        try:
            return lr.reduce_solver(e, G, window)
        except WindowTooSmall:
            window = window.doubled()
    return lr.reduce_solver(e, G, window)


def _suite_abs_min_remainder(rng: random.Random, cases: int) -> int:
    checked = 0
    for p in range(1, 51):
        for x in range(-200, 201):
            s0, w = lr.abs_min_remainder(x, p)
            _check(abs(w) <= p // 2 and w == x + p * s0, f"abs_min_remainder({x},{p}) = ({s0},{w})")
            span = abs(x) // p + 2
            best = min(range(-span, span + 1), key=lambda s: (abs(x + p * s), s))
            _check(s0 == best, f"abs_min_remainder({x},{p}) picked s0={s0}, brute force {best}")
            checked += 1
    return checked


_FUZZ_ALPHABET = "TWcwxytT()*,+-^/0123456789 " + string.ascii_letters


def _suite_language(rng: random.Random, cases: int) -> int:
    samples = []
    for _ in range(cases):
        samples.append((parse_scalar_text, random_scalar(rng)))
        samples.append((parse_torus, random_torus(rng, 4)))
        samples.append((parse_annulus, random_annulus(rng, 4, 4)))
        samples.append((parse_lens, random_lens(rng, 3, 3)))
    for parse, element in samples:
        text = print_element(element)
        _check(parse(text) == element, f"parse(print(e)) != e for {text!r}")
    for _ in range(cases * 20):
        length = rng.randint(0, 24)
        if rng.random() < 0.5:
            text = "".join(rng.choice(_FUZZ_ALPHABET) for _ in range(length))
        else:
            text = bytes(rng.randrange(256) for _ in range(length)).decode("latin-1")
        try:
            parse_lens(text)
        except SkeinError:
            pass
        except Exception as e:  # noqa: BLE001
            raise _Failure(f"parser crashed on {text!r}: {type(e).__name__}: {e}")
    return len(samples) + cases * 20


SUITES: Dict[str, Callable[[random.Random, int], int]] = {
    "scalar-laws": _suite_scalar_laws,
    "associativity": _suite_associativity,
    "fg-adjoint": _suite_fg_adjoint,
    "revorien": _suite_revorien,
    "tbasis-gcd": _suite_tbasis_gcd,
    "action-oracle": _suite_action_oracle,
    "module-axioms": _suite_module_axioms,
    "projection-seeds": _suite_projection_seeds,
    "s3-oracle": _suite_s3_oracle,
    "spanning": _suite_spanning,
    "move-soundness": _suite_move_soundness,
    "eta-base": _suite_eta_base,
    "solver-agreement": _suite_solver_agreement,
    "abs-min-remainder": _suite_abs_min_remainder,
    "language": _suite_language,
}

DEFAULT_CASES: Dict[str, int] = {
    "scalar-laws": 200,
    "associativity": 200,
    "fg-adjoint": 200,
    "revorien": 200,
    "tbasis-gcd": 40,
    "action-oracle": 200,
    "module-axioms": 200,
    "projection-seeds": 50,
    "s3-oracle": 100,
    "spanning": 50,
    "move-soundness": 500,
    "eta-base": 100,
    "solver-agreement": 100,
    "abs-min-remainder": 1,
    "language": 500,
}


def suite_names() -> List[str]:
    return list(SUITES) + ["all"]


def run_suite(name: str, seed: int = 0, cases: Optional[int] = None) -> SuiteResult:
    """
    Run one suite with its own seeded generator.

    Raises:
        KeyError: unknown suite name
    """
    check = SUITES[name]
    rng = random.Random(f"{seed}:{name}")
    count = cases if cases is not None else DEFAULT_CASES[name]
    try:
        ran = check(rng, count)
    except _Failure as failure:
        return SuiteResult(name, False, count, str(failure))
    except SkeinError as e:
        return SuiteResult(name, False, count, f"{type(e).__name__}: {e}")
    return SuiteResult(name, True, ran, None)


def run_suites(names: Sequence[str], seed: int = 0, cases: Optional[int] = None) -> List[SuiteResult]:
    """Run the named suites in order; ``all`` expands to every suite."""
    selected: List[str] = []
    for name in names:
        for n in (list(SUITES) if name == "all" else [name]):
            if n not in selected:
                selected.append(n)
    return [run_suite(n, seed, cases) for n in selected]
