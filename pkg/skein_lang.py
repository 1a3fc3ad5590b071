"""
skein_lang.py

Parser and printer for skein expressions.

The grammar (whitespace insensitive):

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := rational | 't' ['^' int] | atom | '(' expr ')'
    atom    := T(m,n) | W(r,s) | c(n) | w(r) | xT(k) | x(m,n) | y(r,s)
    lens    := tensor (('+'|'-') tensor)*      with  tensor := expr '(x)' expr

T and W are torus atoms; c, w, xT, x, y are solid-torus atoms. The two sorts
never mix inside one product or sum. The right side of a tensor extends up
to the next term that is itself followed by '(x)'.

This module provides:
- Expression AST nodes with sort() and evaluate()
- parse_torus, parse_annulus, parse_lens, parse_any, parse_scalar_text, parse_fraction_text
- print_element: the canonical, deterministic text form (parse inverts it)
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple, Union

from arpeggio import (
    EOF,
    NoMatch,
    Not,
    Optional,
    ParserPython,
    PTNodeVisitor,
    StrMatch,
    ZeroOrMore,
    visit_parse_tree,
)
from arpeggio import RegExMatch as _

import annulus_module
import torus_algebra
from annulus_module import AnnulusElement, AnnulusWord
from lens_reduction import LensElement
from scalar import (
    ONE,
    Scalar,
    ScalarFraction,
    as_scalar,
    format_fraction,
    format_scalar,
    t_pow,
)
from skein_config import MAX_ATOM_INDEX
from skein_errors import DomainError, ParseError, SortError
from torus_algebra import TorusElement, TorusWord

SCALAR = "scalar"
TORUS = "torus"
ANNULUS = "annulus"
LENS = "lens"

Element = Union[Scalar, TorusElement, AnnulusElement, LensElement]

ATOM_SORTS: Dict[str, str] = {
    "T": TORUS,
    "W": TORUS,
    "c": ANNULUS,
    "w": ANNULUS,
    "xT": ANNULUS,
    "x": ANNULUS,
    "y": ANNULUS,
}


# ─────────────────────────────────────────────────────────────────────────────
# Grammar
# ─────────────────────────────────────────────────────────────────────────────

def integer():
    return _(r"[+-]?\d+")

def rational():
    return _(r"\d+(?:/\d+)?")

def sign():
    return _(r"[+-]")

def pair():
    return "(", integer, ",", integer, ")"

def single():
    return "(", integer, ")"

def exponent():
    return "^", integer

def power():
    return "t", Optional(exponent)

def torus_curve():
    return "T", pair

def torus_wedge():
    return "W", pair

def annulus_core():
    return "c", single

def annulus_wedge():
    return "w", single

def annulus_tcore():
    return "xT", single

def annulus_x():
    return "x", pair

def annulus_y():
    return "y", pair

def group():
    return "(", expr, ")"

def factor():
    # xT before x: ordered choice
    return [
        rational,
        power,
        torus_curve,
        torus_wedge,
        annulus_core,
        annulus_wedge,
        annulus_tcore,
        annulus_x,
        annulus_y,
        group,
    ]

def term():
    return factor, ZeroOrMore("*", factor)

def signed_term():
    return sign, term

def expr():
    return Optional(sign), term, ZeroOrMore(signed_term)

def rhs_signed_term():
    return sign, term, Not("(x)")

def tensor_rhs():
    return Optional(sign), term, ZeroOrMore(rhs_signed_term)

def tensor():
    return expr, "(x)", tensor_rhs

def signed_tensor():
    return sign, tensor

def lens():
    return tensor, ZeroOrMore(signed_tensor)

def expr_root():
    return expr, EOF

def lens_root():
    return [lens, expr], EOF


# ─────────────────────────────────────────────────────────────────────────────
# Abstract syntax
# ─────────────────────────────────────────────────────────────────────────────

def _join_sorts(sorts: List[str], what: str, position: int) -> str:
    kinds = sorted({s for s in sorts if s != SCALAR})
    if len(kinds) > 1:
        raise SortError(f"cannot {what} {kinds[0]} and {kinds[1]} expressions", position=position)
    return kinds[0] if kinds else SCALAR


@dataclass(frozen=True)
class Expression:
    """Base AST node; ``position`` is the 0-based offset in the source text."""
    position: int

    def sort(self) -> str:
        raise NotImplementedError

    def evaluate(self) -> Element:
        raise NotImplementedError


@dataclass(frozen=True)
class ScalarLiteral(Expression):
    value: Scalar

    def sort(self) -> str:
        return SCALAR

    def evaluate(self) -> Scalar:
        return self.value


@dataclass(frozen=True)
class Atom(Expression):
    name: str
    args: Tuple[int, ...]

    def sort(self) -> str:
        return ATOM_SORTS[self.name]

    def evaluate(self) -> Element:
        name, args = self.name, self.args
        if any(abs(a) > MAX_ATOM_INDEX for a in args):
            raise DomainError(f"{name}{args} exceeds the index bound {MAX_ATOM_INDEX}")
        if name == "T":
            return torus_algebra.t_curve(*args)
        if name == "W":
            return torus_algebra.wedge(*args)
        if name == "c":
            return annulus_module.core(args[0])
        if name == "w":
            return annulus_module.wedge1(args[0])
        if name == "y":
            return annulus_module.y(*args)
        if name == "xT":
            return annulus_module.t_core(args[0])
        return annulus_module.x(*args)


@dataclass(frozen=True)
class Product(Expression):
    factors: Tuple[Expression, ...]

    def sort(self) -> str:
        return _join_sorts([f.sort() for f in self.factors], "multiply", self.position)

    def evaluate(self) -> Element:
        self.sort()
        value = self.factors[0].evaluate()
        for f in self.factors[1:]:
            value = value * f.evaluate()
        return value


@dataclass(frozen=True)
class Sum(Expression):
    terms: Tuple[Tuple[int, Expression], ...]

    def sort(self) -> str:
        return _join_sorts([t.sort() for _, t in self.terms], "add", self.position)

    def evaluate(self) -> Element:
        self.sort()
        total = None
        for sgn, t in self.terms:
            v = t.evaluate()
            if sgn < 0:
                v = -v
            total = v if total is None else total + v
        return total


@dataclass(frozen=True)
class Tensor(Expression):
    left: Expression
    right: Expression

    def sort(self) -> str:
        for side in (self.left, self.right):
            if side.sort() not in (SCALAR, ANNULUS):
                raise SortError("tensor factors must be solid-torus expressions", position=side.position)
        return LENS

    def evaluate(self) -> LensElement:
        self.sort()
        return LensElement([(_as_annulus(self.left.evaluate()), _as_annulus(self.right.evaluate()), ONE)])


@dataclass(frozen=True)
class TensorSum(Expression):
    terms: Tuple[Tuple[int, Tensor], ...]

    def sort(self) -> str:
        for _, t in self.terms:
            t.sort()
        return LENS

    def evaluate(self) -> LensElement:
        total = LensElement()
        for sgn, t in self.terms:
            v = t.evaluate()
            total = total + (v if sgn > 0 else -v)
        return total


def _as_annulus(value) -> AnnulusElement:
    if isinstance(value, AnnulusElement):
        return value
    return annulus_module.scalar_element(value)


def _as_torus(value) -> TorusElement:
    if isinstance(value, TorusElement):
        return value
    return torus_algebra.identity().scale(value)


# ─────────────────────────────────────────────────────────────────────────────
# Parse-tree visitor
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class _Sign:
    value: int


def _ints(children) -> List[int]:
    return [c for c in children if isinstance(c, int) and not isinstance(c, bool)]


def _exprs(children) -> List[Expression]:
    return [c for c in children if isinstance(c, Expression)]


def _index_args(children) -> Tuple[int, ...]:
    for c in children:
        if isinstance(c, tuple) and all(isinstance(v, int) for v in c):
            return c
    return ()


def _signed_sequence(children) -> List[Tuple[int, Expression]]:
    out: List[Tuple[int, Expression]] = []
    lead = 1
    for c in children:
        if isinstance(c, _Sign):
            lead = c.value
        elif isinstance(c, Expression):
            out.append((lead, c))
            lead = 1
        elif isinstance(c, tuple) and len(c) == 2 and isinstance(c[0], _Sign):
            out.append((c[0].value, c[1]))
    return out


class ExpressionBuilder(PTNodeVisitor):
    """Builds Expression nodes from the arpeggio parse tree."""

    def visit_integer(self, node, children):
        return int(node.value)

    def visit_rational(self, node, children):
        try:
            value = Fraction(node.value)
        except ZeroDivisionError:
            raise ParseError("zero denominator in rational literal", position=node.position) from None
        return ScalarLiteral(position=node.position, value=as_scalar(value))

    def visit_sign(self, node, children):
        return _Sign(-1 if node.value == "-" else 1)

    def visit_pair(self, node, children):
        return tuple(_ints(children))

    def visit_single(self, node, children):
        return tuple(_ints(children))

    def visit_exponent(self, node, children):
        return _ints(children)[0]

    def visit_power(self, node, children):
        exps = _ints(children)
        return ScalarLiteral(position=node.position, value=t_pow(exps[0] if exps else 1))

    def _atom(self, name, node, children):
        return Atom(position=node.position, name=name, args=_index_args(children))

    def visit_torus_curve(self, node, children):
        return self._atom("T", node, children)

    def visit_torus_wedge(self, node, children):
        return self._atom("W", node, children)

    def visit_annulus_core(self, node, children):
        return self._atom("c", node, children)

    def visit_annulus_wedge(self, node, children):
        return self._atom("w", node, children)

    def visit_annulus_tcore(self, node, children):
        return self._atom("xT", node, children)

    def visit_annulus_x(self, node, children):
        return self._atom("x", node, children)

    def visit_annulus_y(self, node, children):
        return self._atom("y", node, children)

    def visit_group(self, node, children):
        return _exprs(children)[0]

    def visit_factor(self, node, children):
        return _exprs(children)[0]

    def visit_term(self, node, children):
        factors = _exprs(children)
        if len(factors) == 1:
            return factors[0]
        return Product(position=node.position, factors=tuple(factors))

    def visit_signed_term(self, node, children):
        signs = [c for c in children if isinstance(c, _Sign)]
        return (signs[0], _exprs(children)[0])

    visit_rhs_signed_term = visit_signed_term

    def visit_expr(self, node, children):
        terms = _signed_sequence(children)
        if len(terms) == 1 and terms[0][0] > 0:
            return terms[0][1]
        return Sum(position=node.position, terms=tuple(terms))

    visit_tensor_rhs = visit_expr

    def visit_tensor(self, node, children):
        left, right = _exprs(children)[:2]
        return Tensor(position=node.position, left=left, right=right)

    def visit_signed_tensor(self, node, children):
        signs = [c for c in children if isinstance(c, _Sign)]
        tensors = [c for c in children if isinstance(c, Tensor)]
        return (signs[0], tensors[0])

    def visit_lens(self, node, children):
        terms: List[Tuple[int, Tensor]] = []
        for c in children:
            if isinstance(c, Tensor):
                terms.append((1, c))
            elif isinstance(c, tuple):
                terms.append((c[0].value, c[1]))
        return TensorSum(position=node.position, terms=tuple(terms))

    def visit_expr_root(self, node, children):
        return _exprs(children)[0]

    visit_lens_root = visit_expr_root


# ─────────────────────────────────────────────────────────────────────────────
# Parsing
# ─────────────────────────────────────────────────────────────────────────────

_PARSERS: Dict[str, ParserPython] = {}
_PARSER_LOCK = threading.Lock()


def _get_parser(root: str) -> ParserPython:
    with _PARSER_LOCK:
        if root not in _PARSERS:
            _PARSERS[root] = ParserPython(lens_root if root == LENS else expr_root, ignore_case=False)
        return _PARSERS[root]


def _expected(err: NoMatch) -> List[str]:
    rules = getattr(err, "rules", None) or [getattr(err, "rule", None)]
    out = []
    for rule in rules:
        if rule is None:
            continue
        if isinstance(rule, StrMatch):
            out.append(repr(rule.to_match))
        else:
            out.append(getattr(rule, "rule_name", "") or str(rule))
    return out


def parse_expression(text: str, allow_lens: bool = False) -> Expression:
    """
    Parse text into an Expression without evaluating it.

    Raises:
        ParseError: with the failure position and the expected tokens
    """
    if not isinstance(text, str):
        raise ParseError(f"expected text, got {type(text).__name__}")
    parser = _get_parser(LENS if allow_lens else "expr")
    try:
        with _PARSER_LOCK:
            tree = parser.parse(text)
        return visit_parse_tree(tree, ExpressionBuilder())
    except NoMatch as err:
        raise ParseError("unexpected input", position=err.position, expected=_expected(err)) from None
    except RecursionError:
        raise ParseError("expression nested too deeply") from None


def parse_torus(text: str) -> TorusElement:
    """
    Parse a torus-algebra expression; scalars are promoted to multiples of 1.

    Examples:
        parse_torus("T(1,0)*W(0,1) + 2*T(0,1)")
    """
    ast = parse_expression(text)
    if ast.sort() == ANNULUS:
        raise SortError("expected a torus expression, got a solid-torus one", position=ast.position)
    return _as_torus(ast.evaluate())


def parse_annulus(text: str) -> AnnulusElement:
    """Parse a solid-torus expression, e.g. ``c(2)*w(-1)``."""
    ast = parse_expression(text)
    if ast.sort() == TORUS:
        raise SortError("expected a solid-torus expression, got a torus one", position=ast.position)
    return _as_annulus(ast.evaluate())


def parse_lens(text: str) -> LensElement:
    """
    Parse a lens-space expression ``left (x) right [+ ...]``.

    A plain solid-torus expression u is read as u (x) 1.
    """
    ast = parse_expression(text, allow_lens=True)
    kind = ast.sort()
    if kind == LENS:
        return ast.evaluate()
    if kind == TORUS:
        raise SortError("expected a lens expression, got a torus one", position=ast.position)
    return LensElement.from_left(_as_annulus(ast.evaluate()))


def parse_any(text: str) -> Element:
    """Parse with the sort inferred from the atoms present."""
    ast = parse_expression(text, allow_lens=True)
    return ast.evaluate()


def parse_scalar_text(text: str) -> Scalar:
    """Parse a scalar in canonical (or any) form, e.g. ``3/2*t^2 + 1 - t^-4``."""
    ast = parse_expression(text)
    if ast.sort() != SCALAR:
        raise SortError(f"expected a scalar, got a {ast.sort()} expression", position=ast.position)
    return as_scalar(ast.evaluate())


def parse_fraction_text(text: str) -> ScalarFraction:
    """Inverse of format_fraction: ``(<num>)/(<den>)`` or a plain scalar."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")") and ")/(" in body:
        num, den = body[1:-1].split(")/(", 1)
        return ScalarFraction(parse_scalar_text(num), parse_scalar_text(den))
    return ScalarFraction.of(parse_scalar_text(body))


# ─────────────────────────────────────────────────────────────────────────────
# Printing
# ─────────────────────────────────────────────────────────────────────────────

def format_torus_word(word: TorusWord) -> str:
    parts = []
    if word.tpart is not None:
        parts.append(f"T({word.tpart[0]},{word.tpart[1]})")
    if word.wpart != (0, 0):
        parts.append(f"W({word.wpart[0]},{word.wpart[1]})")
    return "*".join(parts)


def format_annulus_word(word: AnnulusWord) -> str:
    parts = []
    if word.n:
        parts.append(f"c({word.n})")
    if word.r:
        parts.append(f"w({word.r})")
    return "*".join(parts)


def _format_term(c: Scalar, word_text: str) -> str:
    if not word_text:
        return format_scalar(c)
    if c == 1:
        return word_text
    if c == -1:
        return f"-{word_text}"
    if c.is_monomial():
        return f"{format_scalar(c)}*{word_text}"
    return f"({format_scalar(c)})*{word_text}"


def _join_terms(parts: List[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def format_combination(e, word_text) -> str:
    ordered = sorted(e.items(), key=lambda kv: kv[0].sort_key())
    return _join_terms([_format_term(c, word_text(w)) for w, c in ordered])


def format_lens(e: LensElement) -> str:
    parts = [
        f"({format_combination(left, format_annulus_word)}) (x) ({format_combination(right, format_annulus_word)})"
        for left, right, _ in e.terms
    ]
    return " + ".join(parts) if parts else "0"


def print_element(e) -> str:
    """
    Canonical text of a scalar, fraction, torus, solid-torus or lens element.

    Examples:
        print_element(parse_torus("T(1,0)*T(1,0)")) == "T(2,0) + 2*W(1,0)"
        print_element(parse_annulus("c(1)*c(1) - 2*w(1)")) == "c(2) - 2*w(1)"
    """
    if isinstance(e, Scalar):
        return format_scalar(e)
    if isinstance(e, ScalarFraction):
        return format_fraction(e)
    if isinstance(e, TorusElement):
        return format_combination(e, format_torus_word)
    if isinstance(e, AnnulusElement):
        return format_combination(e, format_annulus_word)
    if isinstance(e, LensElement):
        return format_lens(e)
    raise TypeError(f"cannot print {type(e).__name__}")
