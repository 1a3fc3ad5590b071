"""
torus_algebra.py

The skein algebra of the torus in its T-basis presentation.

Every element is a finite combination of words (m,n)_T * W(r,s), with the
T-part always written to the left of the wedge part and restricted to the
cone m > 0 or (m = 0, n > 0). Products are reduced to this normal form by
three rewriting rules:

- moving a wedge right past a T-curve: W(r,s)*(m,n)_T = t^{-2(ms-nr)} (m,n)_T*W(r,s)
- product-to-sum: (m,n)_T*(r,s)_T = (m+r,n+s)_T + (m-r,n-s)_T*W(r,s)
- merging wedges: W(m,n)*W(r,s) = t^{2(ms-nr)} W(m+r,n+s)

together with (0,0)_T = 2 and the reorientation rule
(m,n)_T = (-m,-n)_T * W(m,n) for pairs outside the cone.

This module provides:
- TorusWord / TorusElement value types
- t_curve, wedge, identity constructors
- mul: normal-form multiplication
- standard_curve, tbasis_curve, fg_adjoint, homology_class, switch_exponent
"""
from __future__ import annotations

from math import gcd
from typing import Dict, List, NamedTuple, Optional, Tuple

from scalar import ONE, Combination, Scalar, ScalarLike, as_scalar, t_pow
from skein_errors import DomainError, UnsupportedGcd

Pair = Tuple[int, int]


class TorusWord(NamedTuple):
    """A basis word (m,n)_T * W(r,s); ``tpart`` is None for a pure wedge word."""
    tpart: Optional[Pair]
    wpart: Pair

    def sort_key(self) -> tuple:
        # T-words print before pure wedges
        if self.tpart is None:
            return (1, 0, 0) + self.wpart
        return (0,) + self.tpart + self.wpart


IDENTITY_WORD = TorusWord(None, (0, 0))


def in_cone(m: int, n: int) -> bool:
    """The cone condition for T-parts: m > 0, or m = 0 and n > 0."""
    return m > 0 or (m == 0 and n > 0)


def make_word(tpart: Optional[Pair], wpart: Pair = (0, 0)) -> TorusWord:
    """Validated TorusWord constructor."""
    if tpart is not None:
        tpart = (int(tpart[0]), int(tpart[1]))
        if not in_cone(*tpart):
            raise DomainError(f"T-part {tpart} is outside the cone m>0 or (m=0, n>0)")
    return TorusWord(tpart, (int(wpart[0]), int(wpart[1])))


def _det(u: Pair, v: Pair) -> int:
    return u[0] * v[1] - u[1] * v[0]


def switch_exponent(c: Pair, w: Pair) -> int:
    """
    Exponent in (m,n)_T * W(r,s) = t^{2(ms-nr)} W(r,s) * (m,n)_T.

    Args:
        c: the T-curve index (m, n)
        w: the wedge index (r, s)
    """
    return 2 * _det(c, w)


def _normal_word(tpair: Optional[Pair], wedges: List[Pair]) -> Tuple[TorusWord, Scalar]:
    """
    Normalize T_{tpair} * W(w_1) * ... * W(w_k) into a single word and scalar.

    tpair may lie outside the cone (reoriented) or be (0,0) (replaced by 2).
    """
    factor: ScalarLike = 1
    tpart: Optional[Pair] = None
    if tpair is not None:
        m, n = tpair
        if m == 0 and n == 0:
            factor = 2
        elif in_cone(m, n):
            tpart = (m, n)
        else:
            tpart = (-m, -n)
            wedges = [(m, n)] + wedges

    exp = 0
    acc = (0, 0)
    for w in wedges:
        exp += 2 * _det(acc, w)
        acc = (acc[0] + w[0], acc[1] + w[1])
    coeff = t_pow(exp) if factor == 1 else t_pow(exp) * factor
    return TorusWord(tpart, acc), coeff


def _word_product(w1: TorusWord, w2: TorusWord) -> Dict[TorusWord, Scalar]:
    """Expand the product of two basis words into normal form."""
    c1, r1 = w1.tpart, w1.wpart
    c2, r2 = w2.tpart, w2.wpart

    # W(r1) * T(c2) = t^{-2 det(c2, r1)} T(c2) * W(r1)
    shift = -2 * _det(c2, r1) if c2 is not None else 0

    if c1 is None or c2 is None:
        t_terms: List[Tuple[Optional[Pair], List[Pair]]] = [(c1 if c2 is None else c2, [])]
    else:
        t_terms = [
            ((c1[0] + c2[0], c1[1] + c2[1]), []),
            ((c1[0] - c2[0], c1[1] - c2[1]), [c2]),
        ]

    out: Dict[TorusWord, Scalar] = {}
    for tpair, wedges in t_terms:
        word, coeff = _normal_word(tpair, wedges + [r1, r2])
        coeff = coeff.shift(shift)
        out[word] = out[word] + coeff if word in out else coeff
    return out


class TorusElement(Combination):
    """Finite combination TorusWord -> Scalar; ``*`` is the noncommutative product."""

    __slots__ = ()
    IDENTITY = IDENTITY_WORD

    @classmethod
    def _word_product(cls, w1, w2):
        return _word_product(w1, w2)


# ─────────────────────────────────────────────────────────────────────────────
# Constructors
# ─────────────────────────────────────────────────────────────────────────────

def identity() -> TorusElement:
    return TorusElement._from_clean({IDENTITY_WORD: ONE})


def from_word(word: TorusWord, coeff: ScalarLike = 1) -> TorusElement:
    return TorusElement({word: as_scalar(coeff)})


def t_curve(m: int, n: int) -> TorusElement:
    """
    The T-curve (m,n)_T as a normalized element.

    (0,0) gives 2; pairs outside the cone are rewritten (m,n)_T = (-m,-n)_T * W(m,n).

    Examples:
        >>> t_curve(-1, 0)   # one word: tpart (1,0), wpart (-1,0)
    """
    word, coeff = _normal_word((m, n), [])
    return TorusElement._from_clean({word: coeff})


def wedge(r: int, s: int) -> TorusElement:
    """The pure wedge word W(r,s); W(0,0) is the identity."""
    return TorusElement._from_clean({TorusWord(None, (r, s)): ONE})


def scale(A: TorusElement, c: ScalarLike) -> TorusElement:
    return A.scale(c)


def add(A: TorusElement, B: TorusElement) -> TorusElement:
    return A + B


def neg(A: TorusElement) -> TorusElement:
    return -A


def mul(A: TorusElement, B: TorusElement) -> TorusElement:
    """Bilinear normal-form product A * B."""
    return A * B


# ─────────────────────────────────────────────────────────────────────────────
# Derived curves and identities
# ─────────────────────────────────────────────────────────────────────────────

def homology_class(w: TorusWord) -> Pair:
    """Homology class (m + 2r, n + 2s) of a word; a pure wedge counts twice."""
    m, n = w.tpart if w.tpart is not None else (0, 0)
    r, s = w.wpart
    return (m + 2 * r, n + 2 * s)


def standard_curve(m: int, n: int) -> TorusElement:
    """
    The standard-basis curve (m,n) for gcd(m,n) in {1, 2}.

    Raises:
        UnsupportedGcd: gcd is 0 (the pair (0,0)) or at least 3
    """
    d = gcd(m, n)
    if d == 1:
        return t_curve(m, n)
    if d == 2:
        return t_curve(m, n) + wedge(m // 2, n // 2).scale(2)
    raise UnsupportedGcd(m, n, d)


def tbasis_curve(m: int, n: int) -> TorusElement:
    """
    (m,n)_T built by the gcd recursion
    (m,n)_T = (m-a,n-b)_T*(a,b)_T - (m-2a,n-2b)_T*W(a,b), with (a,b) = (m,n)/d.

    For d <= 2 this is t_curve itself; the recursion exercises the product
    rule, so comparing against t_curve checks the presentation.
    """
    d = gcd(m, n)
    if d <= 2:
        return t_curve(m, n)
    a, b = m // d, n // d
    return (
        mul(tbasis_curve(m - a, n - b), t_curve(a, b))
        - mul(tbasis_curve(m - 2 * a, n - 2 * b), wedge(a, b))
    )


def fg_adjoint(m: int, n: int, r: int, s: int) -> TorusElement:
    """Right side of (m,n)_T*(r,s)_T = (m+r,n+s)_T + W(m,n)*(r-m,s-n)_T."""
    return t_curve(m + r, n + s) + mul(wedge(m, n), t_curve(r - m, s - n))


def word_element(tpart: Optional[Pair], wpart: Pair = (0, 0)) -> TorusElement:
    """The product t_curve(tpart) * wedge(wpart) for arbitrary integer pairs."""
    if tpart is None:
        return wedge(*wpart)
    return mul(t_curve(*tpart), wedge(*wpart))
