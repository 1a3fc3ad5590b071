"""
annulus_module.py

The commutative skein algebra of the solid torus.

Canonical words are (n) * W(r) with core multiplicity n >= 0 and 2-labeled
winding r (any integer); multiplication adds both indices. A second basis,
the T-form (k)_T * W(l) with k >= 0, is related to the canonical one by a
unitriangular change of basis along the winding filtration, where
(0)_T = 2, (1)_T = (1) and (k)_T = (1)*(k-1)_T - W(1)*(k-2)_T.

Projections of torus curves are the x- and y-families:
- x(m,n) = projection of (m,n)_T, via the recursion
  x(m+1,n) = (1)*x(m,n) - W(1)*x(m-1,n), seeded by x(0,n) = t^n + t^-n, x(1,n) = t^n (1)
- y(r,s) = projection of W(r,s) = t^{-2rs} W(r)

This module provides:
- AnnulusWord / AnnulusElement value types and the constructors core, wedge1
- t_core, to_tform, from_tform for the T-form basis
- x, y (memoized, thread-safe), winding, evaluate_unknots
"""
from __future__ import annotations

import threading
from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Tuple

from scalar import ONE, ZERO, Combination, Scalar, ScalarLike, as_scalar, t_pow
from skein_errors import DomainError

TForm = Dict[Tuple[int, int], Scalar]


class AnnulusWord(NamedTuple):
    """Canonical word (n) * W(r); n is the core multiplicity (n >= 0)."""
    n: int
    r: int

    def sort_key(self) -> tuple:
        # highest core first, then wedge ascending
        return (-self.n, self.r)


IDENTITY_WORD = AnnulusWord(0, 0)


def make_word(n: int, r: int) -> AnnulusWord:
    if n < 0:
        raise DomainError(f"annulus core index must be nonnegative, got {n}")
    return AnnulusWord(int(n), int(r))


def _word_product(w1: AnnulusWord, w2: AnnulusWord) -> Dict[AnnulusWord, Scalar]:
    return {AnnulusWord(w1.n + w2.n, w1.r + w2.r): ONE}


class AnnulusElement(Combination):
    """Finite combination AnnulusWord -> Scalar; ``*`` is the commutative product."""

    __slots__ = ()
    IDENTITY = IDENTITY_WORD

    @classmethod
    def _word_product(cls, w1, w2):
        return _word_product(w1, w2)

    def __mul__(self, other):
        # Word products are single words, so skip the generic expansion.
        if isinstance(other, AnnulusElement):
            out: Dict[AnnulusWord, Scalar] = {}
            for (n1, r1), c1 in self._terms.items():
                for (n2, r2), c2 in other._terms.items():
                    w = AnnulusWord(n1 + n2, r1 + r2)
                    v = c1 * c2
                    out[w] = out[w] + v if w in out else v
            return AnnulusElement(out)
        return super().__mul__(other)


# ─────────────────────────────────────────────────────────────────────────────
# Constructors
# ─────────────────────────────────────────────────────────────────────────────

def identity() -> AnnulusElement:
    return AnnulusElement._from_clean({IDENTITY_WORD: ONE})


def scalar_element(c: ScalarLike) -> AnnulusElement:
    return AnnulusElement({IDENTITY_WORD: as_scalar(c)})


def from_word(n: int, r: int, coeff: ScalarLike = 1) -> AnnulusElement:
    return AnnulusElement({make_word(n, r): as_scalar(coeff)})


def core(n: int) -> AnnulusElement:
    """(n) for n >= 0; (n) for n < 0 is read as (|n|) * W(n)."""
    if n >= 0:
        return AnnulusElement._from_clean({AnnulusWord(n, 0): ONE})
    return AnnulusElement._from_clean({AnnulusWord(-n, n): ONE})


def wedge1(r: int) -> AnnulusElement:
    return AnnulusElement._from_clean({AnnulusWord(0, r): ONE})


def mul(u: AnnulusElement, v: AnnulusElement) -> AnnulusElement:
    return u * v


def add(u: AnnulusElement, v: AnnulusElement) -> AnnulusElement:
    return u + v


def sub(u: AnnulusElement, v: AnnulusElement) -> AnnulusElement:
    return u - v


def scale(u: AnnulusElement, c: ScalarLike) -> AnnulusElement:
    return u.scale(c)


def shift_wedge(u: AnnulusElement, l: int) -> AnnulusElement:
    """Multiply by W(l)."""
    if l == 0:
        return u
    return AnnulusElement._from_clean({AnnulusWord(w.n, w.r + l): c for w, c in u.items()})


def leading_word(u: AnnulusElement) -> AnnulusWord:
    """The word of highest core (ties: highest winding); raises ValueError on zero."""
    if u.is_zero():
        raise ValueError("zero element has no leading word")
    return max(u.words(), key=lambda w: (w.n, w.r))


def winding(w: AnnulusWord) -> int:
    """Homology degree n + 2r."""
    return w.n + 2 * w.r


def evaluate_unknots(u: AnnulusElement) -> Scalar:
    """Evaluate in the 3-sphere: (n) -> (t + t^-1)^n, W(r) -> 1."""
    circle = t_pow(1) + t_pow(-1)
    total = ZERO
    for w, c in u.items():
        total = total + c * circle ** w.n
    return total


# ─────────────────────────────────────────────────────────────────────────────
# Memo tables
# ─────────────────────────────────────────────────────────────────────────────

_MEMO_LOCK = threading.Lock()
_T_CORE_MEMO: Dict[int, AnnulusElement] = {}
_X_MEMO: Dict[Tuple[int, int], AnnulusElement] = {}


def _memo_get(table: dict, key):
    with _MEMO_LOCK:
        return table.get(key)


def _memo_put(table: dict, key, value):
    with _MEMO_LOCK:
        return table.setdefault(key, value)


def x_table_snapshot() -> Dict[Tuple[int, int], AnnulusElement]:
    """A copy of the computed x values (used by the on-disk cache)."""
    with _MEMO_LOCK:
        return dict(_X_MEMO)


def preload_x_table(entries: Mapping[Tuple[int, int], AnnulusElement]) -> None:
    """Seed the x memo table; existing entries win."""
    with _MEMO_LOCK:
        for key, value in entries.items():
            _X_MEMO.setdefault(key, value)


def clear_memo() -> None:
    with _MEMO_LOCK:
        _T_CORE_MEMO.clear()
        _X_MEMO.clear()


# ─────────────────────────────────────────────────────────────────────────────
# T-form basis
# ─────────────────────────────────────────────────────────────────────────────

def t_core(k: int) -> AnnulusElement:
    """
    (k)_T in the canonical basis.

    Examples:
        t_core(2) == core(2) - 2*wedge1(1)
    """
    if k < 0:
        return shift_wedge(t_core(-k), k)
    cached = _memo_get(_T_CORE_MEMO, k)
    if cached is not None:
        return cached
    if k == 0:
        value = scalar_element(2)
    elif k == 1:
        value = core(1)
    else:
        # bottom-up so the recursion never goes deep
        for j in range(2, k):
            t_core(j)
        value = core(1) * t_core(k - 1) - wedge1(1) * t_core(k - 2)
    return _memo_put(_T_CORE_MEMO, k, value)


def to_tform(u: AnnulusElement) -> TForm:
    """
    Express u in the T-form basis {(k)_T * W(l) : k >= 0}.

    Triangular elimination on the highest core: (k)_T = (k) + lower cores for
    k >= 1, and (0)_T = 2, so coefficients on (0, l) may be halves.
    """
    remaining: Dict[AnnulusWord, Scalar] = dict(u.items())
    result: TForm = {}
    while remaining:
        word = max(remaining, key=lambda w: (w.n, w.r))
        c = remaining.pop(word)
        if word.n == 0:
            result[(0, word.r)] = result.get((0, word.r), ZERO) + c * Fraction(1, 2)
            continue
        result[(word.n, word.r)] = result.get((word.n, word.r), ZERO) + c
        for w, v in shift_wedge(t_core(word.n), word.r).items():
            if w == word:
                continue
            nv = remaining.get(w, ZERO) - c * v
            if nv.is_zero():
                remaining.pop(w, None)
            else:
                remaining[w] = nv
    return {kl: c for kl, c in result.items() if not c.is_zero()}


def from_tform(d: Mapping[Tuple[int, int], ScalarLike]) -> AnnulusElement:
    """Inverse of to_tform."""
    total = AnnulusElement()
    for (k, l), c in d.items():
        if k < 0:
            raise DomainError(f"T-form core index must be nonnegative, got {k}")
        total = total + shift_wedge(t_core(k), l).scale(c)
    return total


# ─────────────────────────────────────────────────────────────────────────────
# Projections
# ─────────────────────────────────────────────────────────────────────────────

def x(m: int, n: int) -> AnnulusElement:
    """
    Projection of (m,n)_T.

    Examples:
        x(0, 3) == (t^3 + t^-3) * identity
        x(1, k) == t^k * (1)
        x(2, 1) == t*(2) - (t + t^-1)*W(1)
    """
    cached = _memo_get(_X_MEMO, (m, n))
    if cached is not None:
        return cached
    if m == 0:
        value = scalar_element(t_pow(n) + t_pow(-n))
    elif m == 1:
        value = core(1).scale(t_pow(n))
    elif m == -1:
        value = AnnulusElement({AnnulusWord(1, -1): t_pow(-n)})
    elif m > 0:
        for j in range(2, m):
            x(j, n)
        value = core(1) * x(m - 1, n) - wedge1(1) * x(m - 2, n)
    else:
        for j in range(-2, m, -1):
            x(j, n)
        # mirror recursion with (-1) = (1)W(-1) and W(-1)
        value = (
            AnnulusElement._from_clean({AnnulusWord(1, -1): ONE}) * x(m + 1, n)
            - wedge1(-1) * x(m + 2, n)
        )
    return _memo_put(_X_MEMO, (m, n), value)


def y(r: int, s: int) -> AnnulusElement:
    """Projection of W(r,s): t^{-2rs} W(r)."""
    return AnnulusElement._from_clean({AnnulusWord(0, r): t_pow(-2 * r * s)})


def windings(u: AnnulusElement) -> Iterable[int]:
    return sorted({winding(w) for w in u.words()})
