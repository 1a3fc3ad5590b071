"""
boundary_action.py

The projection from the torus algebra to the solid torus and the action of
the torus algebra on the solid torus by stacking at the boundary.

Two independent routes compute the same thing on projected elements:
- act(A, u): closed-form action on the T-form basis
- act_oracle(A, B): multiply in the torus algebra, then project

Action formulas on a T-form word (k)_T * W(l):
- W(r,s)  . (k)_T W(l) = t^{-2s(r+k+2l)} (k)_T W(l+r)
- (m,n)_T . (k)_T W(l) = t^{-2nl} W(l) x(m+k,n) + t^{-2n(k+l)} W(k+l) x(m-k,n)

A word (m,n)_T * W(r,s) acts by its wedge part first, then its T-part.
"""
from __future__ import annotations

from typing import Dict, Tuple

from annulus_module import (
    AnnulusElement,
    AnnulusWord,
    TForm,
    from_tform,
    shift_wedge,
    to_tform,
    x,
    y,
)
from scalar import ZERO, Scalar, t_pow
from torus_algebra import TorusElement, TorusWord, mul, t_curve, wedge


def _wedge_line_exponent(r: int, s: int, k: int, l: int) -> int:
    return -2 * s * (r + k + 2 * l)


# ─────────────────────────────────────────────────────────────────────────────
# Projection
# ─────────────────────────────────────────────────────────────────────────────

def project_word(word: TorusWord) -> AnnulusElement:
    """Projection of one basis word: t^{-2rn-2rs} x(m,n) W(r), or y(r,s) for pure wedges."""
    r, s = word.wpart
    if word.tpart is None:
        return y(r, s)
    m, n = word.tpart
    return shift_wedge(x(m, n), r).scale(t_pow(-2 * r * n - 2 * r * s))


def project(A: TorusElement) -> AnnulusElement:
    """
    Linear projection to the solid torus.

    Examples:
        project(t_curve(0, 1)) == t + t^-1
        project(wedge(1, 1)) == t^-2 * W(1)
    """
    total = AnnulusElement()
    for word, c in A.items():
        total = total + project_word(word).scale(c)
    return total


# ─────────────────────────────────────────────────────────────────────────────
# Action
# ─────────────────────────────────────────────────────────────────────────────

def act_wedge_on_tform(r: int, s: int, d: TForm) -> TForm:
    """Apply W(r,s) to a T-form element; stays in T-form."""
    if r == 0 and s == 0:
        return d
    out: TForm = {}
    for (k, l), c in d.items():
        key = (k, l + r)
        v = c.shift(_wedge_line_exponent(r, s, k, l))
        out[key] = out[key] + v if key in out else v
    return out


def act_t_on_tform(m: int, n: int, d: TForm) -> AnnulusElement:
    """Apply (m,n)_T to a T-form element; returns a canonical element."""
    total: Dict[AnnulusWord, Scalar] = {}

    def accumulate(part: AnnulusElement, coeff: Scalar) -> None:
        for w, v in part.items():
            nv = total.get(w, ZERO) + v * coeff
            total[w] = nv

    for (k, l), c in d.items():
        accumulate(shift_wedge(x(m + k, n), l), c.shift(-2 * n * l))
        accumulate(shift_wedge(x(m - k, n), k + l), c.shift(-2 * n * (k + l)))
    return AnnulusElement(total)


def act_word(word: TorusWord, d: TForm) -> AnnulusElement:
    r, s = word.wpart
    d = act_wedge_on_tform(r, s, d)
    if word.tpart is None:
        return from_tform(d)
    return act_t_on_tform(word.tpart[0], word.tpart[1], d)


def act(A: TorusElement, u: AnnulusElement) -> AnnulusElement:
    """
    The boundary action A . u, bilinear in A and u.

    Examples:
        act(t_curve(1, 1), core(1)) == t*(2) + (t^-3 - t)*W(1)
    """
    if A.is_zero() or u.is_zero():
        return AnnulusElement()
    d = to_tform(u)
    total = AnnulusElement()
    for word, c in A.items():
        total = total + act_word(word, d).scale(c)
    return total


def act_oracle(A: TorusElement, B: TorusElement) -> AnnulusElement:
    """A . project(B) computed as project(A * B)."""
    return project(mul(A, B))


# ─────────────────────────────────────────────────────────────────────────────
# Pulling x- and y-factors through products
# ─────────────────────────────────────────────────────────────────────────────

def pull_x_factor(r: int, n: int) -> Scalar:
    """x(m,n) * y(r,s) = t^{2rn} (m,n)_T . y(r,s)."""
    return t_pow(2 * r * n)


def pull_y_factor(m: int, s: int) -> Scalar:
    """x(m,n) * y(r,s) = t^{2ms} W(r,s) . x(m,n)."""
    return t_pow(2 * m * s)


def pull_x(m: int, n: int, r: int, s: int) -> Tuple[AnnulusElement, AnnulusElement]:
    """Both sides of the x-pull identity, (product, action form)."""
    lhs = x(m, n) * y(r, s)
    rhs = act(t_curve(m, n), y(r, s)).scale(pull_x_factor(r, n))
    return lhs, rhs


def pull_y(m: int, n: int, r: int, s: int) -> Tuple[AnnulusElement, AnnulusElement]:
    """Both sides of the y-pull identity, (product, action form)."""
    lhs = x(m, n) * y(r, s)
    rhs = act(wedge(r, s), x(m, n)).scale(pull_y_factor(m, s))
    return lhs, rhs
