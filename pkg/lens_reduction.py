"""
lens_reduction.py

Skein elements of the lens space L(p,q) and their reduction to the finite
spanning grid {(n) W(m) (x) 1 : 0 <= n <= p//2, |m| <= p//2}.

L(p,q) is two solid tori glued along their boundary by the matrix (a p; b q)
of determinant -1. Its skein module is the balanced tensor product of two
copies of the solid-torus module over the torus algebra: for any torus
element A,

    v (x) (A . w)  =  (f(A) . v) (x) w

where f is the antihomomorphism induced by the gluing matrix.

This module provides:
- GluingMatrix, gluing_for, abs_min_remainder, solve_ma_kp
- f_push, right_to_left_action, balance
- LensElement, SpanningCoordinates, ReductionResult, Window
- wedge_period and the strip moves (the elementary lens relations)
- core_relation: highest-core elimination relations
- reduce / reduce_xy: the recursive reducer (memoized, step-budgeted)
- relation_set / reduce_solver: Gaussian elimination over a finite window
- reduce_with_fallback: recursive path first, solver on budget exhaustion
"""
from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Optional, Set, Tuple

from annulus_module import (
    IDENTITY_WORD,
    AnnulusElement,
    AnnulusWord,
    from_word,
    identity,
    shift_wedge,
    to_tform,
    winding,
    x,
    y,
)
from boundary_action import act, pull_x_factor
from scalar import (
    ONE,
    ZERO,
    Scalar,
    ScalarFraction,
    ScalarLike,
    as_scalar,
    div_exact,
    frac,
    scalar_gcd,
    t_pow,
)
from skein_config import DEFAULT_BUDGET, WINDOW_RETRIES, window_for
from skein_errors import (
    DomainError,
    SolverFallbackWarning,
    StepLimitExceeded,
    WindowTooSmall,
)
from torus_algebra import (
    TorusElement,
    mul,
    switch_exponent,
    t_curve,
    wedge,
    word_element,
)

Pair = Tuple[int, int]
GridWord = Tuple[int, int]
Coords = Dict[GridWord, Scalar]


# ─────────────────────────────────────────────────────────────────────────────
# Gluing data
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class GluingMatrix:
    """The matrix (a p; b q) with aq - bp = -1, p >= 1 and |a| <= p//2."""
    a: int
    b: int
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1:
            raise DomainError(f"lens space needs p >= 1, got p={self.p}")
        if gcd(self.p, self.q) != 1:
            raise DomainError(f"gcd(p, q) must be 1, got gcd({self.p}, {self.q}) = {gcd(self.p, self.q)}")
        if self.a * self.q - self.b * self.p != -1:
            raise DomainError(f"matrix ({self.a} {self.p}; {self.b} {self.q}) does not have determinant -1")
        if abs(self.a) > self.p // 2:
            raise DomainError(f"a={self.a} is not normalized to |a| <= {self.p // 2}")

    @property
    def h(self) -> int:
        """Half-width p//2 of the spanning grid."""
        return self.p // 2

    def apply(self, u: int, v: int) -> Pair:
        """Image of the index pair (u, v) under the matrix."""
        return (self.a * u + self.p * v, self.b * u + self.q * v)

    def label(self) -> str:
        return f"L({self.p},{self.q})"


def gluing_for(p: int, q: int) -> GluingMatrix:
    """
    Gluing matrix for L(p, q) with a normalized to (-p/2, p/2].

    Examples:
        gluing_for(2, 1) == GluingMatrix(a=1, b=1, p=2, q=1)
        gluing_for(1, 0) == GluingMatrix(a=0, b=1, p=1, q=0)
    """
    if p < 1:
        raise DomainError(f"lens space needs p >= 1, got p={p}")
    if gcd(p, q) != 1:
        raise DomainError(f"gcd(p, q) must be 1, got gcd({p}, {q}) = {gcd(p, q)}")
    if p == 1:
        a = 0
    else:
        a = (-pow(q, -1, p)) % p
        if 2 * a > p:
            a -= p
    b = (a * q + 1) // p
    return GluingMatrix(a, b, p, q)


def abs_min_remainder(value: int, p: int) -> Tuple[int, int]:
    """
    Absolute-minimal remainder of value modulo p.

    Returns:
        (s0, w) with w = value + p*s0, |w| <= p//2 and s0 the lowest integer
        achieving the minimum of |value + p*s|

    Examples:
        abs_min_remainder(7, 4) == (-2, -1)
        abs_min_remainder(1, 2) == (-1, -1)
    """
    if p < 1:
        raise DomainError(f"modulus must be >= 1, got {p}")
    r = value % p
    w = r if 2 * r < p else r - p
    return (w - value) // p, w


def solve_ma_kp(n: int, G: GluingMatrix) -> Tuple[int, int]:
    """
    Write n = m*a + k*p with m the absolute-minimal residue of n/a mod p.

    Ties at +-p/2 go to the positive representative; p = 1 gives (0, n).
    """
    if G.p == 1:
        return 0, n
    m = (n * pow(G.a, -1, G.p)) % G.p
    if 2 * m > G.p:
        m -= G.p
    return m, (n - m * G.a) // G.p


# ─────────────────────────────────────────────────────────────────────────────
# Lens elements and coordinates
# ─────────────────────────────────────────────────────────────────────────────

def _element_key(u: AnnulusElement) -> tuple:
    return tuple(sorted((w, tuple(c.items())) for w, c in u.items()))


class LensElement:
    """
    A formal sum of tensors left (x) right of solid-torus elements.

    Coefficients are folded into the left factor and terms with equal right
    factors are merged, so ``terms`` holds (left, right, 1) triples in a
    deterministic order.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Tuple[AnnulusElement, AnnulusElement, ScalarLike]] = ()):
        merged: Dict[AnnulusElement, AnnulusElement] = {}
        for left, right, coeff in terms:
            left = left.scale(as_scalar(coeff))
            if left.is_zero() or right.is_zero():
                continue
            merged[right] = merged[right] + left if right in merged else left
        kept = [(left, right, ONE) for right, left in merged.items() if not left.is_zero()]
        kept.sort(key=lambda t: (_element_key(t[1]), _element_key(t[0])))
        self.terms: Tuple[Tuple[AnnulusElement, AnnulusElement, Scalar], ...] = tuple(kept)

    @classmethod
    def from_left(cls, u: AnnulusElement) -> "LensElement":
        """The element u (x) 1."""
        return cls([(u, identity(), ONE)])

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c: ScalarLike) -> "LensElement":
        return LensElement((left, right, as_scalar(c)) for left, right, _ in self.terms)

    def __add__(self, other: "LensElement") -> "LensElement":
        return LensElement(list(self.terms) + list(other.terms))

    def __neg__(self) -> "LensElement":
        return self.scale(-1)

    def __sub__(self, other: "LensElement") -> "LensElement":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LensElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        return f"LensElement({len(self.terms)} terms)"


def grid_words(G: GluingMatrix) -> List[GridWord]:
    """All grid labels (n, m), 0 <= n <= p//2 and |m| <= p//2, in sorted order."""
    h = G.h
    return [(n, m) for n in range(h + 1) for m in range(-h, h + 1)]


def grid_size(G: GluingMatrix) -> int:
    return (G.h + 1) * (2 * G.h + 1)


def in_grid(word: GridWord, G: GluingMatrix) -> bool:
    n, m = word
    return 0 <= n <= G.h and abs(m) <= G.h


@dataclass
class SpanningCoordinates:
    """Coordinates on the spanning grid of L(p, q)."""
    p: int
    grid: Dict[GridWord, ScalarFraction] = field(default_factory=dict)

    def __post_init__(self):
        h = self.p // 2
        clean: Dict[GridWord, ScalarFraction] = {}
        for (n, m), c in self.grid.items():
            c = ScalarFraction.of(c)
            if c.is_zero():
                continue
            if not (0 <= n <= h and abs(m) <= h):
                raise DomainError(f"coordinate ({n},{m}) lies outside the grid for p={self.p}")
            clean[(n, m)] = c
        self.grid = clean

    @classmethod
    def from_scalars(cls, p: int, coords: Dict[GridWord, Scalar]) -> "SpanningCoordinates":
        return cls(p, {w: ScalarFraction.of(c) for w, c in coords.items()})

    def items(self) -> List[Tuple[GridWord, ScalarFraction]]:
        return sorted(self.grid.items())

    def coefficient(self, word: GridWord) -> ScalarFraction:
        return self.grid.get(word, ScalarFraction.of(0))

    def support(self) -> List[GridWord]:
        return sorted(self.grid)

    def to_lens(self) -> LensElement:
        """Back to a lens element (requires polynomial coefficients)."""
        u = AnnulusElement({AnnulusWord(n, m): c.to_scalar() for (n, m), c in self.grid.items()})
        return LensElement.from_left(u)


@dataclass
class ReductionResult:
    """Outcome of reduce_with_fallback: coordinates, producing path and counters."""
    coords: SpanningCoordinates
    path: str
    stats: Dict[str, int] = field(default_factory=dict)

    @property
    def used_solver(self) -> bool:
        return self.path == "solver"


# ─────────────────────────────────────────────────────────────────────────────
# Balancing
# ─────────────────────────────────────────────────────────────────────────────

def f_push(A: TorusElement, G: GluingMatrix) -> TorusElement:
    """
    The gluing antihomomorphism: (m,n)_T W(r,s) -> W(M(r,s)) * (M(m,n))_T.

    Examples:
        f_push(t_curve(1, 0), gluing_for(2, 1)) == t_curve(1, 1)
    """
    total = TorusElement()
    for word, c in A.items():
        image = wedge(*G.apply(*word.wpart))
        if word.tpart is not None:
            image = mul(image, t_curve(*G.apply(*word.tpart)))
        total = total + image.scale(c)
    return total


def right_to_left_action(A: TorusElement, v: AnnulusElement, G: GluingMatrix) -> AnnulusElement:
    """f(A) . v, the action of A seen from the left solid torus."""
    return act(f_push(A, G), v)


def _push_right(left: AnnulusElement, right: AnnulusElement, G: GluingMatrix) -> AnnulusElement:
    if right == identity():
        return left
    out = AnnulusElement()
    for (k, l), c in to_tform(right).items():
        lift = word_element((k, 0), (l, 0))
        out = out + right_to_left_action(lift, left, G).scale(c)
    return out


def balanced_left(e: LensElement, G: GluingMatrix) -> AnnulusElement:
    """The single left factor u with e = u (x) 1."""
    total = AnnulusElement()
    for left, right, coeff in e.terms:
        total = total + _push_right(left, right, G).scale(coeff)
    return total


def balance(e: LensElement, G: GluingMatrix) -> LensElement:
    """
    Move every right factor to the left; all right factors become 1.

    The lift is fixed: a right factor is written in T-form,
    sum c_{k,l} (k)_T W(l), each term is lifted to (k,0)_T W(l,0) on the
    torus, pushed through f_push and applied to the left factor. Another
    lift, such as reading x(m,n) on the right as x(M(m,n)) on the left,
    gives a different tensor that differs only by balancing relations, so
    both reduce to the same grid coordinates.

    Examples:
        balance(1 (x) x(1,1), gluing_for(1, 0)) == (t^2 + 1) (x) 1
    """
    return LensElement.from_left(balanced_left(e, G))


def lens_winding_class(e: LensElement, G: GluingMatrix) -> Set[int]:
    """Residues (w_left + a*w_right) mod p over all word pairs of e."""
    classes: Set[int] = set()
    for left, right, _ in e.terms:
        for wl in left.words():
            for wr in right.words():
                classes.add((winding(wl) + G.a * winding(wr)) % G.p)
    return classes


# ─────────────────────────────────────────────────────────────────────────────
# Elementary moves
# ─────────────────────────────────────────────────────────────────────────────

def wedge_period(kl: Pair, G: GluingMatrix, direction: str = "down") -> Tuple[Pair, Scalar]:
    """
    One step of (k) W(l+p) (x) 1 = t^{2q(p+k+2l)} (k) W(l) (x) 1.

    Args:
        kl: (k, l) with l the current wedge exponent
        direction: "down" lowers the exponent by p, "up" raises it (exact inverse)

    Returns:
        (new (k, l), scalar factor)

    The factor depends only on the winding, so the step is valid for T-form
    and canonical words alike.
    """
    k, l = kl
    if direction == "down":
        return (k, l - G.p), t_pow(2 * G.q * (G.p + k + 2 * (l - G.p)))
    if direction == "up":
        return (k, l + G.p), t_pow(-2 * G.q * (G.p + k + 2 * l))
    raise DomainError(f"direction must be 'down' or 'up', got {direction!r}")


def strip_ab(kind: str, j: int, G: GluingMatrix) -> Tuple[Pair, Scalar]:
    """
    Strip j multiples of (p,q) from the index (a+jp, b+jq):

    - kind "T": (a+jp, b+jq)_T . u (x) 1 = t^j (a,b)_T . u (x) 1
    - kind "W": W(a+jp, b+jq) . u (x) 1 = t^{-2j} W(a,b) . u (x) 1
    """
    if kind == "T":
        return (G.a, G.b), t_pow(j)
    if kind == "W":
        return (G.a, G.b), t_pow(-2 * j)
    raise DomainError(f"strip kind must be 'T' or 'W', got {kind!r}")


def unstrip_ab(kind: str, j: int, G: GluingMatrix) -> Tuple[Pair, Scalar]:
    """Inverse of strip_ab: back to index (a+jp, b+jq)."""
    _, factor = strip_ab(kind, j, G)
    return G.apply(1, j), div_exact(ONE, factor)


# ─────────────────────────────────────────────────────────────────────────────
# Curve relations
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CoreRelation:
    """
    The balanced relation f((mu,nu)_T) . u (x) 1 = u (x) x(mu,nu) at u = (j).

    ``lhs`` and ``rhs`` are the two sides at wedge exponent 0. Shifting u by
    W(l) multiplies the sides by t^{lhs_shift*l} and t^{rhs_shift*l} and
    shifts every word by l. ``top`` is the unique word of highest core in
    lhs - rhs; its coefficient is a unit.
    """
    mu: int
    nu: int
    j: int
    lhs: AnnulusElement
    rhs: AnnulusElement
    lhs_shift: int
    rhs_shift: int
    top: AnnulusWord

    def instantiate(self, l: int) -> AnnulusElement:
        """lhs - rhs for u = (j) W(l)."""
        diff = self.lhs.scale(t_pow(self.lhs_shift * l)) - self.rhs.scale(t_pow(self.rhs_shift * l))
        return shift_wedge(diff, l)


def _curve_relation_sides(G: GluingMatrix, mu: int, nu: int, j: int) -> Tuple[AnnulusElement, AnnulusElement]:
    u = from_word(j, 0)
    lhs = act(t_curve(*G.apply(mu, nu)), u)
    rhs = _push_right(u, x(mu, nu), G)
    return lhs, rhs


@lru_cache(maxsize=None)
def _relation_for(G: GluingMatrix, mu: int, nu: int, j: int) -> Optional[CoreRelation]:
    lhs, rhs = _curve_relation_sides(G, mu, nu, j)
    diff = lhs - rhs
    if diff.is_zero():
        return None
    top_core = max(w.n for w in diff.words())
    tops = [w for w in diff.words() if w.n == top_core]
    if len(tops) != 1 or not diff.coefficient(tops[0]).is_monomial():
        return None
    return CoreRelation(
        mu=mu,
        nu=nu,
        j=j,
        lhs=lhs,
        rhs=rhs,
        lhs_shift=-2 * (G.b * mu + G.q * nu),
        rhs_shift=-2 * G.b * mu,
        top=tops[0],
    )


def _relation_candidates(G: GluingMatrix, N: int) -> List[Tuple[int, int, int]]:
    """(mu, nu, s) with distinct side cores and top core s <= N, cheapest first."""
    out = []
    for mu in range(-G.p, G.p + 1):
        for nu in (1, -1, 2, -2):
            left_core = abs(G.a * mu + G.p * nu)
            right_core = abs(G.a * mu)
            if left_core == right_core:
                continue
            s = max(left_core, right_core)
            if 0 < s <= N:
                out.append((mu, nu, s))
    out.sort(key=lambda c: (abs(c[0]), -c[2], abs(c[1]), -c[1], c[0]))
    return out


@lru_cache(maxsize=None)
def core_relation(N: int, G: GluingMatrix) -> CoreRelation:
    """
    A curve relation whose unique highest word has core N.

    Used to eliminate a word of core N > p//2 when isolating it through an
    x-expansion would lead back to the same target.

    Raises:
        StepLimitExceeded: no relation from the search family reaches core N
    """
    for mu, nu, s in _relation_candidates(G, N):
        rel = _relation_for(G, mu, nu, N - s)
        if rel is not None and rel.top.n == N:
            return rel
    raise StepLimitExceeded(f"no highest-core relation for core {N} in {G.label()}")


# ─────────────────────────────────────────────────────────────────────────────
# Recursive reducer
# ─────────────────────────────────────────────────────────────────────────────

_PSI_MEMO: Dict[GluingMatrix, Dict[Tuple[int, int, int, int], Coords]] = {}
_PSI_LOCK = threading.Lock()


def _accumulate(target: Dict, source: Dict, coeff: Scalar = ONE) -> None:
    for w, v in source.items():
        nv = target.get(w, ZERO) + v * coeff
        if nv.is_zero():
            target.pop(w, None)
        else:
            target[w] = nv


def _scaled(coords: Coords, coeff: Scalar) -> Coords:
    return {w: v * coeff for w, v in coords.items() if not (v * coeff).is_zero()}


class LensReducer:
    """
    Recursive reduction to the spanning grid for one gluing matrix.

    Every elementary move counts against ``budget``; exhausting it (or
    revisiting a target that is still being computed) raises
    StepLimitExceeded. Completed sub-targets x(am+kp, bm+kq)*y(ar+ps, br+qs)
    are memoized per matrix and shared between reducers.
    """

    def __init__(self, G: GluingMatrix, budget: int = DEFAULT_BUDGET):
        self.G = G
        self.budget = budget
        self.moves = 0
        self._active: Set[Tuple[int, int, int, int]] = set()
        with _PSI_LOCK:
            self._memo = _PSI_MEMO.setdefault(G, {})

    def _tick(self, n: int = 1) -> None:
        self.moves += n
        if self.moves > self.budget:
            raise StepLimitExceeded(
                f"step budget of {self.budget} moves exhausted in {self.G.label()}"
            )

    # ── entry points ────────────────────────────────────────────────────────

    def reduce(self, e: LensElement) -> SpanningCoordinates:
        coords = self.reduce_annulus(balanced_left(e, self.G))
        return SpanningCoordinates.from_scalars(self.G.p, coords)

    def reduce_annulus(self, u: AnnulusElement) -> Coords:
        """Coordinates of u (x) 1, highest core first."""
        h = self.G.h
        pending: Dict[AnnulusWord, Scalar] = dict(u.items())
        coords: Coords = {}
        while pending:
            word = max(pending, key=lambda w: (w.n, w.r))
            c = pending.pop(word)
            self._tick()
            if word.n <= h:
                target, factor = self.fold(word)
                _accumulate(coords, {target: factor}, c)
            elif self._isolation_terminates(word.n):
                sub, lower = self._isolate(word, c)
                _accumulate(coords, sub)
                _accumulate(pending, dict(lower.items()))
            else:
                _accumulate(pending, dict(self._eliminate(word, c).items()))
        return coords

    def reduce_xy(self, m: int, k: int, r: int, s: int) -> Coords:
        """Coordinates of x(am+kp, bm+kq) * y(ar+ps, br+qs) (x) 1."""
        G = self.G
        y1 = G.a * r + G.p * s
        x2 = G.b * m + G.q * k
        return _scaled(self.psi(m, k, r, s), pull_x_factor(y1, x2))

    # ── folding and isolation ───────────────────────────────────────────────

    def fold(self, word: AnnulusWord) -> Tuple[GridWord, Scalar]:
        """Bring the wedge exponent into [-p//2, p//2] by wedge_period steps."""
        n, l = word
        h = self.G.h
        if abs(l) <= h:
            return (n, l), ONE
        s0, w = abs_min_remainder(l, self.G.p)
        if l > h and w == -h and 2 * h == self.G.p:
            # descending stops at the first exponent <= p/2, i.e. at +p/2
            s0 += 1
        direction = "down" if s0 < 0 else "up"
        factor = ONE
        kl = (n, l)
        for _ in range(abs(s0)):
            self._tick()
            kl, step = wedge_period(kl, self.G, direction)
            factor = factor * step
        return kl, factor

    def _isolation_terminates(self, n1: int) -> bool:
        # For 2 <= m and n1 <= p the induction would reuse the same target.
        m, _ = solve_ma_kp(n1, self.G)
        return not (m >= 2 and n1 <= self.G.p)

    def _isolate(self, word: AnnulusWord, c: Scalar) -> Tuple[Coords, AnnulusElement]:
        """c*(n1)W(n2) = ratio*t^{2 n2 S} x(n1,nu)*y(n2,S) - lower terms."""
        G = self.G
        n1, n2 = word
        m, k = solve_ma_kp(n1, G)
        nu = G.b * m + G.q * k
        xv = x(n1, nu)
        lead = xv.coefficient(AnnulusWord(n1, 0))
        ratio = div_exact(c, lead)
        lower = shift_wedge(xv - from_word(n1, 0, lead), n2).scale(-ratio)
        r, s = solve_ma_kp(n2, G)
        big_s = G.b * r + G.q * s
        sub = _scaled(self.reduce_xy(m, k, r, s), ratio * t_pow(2 * n2 * big_s))
        return sub, lower

    def _eliminate(self, word: AnnulusWord, c: Scalar) -> AnnulusElement:
        """Replace c*word by the lower side of a highest-core relation."""
        self._tick()
        rel = core_relation(word.n, self.G)
        inst = rel.instantiate(word.r - rel.top.r)
        top = inst.coefficient(word)
        ratio = div_exact(c, top)
        return (inst - from_word(word.n, word.r, top)).scale(-ratio)

    # ── the two-sided grid ──────────────────────────────────────────────────

    def psi(self, m: int, k: int, r: int, s: int) -> Coords:
        """Coordinates of (am+kp, bm+kq)_T . y(ar+ps, br+qs) (x) 1."""
        key = (m, k, r, s)
        with _PSI_LOCK:
            cached = self._memo.get(key)
        if cached is not None:
            return cached
        if key in self._active:
            raise StepLimitExceeded(f"reduction cycle at target {key} in {self.G.label()}")
        self._active.add(key)
        try:
            result = self._psi(m, k, r, s)
        finally:
            self._active.discard(key)
        with _PSI_LOCK:
            self._memo[key] = result
        return result

    def _wedge_move(self, w: Pair, Y: Pair) -> Scalar:
        """c with W(w) . y(Y) = c * y(Y + w)."""
        moved = act(wedge(*w), y(*Y))
        target_word = AnnulusWord(0, Y[0] + w[0])
        target = y(Y[0] + w[0], Y[1] + w[1])
        return div_exact(moved.coefficient(target_word), target.coefficient(target_word))

    def _psi(self, m: int, k: int, r: int, s: int) -> Coords:
        G = self.G
        a, b, p, q = G.a, G.b, G.p, G.q
        Y = G.apply(r, s)
        self._tick()

        if m == 0:
            # (kp,kq)_T is the image of (0,k)_T, which balances to t^k + t^-k
            unknots = x(0, k).coefficient(IDENTITY_WORD)
            return _scaled(self.reduce_annulus(y(*Y)), unknots)

        if m == 1:
            (ta, tb), factor = strip_ab("T", k, G)
            return _scaled(self.reduce_annulus(act(t_curve(ta, tb), y(*Y))), factor)

        X = G.apply(m, k)
        if m < 0:
            # (X)_T = (-X)_T * W(X)
            c = self._wedge_move(X, Y)
            return _scaled(self.psi(-m, -k, r + m, s + k), c)

        k0 = -((a * m - 1) // p)
        if k == k0:
            return self.reduce_annulus(act(t_curve(*X), y(*Y)))

        # X = Xs + Yt with Xs = (a,b) + d(p,q); product-to-sum in both orders
        d = k - k0
        Z = G.apply(m - 2, k0)
        Zp = G.apply(m - 2, 2 * k0 - k)
        cw = self._wedge_move((a, b), Y)
        _, t_strip = strip_ab("T", d, G)
        _, w_strip = strip_ab("W", d, G)

        result: Coords = {}
        _accumulate(result, self.psi(m, k0, r, s), t_strip)
        _accumulate(
            result,
            self.psi(m - 2, k0, r + 1, s),
            t_strip * t_pow(-switch_exponent(Z, (a, b))) * cw,
        )
        _accumulate(
            result,
            self.psi(m - 2, 2 * k0 - k, r + 1, s),
            -(w_strip * t_pow(-switch_exponent(Zp, (a, b))) * cw),
        )
        return result


def reduce(e: LensElement, G: GluingMatrix, budget: int = DEFAULT_BUDGET) -> SpanningCoordinates:
    """
    Recursive reduction of e to grid coordinates.

    Raises:
        StepLimitExceeded: budget exhausted or a target revisited
    """
    return LensReducer(G, budget).reduce(e)


def reduce_xy(m: int, k: int, r: int, s: int, G: GluingMatrix, budget: int = DEFAULT_BUDGET) -> SpanningCoordinates:
    """Grid coordinates of x(am+kp, bm+kq) * y(ar+ps, br+qs) (x) 1."""
    reducer = LensReducer(G, budget)
    return SpanningCoordinates.from_scalars(G.p, reducer.reduce_xy(m, k, r, s))


def base_case_scalar(k: int, r: int, s: int, G: GluingMatrix) -> Scalar:
    """The scalar of reduce_xy at m = 0 before the y-index is folded."""
    unknots = x(0, k).coefficient(IDENTITY_WORD)
    return pull_x_factor(G.a * r + G.p * s, G.q * k) * unknots


# ─────────────────────────────────────────────────────────────────────────────
# Window solver
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Window:
    """Bounds 0 <= n <= core and |m| <= wedge on the words a solver may use."""
    core: int
    wedge: int

    @classmethod
    def empty(cls) -> "Window":
        return cls(-1, -1)

    @classmethod
    def covering(cls, p: int, words: Iterable[GridWord], bound: Optional[int] = None) -> "Window":
        base = window_for(p, bound)
        core = base
        wedge_bound = base
        for n, m in words:
            core = max(core, n)
            wedge_bound = max(wedge_bound, abs(m))
        return cls(core, wedge_bound)

    def is_empty(self) -> bool:
        return self.core < 0 or self.wedge < 0

    def contains(self, word: GridWord) -> bool:
        n, m = word
        return 0 <= n <= self.core and abs(m) <= self.wedge

    def words(self) -> List[GridWord]:
        if self.is_empty():
            return []
        return [(n, m) for n in range(self.core + 1) for m in range(-self.wedge, self.wedge + 1)]

    def doubled(self) -> "Window":
        return Window(max(1, 2 * self.core), max(1, 2 * self.wedge))


@dataclass(frozen=True)
class Relation:
    """A linear relation sum(coeff * word (x) 1) = 0 among canonical words."""
    origin: str
    terms: Tuple[Tuple[GridWord, ScalarFraction], ...]

    def as_dict(self) -> Dict[GridWord, ScalarFraction]:
        return dict(self.terms)


def _relation_from(origin: str, u: AnnulusElement) -> Relation:
    return Relation(origin, tuple(sorted(((w.n, w.r), frac(c)) for w, c in u.items())))


def relation_pairs(G: GluingMatrix) -> List[Pair]:
    """Curve indices (mu, nu) whose balanced relations the solver uses."""
    pairs = [(0, 1)]
    for N in range(G.h + 1, G.p + 1):
        try:
            rel = core_relation(N, G)
        except StepLimitExceeded:
            continue
        if (rel.mu, rel.nu) not in pairs:
            pairs.append((rel.mu, rel.nu))
    return pairs


def relation_set(G: GluingMatrix, window: Window) -> List[Relation]:
    """
    Balanced relations instantiated on every word (j) W(l) of the window.

    Includes the wedge period (the W-analogue of the (0,1) relation) and the
    curve relations of relation_pairs; a relation is kept only when all of
    its words lie inside the window.
    """
    if window.is_empty():
        return []
    relations: List[Relation] = []
    pairs = relation_pairs(G)
    for j, l in window.words():
        hi = (j, l + G.p)
        if window.contains(hi):
            relations.append(Relation(
                "wedge",
                ((hi, frac(t_pow(-2 * G.q * (G.p + j + 2 * l)))), ((j, l), frac(-1))),
            ))
        for mu, nu in pairs:
            base = _relation_base(G, mu, nu, j)
            if base is None:
                continue
            inst = base.instantiate(l)
            if inst.is_zero():
                continue
            if all(window.contains((w.n, w.r)) for w in inst.words()):
                relations.append(_relation_from(f"curve({mu},{nu})", inst))
    return relations


@lru_cache(maxsize=None)
def _relation_base(G: GluingMatrix, mu: int, nu: int, j: int) -> Optional[CoreRelation]:
    lhs, rhs = _curve_relation_sides(G, mu, nu, j)
    if (lhs - rhs).is_zero():
        return None
    top = max((lhs - rhs).words(), key=lambda w: (w.n, w.r))
    return CoreRelation(mu, nu, j, lhs, rhs, -2 * (G.b * mu + G.q * nu), -2 * G.b * mu, top)


def _column_key(word: GridWord, G: GluingMatrix) -> tuple:
    n, m = word
    if in_grid(word, G):
        return (1, n, m)
    return (0, -n, -abs(m), -m)


class _Echelon:
    """
    Incrementally row-reduced relations keyed by leading (non-grid) column.

    Rows stay in the Laurent ring. A pivot whose lead is a monomial is scaled
    to lead 1; any other pivot keeps its lead and is cleared of common
    content, and rows are cross-multiplied against it. Every row is a scalar
    multiple of the one fraction-field elimination would produce, so the
    pivot columns and the reduced coordinates are the same.
    """

    def __init__(self, G: GluingMatrix):
        self.G = G
        self.pivots: Dict[GridWord, Dict[GridWord, Scalar]] = {}

    def _lead(self, words: Iterable[GridWord]) -> GridWord:
        return min(words, key=lambda w: _column_key(w, self.G))

    @staticmethod
    def _eliminate(row: Dict[GridWord, Scalar], lead: GridWord, pivot: Dict[GridWord, Scalar]) -> Scalar:
        """Clear column ``lead`` of row in place; returns the factor row was scaled by."""
        factor = row[lead]
        scale = pivot[lead]
        if scale != ONE:
            g = scalar_gcd(scale, factor)
            if g != ONE:
                scale, factor = div_exact(scale, g), div_exact(factor, g)
            for w in row:
                row[w] = row[w] * scale
        for w, c in pivot.items():
            nv = row.get(w, ZERO) - factor * c
            if nv.is_zero():
                row.pop(w, None)
            else:
                row[w] = nv
        return scale

    @staticmethod
    def _primitive(row: Dict[GridWord, Scalar], lead: GridWord) -> Dict[GridWord, Scalar]:
        head = row[lead]
        if not head.is_monomial():
            content = head
            for c in row.values():
                content = scalar_gcd(content, c)
                if content == ONE:
                    break
            head = content
        if head == ONE:
            return row
        return {w: div_exact(c, head) for w, c in row.items()}

    def insert(self, relation: Relation) -> None:
        row = {w: c.to_scalar() for w, c in relation.as_dict().items() if not c.is_zero()}
        while row:
            lead = self._lead(row)
            if in_grid(lead, self.G):
                return
            pivot = self.pivots.get(lead)
            if pivot is None:
                self.pivots[lead] = self._primitive(row, lead)
                return
            self._eliminate(row, lead, pivot)

    def reduce(self, vector: Dict[GridWord, Scalar]) -> Dict[GridWord, ScalarFraction]:
        v = {w: c for w, c in vector.items() if not c.is_zero()}
        denominator = ONE
        while True:
            outside = [w for w in v if not in_grid(w, self.G)]
            if not outside:
                return {w: frac(c, denominator) for w, c in v.items()}
            lead = self._lead(outside)
            pivot = self.pivots.get(lead)
            if pivot is None:
                raise WindowTooSmall(f"no relation in the window eliminates word {lead}", word=lead)
            denominator = denominator * self._eliminate(v, lead, pivot)


@lru_cache(maxsize=32)
def _echelon_for(G: GluingMatrix, window: Window) -> _Echelon:
    relations = relation_set(G, window)
    wedge_rows = [rel for rel in relations if rel.origin == "wedge"]
    curve_rows = [rel for rel in relations if rel.origin != "wedge"]
    echelon = _Echelon(G)
    for group in (wedge_rows, curve_rows):
        for rel in sorted(group, key=lambda rel: _column_key(min((w for w, _ in rel.terms), key=lambda w: _column_key(w, G)), G)):
            echelon.insert(rel)
    return echelon


def reduce_solver(e: LensElement, G: GluingMatrix, window: Window) -> SpanningCoordinates:
    """
    Grid coordinates by Gaussian elimination of relation_set.

    Elimination runs in the Laurent ring; fractions appear only in the
    returned coordinates, one per grid word.

    Raises:
        WindowTooSmall: an input word lies outside the window, or some
            non-grid word has no pivot inside it
    """
    u = balanced_left(e, G)
    for w in u.words():
        if not window.contains((w.n, w.r)):
            raise WindowTooSmall(f"input word {(w.n, w.r)} lies outside the window", word=(w.n, w.r))

    reduced = _echelon_for(G, window).reduce({(w.n, w.r): c for w, c in u.items()})
    return SpanningCoordinates(G.p, reduced)


def reduce_with_fallback(
    e: LensElement,
    G: GluingMatrix,
    budget: int = DEFAULT_BUDGET,
    window: Optional[int] = None,
    retries: int = WINDOW_RETRIES,
) -> ReductionResult:
    """
    Recursive reduction, falling back to the window solver on StepLimitExceeded.

    The fallback emits SolverFallbackWarning. The solver window starts at
    ``window`` (default 4p, enlarged to cover the input) and doubles up to
    ``retries`` times.

    Raises:
        StepLimitExceeded: both paths failed
    """
    reducer = LensReducer(G, budget)
    try:
        coords = reducer.reduce(e)
        return ReductionResult(coords, "recursive", {"moves": reducer.moves, "window": 0, "retries": 0})
    except StepLimitExceeded as exc:
        warnings.warn(
            f"recursive reduction in {G.label()} gave up ({exc}); using the window solver",
            SolverFallbackWarning,
            stacklevel=2,
        )

    u = balanced_left(e, G)
    win = Window.covering(G.p, ((w.n, w.r) for w in u.words()), window)
    last: Optional[WindowTooSmall] = None
    for attempt in range(retries + 1):
        try:
            coords = reduce_solver(e, G, win)
            return ReductionResult(
                coords,
                "solver",
                {"moves": reducer.moves, "window": win.core, "retries": attempt},
            )
        except WindowTooSmall as exc:
            last = exc
            win = win.doubled()
    raise StepLimitExceeded(f"window solver failed in {G.label()} after {retries} enlargements: {last}")
