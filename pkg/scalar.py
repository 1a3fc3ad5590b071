"""
scalar.py

Exact coefficient arithmetic for skein computations.

Scalars are Laurent polynomials in the quantum parameter t with rational
coefficients. A second layer, ScalarFraction, holds reduced quotients of
Scalars and is only needed by the window solver's Gaussian elimination.

This module provides:
- Scalar: immutable Laurent polynomial, canonical (no zero coefficients)
- ScalarFraction: reduced quotient with a normalized denominator
- t_pow / add / mul / neg / div_exact / scalar_gcd on Scalars
- frac / frac_add / frac_sub / frac_mul / frac_inv / frac_neg on fractions
- format_scalar / format_fraction: the canonical text form used by the CLI and cache
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

import sympy as sp

from skein_errors import DivisionByZero, NotExactDivision

Coefficient = Union[int, Fraction]
ScalarLike = Union["Scalar", int, Fraction]

_T = sp.Symbol("t")


def _coerce(c: Coefficient) -> Coefficient:
    """Store integral rationals as int so that equal scalars hash and print alike."""
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class Scalar:
    """
    A Laurent polynomial in t with exact rational coefficients.

    The term map is exponent -> nonzero coefficient. Instances are treated as
    immutable values; every operation returns a new Scalar.

    Examples:
        >>> t_pow(1) + t_pow(-1)
        Scalar(t + t^-1)
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, Coefficient]] = None):
        clean: Dict[int, Coefficient] = {}
        if terms:
            for exp, c in terms.items():
                c = _coerce(c)
                if c != 0:
                    clean[int(exp)] = c
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _from_clean(cls, terms: Dict[int, Coefficient]) -> "Scalar":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: Coefficient) -> "Scalar":
        return cls({0: c})

    # ── access ──────────────────────────────────────────────────────────────

    def items(self) -> Iterator[Tuple[int, Coefficient]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, exp: int) -> Coefficient:
        return self._terms.get(exp, 0)

    @property
    def terms(self) -> Dict[int, Coefficient]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def degree_range(self) -> Tuple[int, int]:
        """Return (lowest, highest) exponent; raises ValueError on zero."""
        if not self._terms:
            raise ValueError("zero scalar has no degree range")
        return min(self._terms), max(self._terms)

    def leading(self) -> Tuple[int, Coefficient]:
        """Return (exponent, coefficient) of the highest-exponent term."""
        exp = max(self._terms)
        return exp, self._terms[exp]

    def at_one(self) -> Fraction:
        """Evaluate at t = 1 (sum of coefficients)."""
        return Fraction(sum(self._terms.values()))

    def bar(self) -> "Scalar":
        """The involution t -> t^-1."""
        return Scalar._from_clean({-e: c for e, c in self._terms.items()})

    def shift(self, k: int) -> "Scalar":
        """Multiply by t^k."""
        if k == 0:
            return self
        return Scalar._from_clean({e + k: c for e, c in self._terms.items()})

    # ── arithmetic ──────────────────────────────────────────────────────────

    def __add__(self, other: ScalarLike) -> "Scalar":
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = _coerce(v)
        return Scalar._from_clean(out)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._from_clean({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: ScalarLike) -> "Scalar":
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: Dict[int, Coefficient] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return Scalar(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            if not self.is_monomial():
                raise NotExactDivision(f"cannot invert non-monomial scalar {self}")
            return div_exact(ONE, self) ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.constant(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)})"

    def __str__(self) -> str:
        return format_scalar(self)


def as_scalar(value) -> "Scalar":
    """Promote int/Fraction to Scalar; return NotImplemented for anything else."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, bool):
        return NotImplemented
    if isinstance(value, (int, Fraction)):
        return Scalar.constant(value)
    return NotImplemented


ZERO = Scalar()
ONE = Scalar({0: 1})


# ─────────────────────────────────────────────────────────────────────────────
# Laurent ring operations
# ─────────────────────────────────────────────────────────────────────────────

def t_pow(k: int) -> Scalar:
    """The monomial t^k."""
    return Scalar._from_clean({int(k): 1})


def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def neg(a: Scalar) -> Scalar:
    return -a


def _to_rational(c: Coefficient) -> sp.Rational:
    c = Fraction(c)
    return sp.Rational(c.numerator, c.denominator)


def _to_poly(s: Scalar) -> Tuple[int, sp.Poly]:
    """Split s = t^low * P(t) with P(0) != 0."""
    low = min(s._terms)
    rep = {(e - low,): _to_rational(c) for e, c in s._terms.items()}
    return low, sp.Poly.from_dict(rep, _T, domain=sp.QQ)


def _from_poly(poly: sp.Poly, shift: int = 0) -> Scalar:
    out: Dict[int, Coefficient] = {}
    for (e,), c in poly.terms():
        c = sp.Rational(c)
        out[int(e) + shift] = Fraction(int(c.p), int(c.q))
    return Scalar(out)


def div_exact(a: Scalar, b: Scalar) -> Scalar:
    """
    Exact division in the Laurent ring.

    Args:
        a: dividend
        b: nonzero divisor

    Returns:
        q with q * b == a

    Raises:
        DivisionByZero: b is zero
        NotExactDivision: b does not divide a in Q[t, t^-1]
    """
    if b.is_zero():
        raise DivisionByZero("division by the zero scalar")
    if a.is_zero():
        return ZERO
    if b.is_monomial():
        (e, c), = b._terms.items()
        inv = Fraction(1) / Fraction(c)
        return Scalar({k - e: v * inv for k, v in a._terms.items()})

    # The non-monomial part of b is coprime to t, so Laurent divisibility
    # reduces to polynomial divisibility of the t-free parts.
    low_a, pa = _to_poly(a)
    low_b, pb = _to_poly(b)
    quotient, remainder = pa.div(pb)
    if not remainder.is_zero:
        raise NotExactDivision(f"({format_scalar(a)}) is not divisible by ({format_scalar(b)})")
    return _from_poly(quotient, low_a - low_b)


def scalar_gcd(a: Scalar, b: Scalar) -> Scalar:
    """
    Greatest common divisor in the Laurent ring, up to units.

    The result has lowest exponent 0 and constant coefficient 1; monomials are
    units, so ``scalar_gcd(t^3, x) == 1`` for nonzero x.
    """
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.is_monomial() or b.is_monomial():
        return ONE
    g = _to_poly(a)[1].gcd(_to_poly(b)[1])
    if g.degree() <= 0:
        return ONE
    g = _from_poly(g)
    return g * (1 / Fraction(g.coefficient(0)))


# ─────────────────────────────────────────────────────────────────────────────
# Fraction field
# ─────────────────────────────────────────────────────────────────────────────

def _normalize(num: Scalar, den: Scalar) -> Tuple[Scalar, Scalar]:
    if den.is_zero():
        raise DivisionByZero("fraction with zero denominator")
    if num.is_zero():
        return ZERO, ONE
    if den.is_monomial():
        return div_exact(num, den), ONE

    low_d, pd = _to_poly(den)
    low_n, pn = _to_poly(num)
    g = pn.gcd(pd)
    if g.degree() > 0:
        pn = pn.exquo(g)
        pd = pd.exquo(g)
    num = _from_poly(pn, low_n - low_d)
    den = _from_poly(pd)
    c0 = Fraction(den.coefficient(0))
    if c0 != 1:
        inv = 1 / c0
        num = num * inv
        den = den * inv
    if den == ONE:
        return num, ONE
    return num, den


class ScalarFraction:
    """
    A reduced quotient numerator/denominator of Scalars.

    The denominator has lowest exponent 0 and constant coefficient 1, and shares
    no polynomial factor with the numerator, so equality is a syntactic check.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: ScalarLike, denominator: ScalarLike = 1, _normalized: bool = False):
        num = as_scalar(numerator)
        den = as_scalar(denominator)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("ScalarFraction expects Scalar, int or Fraction parts")
        if not _normalized:
            num, den = _normalize(num, den)
        self.numerator: Scalar = num
        self.denominator: Scalar = den

    @classmethod
    def of(cls, value: Union["ScalarFraction", ScalarLike]) -> "ScalarFraction":
        if isinstance(value, ScalarFraction):
            return value
        return cls(as_scalar(value), ONE, _normalized=True)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        return self.denominator == ONE

    def to_scalar(self) -> Scalar:
        """Return the numerator when the denominator is 1; raise otherwise."""
        if not self.is_polynomial():
            raise NotExactDivision(f"{format_fraction(self)} is not a Laurent polynomial")
        return self.numerator

    def __add__(self, other) -> "ScalarFraction":
        return frac_add(self, ScalarFraction.of(other))

    __radd__ = __add__

    def __sub__(self, other) -> "ScalarFraction":
        return frac_sub(self, ScalarFraction.of(other))

    def __neg__(self) -> "ScalarFraction":
        return frac_neg(self)

    def __mul__(self, other) -> "ScalarFraction":
        return frac_mul(self, ScalarFraction.of(other))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScalarFraction":
        return frac_mul(self, frac_inv(ScalarFraction.of(other)))

    def __bool__(self) -> bool:
        return not self.numerator.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (Scalar, int, Fraction)):
            other = ScalarFraction.of(other)
        if not isinstance(other, ScalarFraction):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __repr__(self) -> str:
        return f"ScalarFraction({format_fraction(self)})"

    def __str__(self) -> str:
        return format_fraction(self)


FRACTION_ZERO = ScalarFraction(ZERO, ONE, _normalized=True)
FRACTION_ONE = ScalarFraction(ONE, ONE, _normalized=True)


def frac(a: ScalarLike, b: ScalarLike = 1) -> ScalarFraction:
    """Build the reduced fraction a / b."""
    return ScalarFraction(a, b)


def frac_add(x: ScalarFraction, y: ScalarFraction) -> ScalarFraction:
    if x.denominator == y.denominator:
        if x.denominator == ONE:
            return ScalarFraction(x.numerator + y.numerator, ONE, _normalized=True)
        return ScalarFraction(x.numerator + y.numerator, x.denominator)
    return ScalarFraction(
        x.numerator * y.denominator + y.numerator * x.denominator,
        x.denominator * y.denominator,
    )


def frac_neg(x: ScalarFraction) -> ScalarFraction:
    return ScalarFraction(-x.numerator, x.denominator, _normalized=True)


def frac_sub(x: ScalarFraction, y: ScalarFraction) -> ScalarFraction:
    return frac_add(x, frac_neg(y))


def frac_mul(x: ScalarFraction, y: ScalarFraction) -> ScalarFraction:
    if x.denominator == ONE and y.denominator == ONE:
        return ScalarFraction(x.numerator * y.numerator, ONE, _normalized=True)
    return ScalarFraction(x.numerator * y.numerator, x.denominator * y.denominator)


def frac_inv(x: ScalarFraction) -> ScalarFraction:
    if x.numerator.is_zero():
        raise DivisionByZero("inverse of the zero fraction")
    return ScalarFraction(x.denominator, x.numerator)


# ─────────────────────────────────────────────────────────────────────────────
# Canonical text form
# ─────────────────────────────────────────────────────────────────────────────

def _monomial_text(exp: int) -> str:
    if exp == 0:
        return ""
    if exp == 1:
        return "t"
    return f"t^{exp}"


def format_monomial(c: Coefficient, exp: int) -> str:
    """Render |c|*t^exp without a sign (e.g. "3/2*t^2", "t^-1", "5")."""
    mag = abs(Fraction(c))
    mono = _monomial_text(exp)
    mag_text = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
    if not mono:
        return mag_text
    if mag == 1:
        return mono
    return f"{mag_text}*{mono}"


def format_scalar(s: Scalar) -> str:
    """
    Canonical text: terms in strictly decreasing exponent order.

    Examples:
        >>> format_scalar(Scalar({2: Fraction(3, 2), 0: 1, -4: -1}))
        '3/2*t^2 + 1 - t^-4'
    """
    if s.is_zero():
        return "0"
    parts = []
    for i, exp in enumerate(sorted(s._terms, reverse=True)):
        c = s._terms[exp]
        body = format_monomial(c, exp)
        if i == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(parts)


def format_fraction(x: ScalarFraction) -> str:
    """Polynomials print as scalars; proper fractions as "(<num>)/(<den>)"."""
    if x.denominator == ONE:
        return format_scalar(x.numerator)
    return f"({format_scalar(x.numerator)})/({format_scalar(x.denominator)})"


# ─────────────────────────────────────────────────────────────────────────────
# Formal linear combinations
# ─────────────────────────────────────────────────────────────────────────────

class Combination:
    """
    Finite linear combination word -> Scalar with canonical (nonzero) coefficients.

    Subclasses fix the word type and provide ``IDENTITY`` plus ``_word_product``
    returning the expansion of a product of two words.
    """

    __slots__ = ("_terms", "_hash")
    IDENTITY: object = None

    def __init__(self, terms: Optional[Mapping] = None):
        clean: Dict = {}
        if terms:
            for word, c in terms.items():
                c = as_scalar(c)
                if not c.is_zero():
                    clean[word] = c
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _from_clean(cls, terms: Dict):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def _word_product(cls, w1, w2) -> Dict:
        raise NotImplementedError

    # ── access ──────────────────────────────────────────────────────────────

    def items(self):
        return self._terms.items()

    def words(self):
        return self._terms.keys()

    def coefficient(self, word) -> Scalar:
        return self._terms.get(word, ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    # ── arithmetic ──────────────────────────────────────────────────────────

    def _promote(self, other):
        if isinstance(other, type(self)):
            return other
        s = as_scalar(other)
        if s is NotImplemented:
            return NotImplemented
        return type(self)._from_clean({} if s.is_zero() else {self.IDENTITY: s})

    def __add__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for word, c in other._terms.items():
            v = out[word] + c if word in out else c
            if v.is_zero():
                out.pop(word, None)
            else:
                out[word] = v
        return type(self)._from_clean(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._from_clean({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: ScalarLike):
        c = as_scalar(c)
        if c.is_zero():
            return type(self)()
        if c == ONE:
            return self
        return type(self)._from_clean({w: v * c for w, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, type(self)):
            out: Dict = {}
            for w1, c1 in self._terms.items():
                for w2, c2 in other._terms.items():
                    c12 = c1 * c2
                    for w, c in self._word_product(w1, w2).items():
                        v = c12 * c
                        out[w] = out[w] + v if w in out else v
            return type(self)(out)
        s = as_scalar(other)
        if s is NotImplemented:
            return NotImplemented
        return self.scale(s)

    def __rmul__(self, other):
        s = as_scalar(other)
        if s is NotImplemented:
            return NotImplemented
        return self.scale(s)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Combination):
            other = self._promote(other)
            if other is NotImplemented:
                return NotImplemented
        if type(other) is not type(self):
            return False
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{w}" for w, c in sorted(self._terms.items(), key=lambda kv: repr(kv[0])))
        return f"{type(self).__name__}({body or '0'})"
