"""
skein_errors.py

Exception and warning hierarchy shared by every skein module.

This module provides:
- SkeinError, the root of all library errors, with an ``exit_code`` used by the CLI
- Arithmetic errors raised by the scalar layer
- Parse/sort errors raised by the expression language
- Reduction errors raised by the lens-space reducer and the window solver
- Warning categories for degraded-but-successful paths
"""
from __future__ import annotations

from typing import FrozenSet, Iterable, Optional


class SkeinError(Exception):
    """Base class for all skein computation errors."""
    exit_code = 3


class DomainError(SkeinError, ValueError):
    """An input lies outside the domain of an operation (e.g. p < 1, gcd(p,q) != 1)."""
    exit_code = 3


class UnsupportedGcd(DomainError):
    """The standard basis curve is only defined for gcd(m,n) in {1, 2}."""

    def __init__(self, m: int, n: int, gcd: int):
        super().__init__(
            f"standard curve ({m},{n}) has gcd {gcd}; only gcd 1 and 2 are supported"
        )
        self.m = m
        self.n = n
        self.gcd = gcd


class NotExactDivision(SkeinError, ArithmeticError):
    """Laurent polynomial division left a nonzero remainder."""
    exit_code = 3


class DivisionByZero(SkeinError, ZeroDivisionError):
    """Division by the zero scalar."""
    exit_code = 3


class ParseError(SkeinError, ValueError):
    """
    The expression text could not be parsed.

    Attributes:
        position: 0-based character offset of the failure (None if unknown)
        expected: set of token descriptions the parser would have accepted
    """
    exit_code = 2

    def __init__(
        self,
        message: str,
        position: Optional[int] = None,
        expected: Optional[Iterable[str]] = None,
    ):
        self.position = position
        self.expected: FrozenSet[str] = frozenset(expected or ())
        detail = message
        if position is not None:
            detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class SortError(ParseError):
    """Torus and annulus atoms were mixed inside one expression."""


class StepLimitExceeded(SkeinError, RuntimeError):
    """The recursive reducer ran out of its elementary-move budget (or hit a cycle)."""
    exit_code = 4


class WindowTooSmall(SkeinError, RuntimeError):
    """The window solver could not eliminate a non-grid word inside its window."""
    exit_code = 4

    def __init__(self, message: str, word: Optional[tuple] = None):
        super().__init__(message)
        self.word = word


# ─────────────────────────────────────────────────────────────────────────────
# Warning categories
# ─────────────────────────────────────────────────────────────────────────────

class SolverFallbackWarning(UserWarning):
    """The recursive reducer gave up and the window solver produced the answer."""


class CacheWarning(UserWarning):
    """The cache document was unreadable or stale and has been reset."""
