"""Exact rational values and the integer series used by the urn derivation."""

from __future__ import annotations

import decimal
import re
from fractions import Fraction

from .errors import DomainError, ParseError

__all__ = [
    "Rational",
    "rational",
    "parse_rational",
    "format_rational",
    "format_decimal",
    "triangular",
    "pyramidal",
    "falling_factorial",
]

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_DECIMAL_CONTEXT = decimal.Context(prec=12, rounding=decimal.ROUND_HALF_EVEN)


def rational(numerator: int, denominator: int = 1) -> Fraction:
    """Reduced, sign-normalized ``numerator/denominator``."""
    if denominator == 0:
        raise DomainError("zero denominator")
    return Fraction(numerator, denominator)


def parse_rational(text: str | int) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimal and float spellings are rejected."""
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(value: Fraction) -> str:
    """Lowest-terms ``"p/q"``; integers render as ``"p"``."""
    return str(Fraction(value))


def format_decimal(value: Fraction) -> str:
    """Display-only rendering at 12 significant digits, half-to-even."""
    value = Fraction(value)
    d = _DECIMAL_CONTEXT.divide(decimal.Decimal(value.numerator), decimal.Decimal(value.denominator))
    if d == 0:
        return "0"
    return format(d, "f") if -6 <= d.adjusted() < 12 else str(d)


def triangular(n: int) -> int:
    """Sum of ``1..n``."""
    if n < 0:
        raise DomainError(f"triangular needs n >= 0, got {n}")
    return n * (n + 1) // 2


def pyramidal(n: int) -> int:
    """Sum of squares ``1..n``."""
    if n < 0:
        raise DomainError(f"pyramidal needs n >= 0, got {n}")
    return n * (n + 1) * (2 * n + 1) // 6


def falling_factorial(x: int, k: int) -> int:
    """``x (x-1) ... (x-k+1)``; 1 for ``k == 0`` and 0 once ``k > x``."""
    if x < 0 or k < 0:
        raise DomainError(f"falling_factorial needs x, k >= 0, got ({x}, {k})")
    if k > x:
        return 0
    out = 1
    for i in range(x - k + 1, x + 1):
        out *= i
    return out
