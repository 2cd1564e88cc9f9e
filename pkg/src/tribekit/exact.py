"""Exact dyadic and decimal-rational arithmetic.

Every probability attached to an OR-of-ANDs function over uniform bits is a
dyadic rational m / 2**e, and every influence budget or expectation target
arrives as a finite decimal string.  This module keeps both families exact so
that strict inequalities (budget comparisons, product thresholds) are never
decided by floating-point rounding.

Conventions:
    * ``Dyadic`` is stored normalized: the mantissa is odd whenever the
      exponent is positive, and zero is the canonical ``Dyadic(0, 0)``.
    * ``fractions.Fraction`` is the rational carrier for decimal-sourced
      values; it is always reduced, keeps a positive denominator, and parses
      finite decimal strings without loss.
    * Comparisons across the two families cross-multiply arbitrary-precision
      integers; no floats are involved anywhere in this module.

All values are immutable; everything here is safe to share across threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "Dyadic",
    "DYADIC_ZERO",
    "DYADIC_ONE",
    "ExactValue",
    "pow2_neg",
    "one_minus",
    "compare",
    "parse_decimal",
    "render_decimal",
]

ExactValue = Union["Dyadic", Fraction, int]

_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")


@dataclass(frozen=True, eq=False)
class Dyadic:
    """An exact dyadic rational ``mantissa / 2**exponent``.

    The constructor normalizes: factors of two are cancelled until the
    mantissa is odd or the exponent reaches zero, and zero collapses to
    ``Dyadic(0, 0)``.  Negative exponents are rejected.
    """

    mantissa: int
    exponent: int = 0

    def __post_init__(self) -> None:
        m, e = self.mantissa, self.exponent
        if e < 0:
            raise ValueError(f"exponent must be non-negative, got {e}")
        if m == 0:
            e = 0
        elif e > 0:
            # (m & -m).bit_length() - 1 is the number of trailing zero bits.
            shift = min(e, (m & -m).bit_length() - 1)
            m >>= shift
            e -= shift
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    # -- conversions -------------------------------------------------------

    def as_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.exponent)

    def __float__(self) -> float:
        # Exact integer division is correctly rounded for any magnitudes.
        return self.mantissa / (1 << self.exponent)

    def log2(self) -> float:
        """log2 of a positive value, computed as log2(mantissa) - exponent.

        Stays accurate even when the value underflows double precision.
        """
        if self.mantissa <= 0:
            raise ValueError("log2 requires a positive value")
        return math.log2(self.mantissa) - self.exponent

    # -- arithmetic (closed, exact) ----------------------------------------

    def __add__(self, other: "Dyadic") -> "Dyadic":
        if not isinstance(other, Dyadic):
            return NotImplemented
        e = max(self.exponent, other.exponent)
        m = (self.mantissa << (e - self.exponent)) + (
            other.mantissa << (e - other.exponent)
        )
        return Dyadic(m, e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.__add__(-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.mantissa, self.exponent)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    # -- exact total order across Dyadic / Fraction / int -------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (Dyadic, Fraction, int)):
            return NotImplemented
        return compare(self, other) == 0

    def __lt__(self, other: ExactValue) -> bool:
        return compare(self, other) < 0

    def __le__(self, other: ExactValue) -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other: ExactValue) -> bool:
        return compare(self, other) > 0

    def __ge__(self, other: ExactValue) -> bool:
        return compare(self, other) >= 0

    def __hash__(self) -> int:
        # Equal numbers must hash equally across Dyadic/Fraction/int.
        return hash(self.as_fraction())

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}, {self.exponent})"


DYADIC_ZERO = Dyadic(0, 0)
DYADIC_ONE = Dyadic(1, 0)


def pow2_neg(k: int) -> Dyadic:
    """Exact ``2**-k`` for k >= 1."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    return Dyadic(1, k)


def one_minus(d: Dyadic) -> Dyadic:
    """Exact ``1 - d`` for d in [0, 1]."""
    if compare(d, 0) < 0 or compare(d, 1) > 0:
        raise ValueError(f"value must lie in [0, 1], got {d!r}")
    return DYADIC_ONE - d


def _as_pair(value: ExactValue) -> tuple[int, int]:
    """(numerator, positive denominator) of an exact value."""
    if isinstance(value, Dyadic):
        return value.mantissa, 1 << value.exponent
    if isinstance(value, Fraction):
        return value.numerator, value.denominator
    if isinstance(value, int):
        return value, 1
    raise TypeError(f"not an exact value: {value!r}")


def compare(a: ExactValue, b: ExactValue) -> int:
    """Exact three-way comparison: -1 if a < b, 0 if equal, 1 if a > b."""
    an, ad = _as_pair(a)
    bn, bd = _as_pair(b)
    lhs = an * bd
    rhs = bn * ad
    return (lhs > rhs) - (lhs < rhs)


def parse_decimal(text: str) -> Fraction:
    """Parse a finite decimal string into an exact Fraction.

    Accepts plain decimals such as "1", "0.25", ".5"; rejects rationals
    ("1/3"), exponent notation, and anything else Fraction would otherwise
    admit.
    """
    if not isinstance(text, str) or not _DECIMAL_RE.match(text.strip()):
        raise ValueError(f"not a finite decimal string: {text!r}")
    return Fraction(text.strip())


def render_decimal(value: Fraction) -> str:
    """Render a Fraction with 2,5-smooth denominator as an exact decimal.

    The result has no trailing fractional zeros ("0.25", "1", "-0.5").
    Raises ValueError for denominators whose expansion does not terminate.
    """
    num, den = value.numerator, value.denominator
    if num == 0:
        return "0"
    sign = "-" if num < 0 else ""
    num = abs(num)
    twos = 0
    rest = den
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    fives = 0
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        raise ValueError(f"{value} has no terminating decimal expansion")
    places = max(twos, fives)
    scaled = num * 10**places // den
    digits = str(scaled).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    whole, frac = digits[:-places], digits[-places:]
    frac = frac.rstrip("0")
    return sign + whole + ("." + frac if frac else "")
