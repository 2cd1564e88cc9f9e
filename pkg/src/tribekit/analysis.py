"""Log-weighted influence-budget analysis.

The feasibility side of the construction is governed by the weighted sum
``sum_j a_j / (1 - log2 a_j)`` over the influence budgets.  Subtracting
2*ln(2) gives the slack ``alpha``; when ``alpha`` is positive, every
expectation target up to ``mu_max = 1 - exp(-alpha/8)`` is attainable.

These quantities involve logarithms and are computed in double precision;
anything consuming them downstream uses a documented 1e-9 absolute tolerance.
The budgets themselves stay exact (Fraction) so that range validation and all
construction-side comparisons never touch floats.

Also here: two diagnostic ratios for a finished function.  Both compare an
influence statistic against a multiple of the variance; the multiplicative
constants in the corresponding lower bounds are universal but unspecified, so
only the raw ratios are reported, never a pass/fail against a constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .exact import Dyadic, parse_decimal

__all__ = [
    "TWO_LN2",
    "ConstantFunctionError",
    "BoundSequence",
    "AnalysisSummary",
    "talagrand_sum",
    "alpha",
    "mu_max",
    "summarize",
    "talagrand_ratio",
    "kkl_ratio",
]

TWO_LN2 = 2.0 * math.log(2.0)

_Real = Union[Fraction, Dyadic, float, int]


class ConstantFunctionError(Exception):
    """A variance-normalized ratio was requested for a constant function."""


@dataclass(frozen=True)
class BoundSequence:
    """Per-variable influence budgets, exact with float mirrors.

    ``sources`` keeps the decimal strings as given (for lossless reports),
    ``values`` the exact Fractions, ``mirrors`` correctly-rounded doubles.
    Every budget must lie in (0, 1].
    """

    sources: tuple[str, ...]
    values: tuple[Fraction, ...]
    mirrors: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (len(self.sources) == len(self.values) == len(self.mirrors)):
            raise ValueError("sources, values and mirrors must align")
        for i, v in enumerate(self.values):
            if not 0 < v <= 1:
                raise ValueError(
                    f"bound {i + 1} is {self.sources[i]!r}; must be in (0, 1]"
                )

    @classmethod
    def from_decimals(cls, items: Iterable[str]) -> "BoundSequence":
        sources = tuple(items)
        values = tuple(parse_decimal(s) for s in sources)
        return cls(sources, values, tuple(float(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class AnalysisSummary:
    """Feasibility numbers for a budget sequence.

    ``feasible`` records alpha > 0; when it is false no expectation target is
    guaranteed and ``mu_max`` is reported as 0.
    """

    talagrand_sum: float
    alpha: float
    mu_max: float
    feasible: bool


def _log2(value: _Real) -> float:
    if isinstance(value, Dyadic):
        return value.log2()
    if isinstance(value, Fraction):
        return math.log2(value.numerator) - math.log2(value.denominator)
    return math.log2(value)


def _term(value: _Real) -> float:
    # The budget-1 term is exactly 1; skip the log entirely at the boundary.
    if value == 1:
        return 1.0
    return float(value) / (1.0 - _log2(value))


def talagrand_sum(values: Sequence[_Real]) -> float:
    """sum of v / (1 - log2 v) over values in (0, 1]."""
    for v in values:
        if not 0 < v <= 1:
            raise ValueError(f"values must lie in (0, 1], got {v!r}")
    return math.fsum(_term(v) for v in values)


def alpha(bounds: BoundSequence) -> float:
    """Feasibility slack: the budget sum minus 2*ln(2).  May be negative."""
    return talagrand_sum(bounds.values) - TWO_LN2


def mu_max(alpha_value: float) -> float:
    """Top of the guaranteed expectation range: 1 - exp(-alpha/8), or 0."""
    if alpha_value <= 0:
        return 0.0
    return 1.0 - math.exp(-alpha_value / 8.0)


def summarize(bounds: BoundSequence) -> AnalysisSummary:
    s = talagrand_sum(bounds.values)
    a = s - TWO_LN2
    return AnalysisSummary(
        talagrand_sum=s, alpha=a, mu_max=mu_max(a), feasible=a > 0
    )


def talagrand_ratio(influences: Sequence[Dyadic], var: Dyadic) -> float:
    """Log-weighted influence sum divided by the variance.

    Zero influences contribute 0 (the weight x/(1 - log2 x) vanishes at 0).
    """
    if var == 0:
        raise ConstantFunctionError("variance is zero")
    total = 0.0
    for inf in influences:
        if not 0 <= inf <= 1:
            raise ValueError(f"influence out of [0, 1]: {inf!r}")
        if inf.mantissa != 0:
            total += _term(inf)
    return total / float(var)


def kkl_ratio(influences: Sequence[Dyadic], n: int, var: Dyadic) -> float:
    """Largest influence divided by (log2(n)/n) * Var[f]."""
    if n < 2:
        raise ValueError("ratio is undefined for fewer than 2 variables")
    if var == 0:
        raise ConstantFunctionError("variance is zero")
    top = max(influences)
    return float(top) / ((math.log2(n) / n) * float(var))
