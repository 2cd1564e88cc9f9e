"""Greedy tribe construction from influence budgets.

Given budgets ``a_1 >= a_2 >= ... >= a_n`` (sorted here, any order on entry)
and an expectation target ``mu``, the construction packs the variables into
consecutive tribes.  Walking the sorted sequence, each tribe takes the least
width ``k`` whose last member still clears the threshold ``2**(1-k)``:

    k_i = min { k >= 1 : a at sorted position s_{i-1}+k  >  2**(1-k) }

(indices past ``n`` make the condition false, so the walk ends at the first
tribe that cannot be completed, leaving ``m`` full tribes).  Since budgets
never exceed 1, every ``k_i >= 2``, and the widths are non-decreasing.

The function is the OR of the first ``m*`` tribe ANDs, where ``m*`` is the
least prefix whose all-tribes-fail probability drops to the target:

    m* = min { 1 <= r <= m : prod_{i<=r} (1 - 2**-k_i)  <=  1 - mu }

Its expectation is exactly ``1 - prod_{i<=m*}(1 - 2**-k_i)``, and a variable
in tribe i carries influence ``2**(1-k_i) * prod_{l != i}(1 - 2**-k_l)``
(positions after the last used tribe carry exactly 0).  All of these are
dyadic rationals and are computed exactly; the per-tribe products come from
prefix/suffix product arrays, never division.

Five named checks accompany every report; four are decided by exact
cross-multiplication, the fifth (``claim1``, the packed-mass inequality
``sum_i 2**-k_i >= alpha/8``) involves the float ``alpha`` and uses a 1e-9
absolute tolerance.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from .analysis import AnalysisSummary, BoundSequence, summarize
from .boolfn import TribesFunction
from .exact import (
    DYADIC_ONE,
    DYADIC_ZERO,
    Dyadic,
    one_minus,
    parse_decimal,
    pow2_neg,
    render_decimal,
)

__all__ = [
    "CLAIM1_TOLERANCE",
    "MU_MAX_TOLERANCE",
    "CHECK_NAMES",
    "ConstructionInfeasible",
    "MuNotAchievable",
    "SortedBounds",
    "TribePartition",
    "CheckResult",
    "ConstructionReport",
    "sort_bounds",
    "partition",
    "select_m_star",
    "build",
    "analytic_expectation",
    "analytic_influence",
    "influence_profile",
    "claim1_margin",
    "evaluate_checks",
    "construct",
]

# Tolerance for the one check that consumes the float alpha.
CLAIM1_TOLERANCE = 1e-9
# Tolerance for the advisory mu <= mu_max comparison (float on one side).
MU_MAX_TOLERANCE = 1e-9

CHECK_NAMES = (
    "expectation-lower",
    "expectation-upper",
    "influence-strict",
    "m-star-minimality",
    "claim1",
)


class ConstructionInfeasible(Exception):
    """No tribe can be formed from the given budgets (m = 0)."""


class MuNotAchievable(Exception):
    """Even all m tribes leave the failure product above 1 - mu."""


@dataclass(frozen=True)
class SortedBounds:
    """Budgets in non-increasing order with the sorting permutation.

    ``perm[p]`` is the original (0-based) index of the budget at sorted
    position ``p``; ties keep their original relative order, so the
    permutation is deterministic.
    """

    bounds: BoundSequence
    values: tuple[Fraction, ...]
    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(self.values[p] < self.values[p + 1] for p in range(len(self.values) - 1)):
            raise ValueError("values must be non-increasing")
        if sorted(self.perm) != list(range(self.bounds.n)):
            raise ValueError("perm must be a permutation of the original indices")

    @property
    def n(self) -> int:
        return self.bounds.n


@dataclass(frozen=True)
class TribePartition:
    """Tribe widths over sorted positions.

    ``prefix[i]`` is the number of sorted positions consumed by the first
    ``i`` tribes (so ``prefix[0] == 0`` and ``prefix[m]`` is the total).
    ``residual`` counts the leftover positions plus one, bookkeeping for the
    tribe that could not be completed.
    """

    sizes: tuple[int, ...]
    prefix: tuple[int, ...]
    residual: int
    n: int

    def __post_init__(self) -> None:
        if any(k < 2 for k in self.sizes):
            raise ValueError("tribe widths must be >= 2")
        if any(a > b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("tribe widths must be non-decreasing")
        acc = [0]
        for k in self.sizes:
            acc.append(acc[-1] + k)
        if list(self.prefix) != acc:
            raise ValueError("prefix sums inconsistent with sizes")
        if acc[-1] > self.n:
            raise ValueError("tribes exceed the variable count")
        if self.residual != self.n - acc[-1] + 1:
            raise ValueError("residual inconsistent with sizes")

    @property
    def m(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check.

    ``margin_exact`` is the exact slack (positive means satisfied with room)
    when the check is decided exactly; it is None for the float-based check.
    ``margin`` is always the double-precision rendering of the slack.
    """

    name: str
    passed: bool
    margin: float
    margin_exact: Fraction | None


@dataclass(frozen=True)
class ConstructionReport:
    """Everything produced for one (bounds, mu) input.

    ``influences[j]`` is the exact influence of original variable ``j``
    (0-based); variables outside the constructed function hold exact zero.
    ``guaranteed`` records whether the feasibility analysis promised this
    target (alpha > 0 and mu <= mu_max up to float tolerance); construction
    may still succeed without the promise.
    """

    bounds: BoundSequence
    mu: Fraction
    mu_source: str
    summary: AnalysisSummary
    guaranteed: bool
    partition: TribePartition
    m_star: int
    tribes: TribesFunction
    expectation: Dyadic
    influences: tuple[Dyadic, ...]
    checks: tuple[CheckResult, ...]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def all_checks_pass(self) -> bool:
        return all(c.passed for c in self.checks)


def sort_bounds(bounds: BoundSequence) -> SortedBounds:
    """Stable non-increasing sort; exact comparisons, ties by original index."""
    perm = tuple(
        sorted(range(bounds.n), key=lambda i: bounds.values[i], reverse=True)
    )
    values = tuple(bounds.values[i] for i in perm)
    return SortedBounds(bounds=bounds, values=values, perm=perm)


def _threshold(k: int) -> Fraction:
    """Exact 2**(1-k) for k >= 1."""
    return Fraction(2, 1 << k)


def partition(sb: SortedBounds) -> TribePartition:
    """Greedy tribe widths over the sorted budgets (possibly none)."""
    sizes: list[int] = []
    prefix = [0]
    s = 0
    n = sb.n
    while True:
        found = 0
        for k in range(1, n - s + 1):
            if sb.values[s + k - 1] > _threshold(k):
                found = k
                break
        if not found:
            break
        sizes.append(found)
        s += found
        prefix.append(s)
    return TribePartition(
        sizes=tuple(sizes), prefix=tuple(prefix), residual=n - s + 1, n=n
    )


def _failure_factors(p: TribePartition, count: int) -> list[Dyadic]:
    """The factors 1 - 2**-k_i for the first ``count`` tribes."""
    return [one_minus(pow2_neg(k)) for k in p.sizes[:count]]


def select_m_star(p: TribePartition, mu: Fraction) -> int:
    """Least tribe count whose failure product reaches 1 - mu, exactly.

    Raises ConstructionInfeasible when there are no tribes at all, and
    MuNotAchievable when even the full product stays above 1 - mu.
    """
    if not 0 < mu < 1:
        raise ValueError(f"mu must satisfy 0 < mu < 1, got {mu}")
    if p.m == 0:
        raise ConstructionInfeasible("no tribe can be formed from these budgets")
    target = 1 - mu
    product = DYADIC_ONE
    for r, k in enumerate(p.sizes, start=1):
        product = product * one_minus(pow2_neg(k))
        if product <= target:
            return r
    raise MuNotAchievable(
        f"all {p.m} tribes leave the failure probability above {target}"
    )


def build(p: TribePartition, m_star: int, sb: SortedBounds) -> TribesFunction:
    """The OR of the first ``m_star`` tribe ANDs, wired to original variables.

    Construction position ``q`` (0-based) reads original variable
    ``sb.perm[q]``; tribe ``i`` covers positions
    ``prefix[i] .. prefix[i+1]-1``.
    """
    if not 1 <= m_star <= p.m:
        raise ValueError(f"m_star must lie in 1..{p.m}, got {m_star}")
    t = p.prefix[m_star]
    return TribesFunction(
        tribe_sizes=p.sizes[:m_star], var_map=sb.perm[:t], n=sb.n
    )


def analytic_expectation(p: TribePartition, m_star: int) -> Dyadic:
    """Exact expectation: 1 - prod_{i<=m_star}(1 - 2**-k_i)."""
    if not 1 <= m_star <= p.m:
        raise ValueError(f"m_star must lie in 1..{p.m}, got {m_star}")
    product = DYADIC_ONE
    for factor in _failure_factors(p, m_star):
        product = product * factor
    return DYADIC_ONE - product


def influence_profile(p: TribePartition, m_star: int) -> tuple[Dyadic, ...]:
    """Exact per-tribe influence, one entry per tribe i <= m_star.

    Entry i is ``2**(1-k_i) * prod_{l != i, l <= m_star}(1 - 2**-k_l)``; the
    other-tribes product is assembled from prefix and suffix partial products
    so nothing is ever divided.
    """
    if not 1 <= m_star <= p.m:
        raise ValueError(f"m_star must lie in 1..{p.m}, got {m_star}")
    factors = _failure_factors(p, m_star)
    pre = [DYADIC_ONE]
    for f in factors:
        pre.append(pre[-1] * f)
    suf = [DYADIC_ONE]
    for f in reversed(factors):
        suf.append(suf[-1] * f)
    suf.reverse()
    return tuple(
        Dyadic(1, p.sizes[i] - 1) * pre[i] * suf[i + 1] for i in range(m_star)
    )


def analytic_influence(p: TribePartition, m_star: int, position: int) -> Dyadic:
    """Exact influence of one construction position (0-based, < n).

    Positions at or beyond the end of tribe ``m_star`` are outside the
    function and carry exactly 0.
    """
    if not 0 <= position < p.n:
        raise ValueError(f"position out of range 0..{p.n - 1}: {position}")
    t = p.prefix[m_star]
    if position >= t:
        return DYADIC_ZERO
    tribe = bisect.bisect_right(p.prefix, position) - 1
    return influence_profile(p, m_star)[tribe]


def claim1_margin(p: TribePartition, alpha_value: float) -> float:
    """Slack of the packed-mass inequality: sum_i 2**-k_i - alpha/8.

    The sum over all m tribes is accumulated exactly, then rendered to a
    double for the comparison against the float alpha.
    """
    total = DYADIC_ZERO
    for k in p.sizes:
        total = total + pow2_neg(k)
    return float(total) - alpha_value / 8.0


def evaluate_checks(
    *,
    expectation: Dyadic,
    influences: tuple[Dyadic, ...],
    bounds: BoundSequence,
    mu: Fraction,
    partition: TribePartition,
    m_star: int,
    alpha_value: float,
) -> tuple[CheckResult, ...]:
    """The five named checks, from whatever expectation/influences are given.

    Callers pass either the analytic values or oracle recomputations; the
    checks themselves do not care where the numbers came from.
    """
    e = expectation.as_fraction()

    lower = e - mu
    upper = (Fraction(3, 4) * mu + Fraction(1, 4)) - e

    strict = min(
        bounds.values[j] - influences[j].as_fraction() for j in range(bounds.n)
    )

    # Minimality: the failure product over m_star - 1 tribes (empty = 1)
    # must still sit strictly above 1 - mu.
    product = DYADIC_ONE
    for factor in _failure_factors(partition, m_star - 1):
        product = product * factor
    minimality = product.as_fraction() - (1 - mu)

    c1 = claim1_margin(partition, alpha_value)

    return (
        CheckResult("expectation-lower", lower >= 0, float(lower), lower),
        CheckResult("expectation-upper", upper >= 0, float(upper), upper),
        CheckResult("influence-strict", strict > 0, float(strict), strict),
        CheckResult("m-star-minimality", minimality > 0, float(minimality), minimality),
        CheckResult("claim1", c1 >= -CLAIM1_TOLERANCE, c1, None),
    )


def construct(
    bounds: BoundSequence,
    mu: Fraction | str,
    mu_source: str | None = None,
) -> ConstructionReport:
    """Run the whole pipeline for one (bounds, mu) input.

    ``mu`` may be a decimal string or an exact Fraction in (0, 1).  The
    construction is attempted whenever any tribe forms, even if the
    feasibility analysis made no promise; ``guaranteed`` records the promise.

    Raises ConstructionInfeasible / MuNotAchievable as the tribe selection
    dictates, ValueError for out-of-range mu.
    """
    if isinstance(mu, str):
        mu_source = mu if mu_source is None else mu_source
        mu = parse_decimal(mu)
    if not 0 < mu < 1:
        raise ValueError(f"mu must satisfy 0 < mu < 1, got {mu}")

    summary = summarize(bounds)
    sb = sort_bounds(bounds)
    part = partition(sb)
    m_star = select_m_star(part, mu)
    tribes = build(part, m_star, sb)

    e = analytic_expectation(part, m_star)
    per_tribe = influence_profile(part, m_star)
    influences = [DYADIC_ZERO] * bounds.n
    for i in range(m_star):
        for q in range(part.prefix[i], part.prefix[i + 1]):
            influences[sb.perm[q]] = per_tribe[i]

    checks = evaluate_checks(
        expectation=e,
        influences=tuple(influences),
        bounds=bounds,
        mu=mu,
        partition=part,
        m_star=m_star,
        alpha_value=summary.alpha,
    )
    guaranteed = summary.feasible and float(mu) <= summary.mu_max + MU_MAX_TOLERANCE

    return ConstructionReport(
        bounds=bounds,
        mu=mu,
        mu_source=mu_source if mu_source is not None else _render_mu(mu),
        summary=summary,
        guaranteed=guaranteed,
        partition=part,
        m_star=m_star,
        tribes=tribes,
        expectation=e,
        influences=tuple(influences),
        checks=checks,
    )


def _render_mu(mu: Fraction) -> str:
    try:
        return render_decimal(mu)
    except ValueError:
        return f"{mu.numerator}/{mu.denominator}"
