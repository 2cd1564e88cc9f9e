"""tribekit: tribes-type Boolean functions from per-variable influence budgets.

Given budgets a_1..a_n in (0, 1] and an expectation target mu, the package
builds an OR-of-ANDs function whose expectation lands in [mu, 3/4 mu + 1/4]
while every variable's influence stays strictly below its budget, then
certifies the result against brute-force recomputation using exact dyadic
arithmetic throughout.
"""

from .analysis import (
    AnalysisSummary,
    BoundSequence,
    ConstantFunctionError,
    alpha,
    kkl_ratio,
    mu_max,
    summarize,
    talagrand_ratio,
    talagrand_sum,
)
from .boolfn import (
    DEFAULT_CAP,
    CapacityExceeded,
    TribesFunction,
    TruthTable,
    evaluate,
    expectation,
    expectation_sampled,
    influence,
    influence_sampled,
    is_monotone,
    tribes_truth_table,
    variance,
)
from .construction import (
    CheckResult,
    ConstructionInfeasible,
    ConstructionReport,
    MuNotAchievable,
    SortedBounds,
    TribePartition,
    analytic_expectation,
    analytic_influence,
    build,
    claim1_margin,
    construct,
    influence_profile,
    partition,
    select_m_star,
    sort_bounds,
)
from .exact import (
    DYADIC_ONE,
    DYADIC_ZERO,
    Dyadic,
    compare,
    one_minus,
    parse_decimal,
    pow2_neg,
    render_decimal,
)
from .verify import (
    QuantityCheck,
    VerificationFailure,
    VerificationReport,
    check_theorem,
    verify_exact,
    verify_sampled,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisSummary",
    "BoundSequence",
    "CapacityExceeded",
    "CheckResult",
    "ConstantFunctionError",
    "ConstructionInfeasible",
    "ConstructionReport",
    "DEFAULT_CAP",
    "DYADIC_ONE",
    "DYADIC_ZERO",
    "Dyadic",
    "MuNotAchievable",
    "QuantityCheck",
    "SortedBounds",
    "TribePartition",
    "TribesFunction",
    "TruthTable",
    "VerificationFailure",
    "VerificationReport",
    "alpha",
    "analytic_expectation",
    "analytic_influence",
    "build",
    "check_theorem",
    "claim1_margin",
    "compare",
    "construct",
    "evaluate",
    "expectation",
    "expectation_sampled",
    "influence",
    "influence_profile",
    "influence_sampled",
    "is_monotone",
    "kkl_ratio",
    "mu_max",
    "one_minus",
    "parse_decimal",
    "partition",
    "pow2_neg",
    "render_decimal",
    "select_m_star",
    "sort_bounds",
    "summarize",
    "talagrand_ratio",
    "talagrand_sum",
    "tribes_truth_table",
    "variance",
    "verify_exact",
    "verify_sampled",
]
