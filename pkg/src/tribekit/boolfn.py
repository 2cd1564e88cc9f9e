"""Truth tables for OR-of-ANDs functions and the probabilistic definitions.

This module is the brute-force side of every check: expectation and influence
are recomputed here straight from their definitions over an explicit truth
table (or, beyond the table capacity, from seeded uniform sampling), entirely
independent of the closed-form product formulas elsewhere in the package.

Bit-order convention, fixed once for the whole package: a table over ``t``
variables stores bit ``b`` (0 <= b < 2**t) as the function value at the
assignment whose variable ``p`` (0-based) is bit ``p`` of ``b``.  Variable 0
is the least-significant bit of the index.

Expectation is Pr[f(x) = 1] under a uniform assignment; the influence of
variable ``p`` is Pr[f(x) != f(x with bit p flipped)].  Both are exact dyadic
counts over the table.

Truth tables are immutable; the bit array lives in a single arbitrary-size
integer, so counting is a popcount and flipping a variable is a pair of
shifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exact import DYADIC_ONE, Dyadic

__all__ = [
    "DEFAULT_CAP",
    "CapacityExceeded",
    "TruthTable",
    "TribesFunction",
    "tribes_truth_table",
    "evaluate",
    "expectation",
    "influence",
    "variance",
    "is_monotone",
    "influence_sampled",
    "expectation_sampled",
]

DEFAULT_CAP = 24

_SAMPLE_CHUNK = 1 << 15


class CapacityExceeded(Exception):
    """The requested truth table would exceed the variable cap."""


@dataclass(frozen=True)
class TruthTable:
    """Explicit table of a Boolean function on ``nvars`` variables.

    ``bits`` packs the 2**nvars function values little-endian by assignment
    index, per the module bit-order convention.
    """

    nvars: int
    bits: int

    def __post_init__(self) -> None:
        if self.nvars < 0:
            raise ValueError("nvars must be non-negative")
        if self.bits < 0 or self.bits.bit_length() > (1 << self.nvars):
            raise ValueError("bits out of range for table size")

    @property
    def size(self) -> int:
        return 1 << self.nvars

    def value_at(self, index: int) -> int:
        if not 0 <= index < self.size:
            raise ValueError(f"assignment index out of range: {index}")
        return (self.bits >> index) & 1


@dataclass(frozen=True)
class TribesFunction:
    """Symbolic OR of ANDs over disjoint blocks of variables.

    ``tribe_sizes[i]`` is the width of block i; block i owns the contiguous
    construction positions ``offsets[i] .. offsets[i+1]-1`` (0-based).
    ``var_map[q]`` names the original variable (0-based) sitting at
    construction position ``q``; original variables not in ``var_map`` do not
    feed the function and have influence exactly zero.
    """

    tribe_sizes: tuple[int, ...]
    var_map: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if any(k < 1 for k in self.tribe_sizes):
            raise ValueError("tribe sizes must be >= 1")
        t = sum(self.tribe_sizes)
        if len(self.var_map) != t:
            raise ValueError("var_map must cover every construction position")
        if len(set(self.var_map)) != len(self.var_map):
            raise ValueError("var_map must be injective")
        if any(not 0 <= v < self.n for v in self.var_map):
            raise ValueError("var_map entries must be original indices in [0, n)")

    @classmethod
    def identity(
        cls, tribe_sizes: Sequence[int], n: int | None = None
    ) -> "TribesFunction":
        """Tribes over consecutive variables 0, 1, ... (handy in tests)."""
        sizes = tuple(tribe_sizes)
        t = sum(sizes)
        return cls(sizes, tuple(range(t)), t if n is None else n)

    @property
    def relevant_count(self) -> int:
        """Number of construction positions that actually feed the function."""
        return sum(self.tribe_sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        """Cumulative block starts; offsets[i] is the first position of tribe i."""
        acc = [0]
        for k in self.tribe_sizes:
            acc.append(acc[-1] + k)
        return tuple(acc)

    def tribe_of(self, position: int) -> int:
        """Index of the tribe owning a construction position < relevant_count."""
        if not 0 <= position < self.relevant_count:
            raise ValueError(f"position out of range: {position}")
        acc = 0
        for i, k in enumerate(self.tribe_sizes):
            acc += k
            if position < acc:
                return i
        raise AssertionError("unreachable")


def _tile(pattern: int, period_bits: int, total_bits: int) -> int:
    """Repeat a bit pattern of power-of-two period up to a power-of-two length."""
    while period_bits < total_bits:
        pattern |= pattern << period_bits
        period_bits <<= 1
    return pattern


def _variable_table(p: int, t: int) -> int:
    """Bitset of assignment indices whose variable ``p`` is 1."""
    s = 1 << p
    return _tile(((1 << s) - 1) << s, s << 1, 1 << t)


def _and_block_table(lo: int, hi: int, t: int) -> int:
    """Bitset of indices where variables lo..hi (inclusive, 0-based) are all 1."""
    fixed = (1 << (hi + 1)) - (1 << lo)
    pattern = ((1 << (1 << lo)) - 1) << fixed
    return _tile(pattern, 1 << (hi + 1), 1 << t)


def tribes_truth_table(f: TribesFunction, cap: int = DEFAULT_CAP) -> TruthTable:
    """Exhaustive table of ``f`` over its relevant construction positions.

    Raises CapacityExceeded when the relevant variable count is above ``cap``
    (the caller should fall back to sampling).
    """
    t = f.relevant_count
    if t > cap:
        raise CapacityExceeded(
            f"{t} relevant variables exceed the table cap of {cap}"
        )
    bits = 0
    offsets = f.offsets
    for i, k in enumerate(f.tribe_sizes):
        bits |= _and_block_table(offsets[i], offsets[i] + k - 1, t)
    return TruthTable(t, bits)


def evaluate(f: TribesFunction, x: Sequence[int]) -> int:
    """Evaluate ``f`` on an assignment given in construction-position order."""
    t = f.relevant_count
    if len(x) < t:
        raise ValueError(f"assignment has {len(x)} entries, needs at least {t}")
    pos = 0
    for k in f.tribe_sizes:
        if all(x[pos + j] for j in range(k)):
            return 1
        pos += k
    return 0


def expectation(tt: TruthTable) -> Dyadic:
    """Pr[f(x) = 1] as an exact dyadic: popcount over table size."""
    return Dyadic(tt.bits.bit_count(), tt.nvars)


def influence(tt: TruthTable, p: int) -> Dyadic:
    """Pr[f(x) != f(x with variable p flipped)], exactly.

    Flipping variable ``p`` pairs each index ``b`` with ``b ^ 2**p``; the
    count of indices whose pair disagrees is a popcount of the table XORed
    with itself swapped along that axis.
    """
    if not 0 <= p < tt.nvars:
        raise ValueError(f"variable index out of range: {p}")
    s = 1 << p
    hi = _variable_table(p, tt.nvars)
    lo = ((1 << tt.size) - 1) ^ hi
    swapped = ((tt.bits & hi) >> s) | ((tt.bits & lo) << s)
    return Dyadic((tt.bits ^ swapped).bit_count(), tt.nvars)


def variance(tt: TruthTable) -> Dyadic:
    """Var[f] = E[f] * (1 - E[f]) for a 0/1-valued function, exactly."""
    e = expectation(tt)
    return e * (DYADIC_ONE - e)


def is_monotone(tt: TruthTable) -> bool:
    """True iff raising any variable from 0 to 1 never drops the function."""
    for p in range(tt.nvars):
        s = 1 << p
        hi = _variable_table(p, tt.nvars)
        lo = ((1 << tt.size) - 1) ^ hi
        if ((tt.bits & lo) << s) & ~tt.bits:
            return False
    return True


def _tribe_hits(bits: np.ndarray, f: TribesFunction) -> np.ndarray:
    """Per-sample, per-tribe AND of the drawn assignment bits."""
    if not f.tribe_sizes:
        return np.zeros((bits.shape[0], 0), dtype=bool)
    offsets = f.offsets
    cols = [
        bits[:, offsets[i] : offsets[i + 1]].all(axis=1)
        for i in range(len(f.tribe_sizes))
    ]
    return np.column_stack(cols)


def _sample_rng(seed: int) -> np.random.Generator:
    # Philox is counter-based: the draw stream depends only on the seed, not
    # on how the host machine schedules work.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def influence_sampled(
    f: TribesFunction, position: int, samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo influence estimate for one construction position.

    Draws ``samples`` uniform assignments from a seeded counter-based
    generator, evaluates the function before and after flipping the bit at
    ``position``, and returns (estimate, stderr) with
    stderr = sqrt(p*(1-p)/samples).  Output is a pure function of
    (seed, samples, position).  Positions at or beyond the relevant count are
    irrelevant and estimate exactly 0.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if position < 0:
        raise ValueError(f"position out of range: {position}")
    t = f.relevant_count
    if position >= t:
        return 0.0, 0.0

    tribe = f.tribe_of(position)
    offsets = f.offsets
    rng = _sample_rng(seed)
    hits = 0
    remaining = samples
    while remaining:
        count = min(remaining, _SAMPLE_CHUNK)
        bits = rng.integers(0, 2, size=(count, t), dtype=np.uint8)
        tribe_and = _tribe_hits(bits, f)
        block = bits[:, offsets[tribe] : offsets[tribe + 1]].copy()
        block[:, position - offsets[tribe]] ^= 1
        tribe_and_flipped = tribe_and.copy()
        tribe_and_flipped[:, tribe] = block.all(axis=1)
        fx = tribe_and.any(axis=1)
        fxj = tribe_and_flipped.any(axis=1)
        hits += int(np.count_nonzero(fx != fxj))
        remaining -= count
    p_hat = hits / samples
    return p_hat, float(np.sqrt(p_hat * (1.0 - p_hat) / samples))


def expectation_sampled(
    f: TribesFunction, samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo estimate of Pr[f(x) = 1]; same determinism contract as
    influence_sampled."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    t = f.relevant_count
    rng = _sample_rng(seed)
    hits = 0
    remaining = samples
    while remaining:
        count = min(remaining, _SAMPLE_CHUNK)
        bits = rng.integers(0, 2, size=(count, t), dtype=np.uint8)
        hits += int(np.count_nonzero(_tribe_hits(bits, f).any(axis=1)))
        remaining -= count
    p_hat = hits / samples
    return p_hat, float(np.sqrt(p_hat * (1.0 - p_hat) / samples))
