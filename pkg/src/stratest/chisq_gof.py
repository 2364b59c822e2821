"""Pearson chi-squared goodness of fit of observed counts to a target strategy."""

from __future__ import annotations

import math
from dataclasses import dataclass

from stratest.core import CountVector, MixedStrategy
from stratest.special_fn import chi_squared_sf

SMALL_EXPECTED = 5.0

# warning flags
SMALL_EXPECTED_COUNT = "small_expected_count"
ZERO_PROBABILITY_VIOLATION = "zero_probability_violation"


@dataclass(frozen=True)
class GofTestResult:
    statistic: float
    df: int
    p_value: float
    expected: tuple[float, ...]
    warnings: frozenset[str] = frozenset()
    degenerate: bool = False


def chi_squared_gof(target: MixedStrategy, counts: CountVector) -> GofTestResult:
    """Test ``counts`` against ``target`` with k - 1 degrees of freedom.

    Only categories with positive target probability enter the statistic, so
    k is the size of the target's support.  An observation in a category the
    target never plays gives p = 0 outright.
    """
    if target.alphabet != counts.alphabet:
        raise ValueError("target and counts use different alphabets")
    n = counts.n
    if n == 0:
        raise ValueError("no observations")

    expected = tuple(n * p for p in target.probs)
    support = target.support
    flags: set[str] = set()
    if any(p == 0.0 and nj > 0 for p, nj in zip(target.probs, counts.counts)):
        flags.add(ZERO_PROBABILITY_VIOLATION)
    if any(expected[j] < SMALL_EXPECTED for j in support):
        flags.add(SMALL_EXPECTED_COUNT)

    t = math.fsum((counts.counts[j] - expected[j]) ** 2 / expected[j] for j in support)
    df = len(support) - 1

    if ZERO_PROBABILITY_VIOLATION in flags:
        return GofTestResult(t, df, 0.0, expected, frozenset(flags))
    if df == 0:
        # point-mass target, and every observation landed on it
        return GofTestResult(t, df, 1.0, expected, frozenset(flags), degenerate=True)
    return GofTestResult(t, df, chi_squared_sf(t, df), expected, frozenset(flags))
