"""Brute-force reference computations for validating the analytic tests.

Nothing here is used on the production path.  Probabilities are exact
``Fraction`` values so the oracles carry no rounding of their own.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

import numpy as np

from stratest.chisq_gof import chi_squared_gof
from stratest.core import CountVector, MixedStrategy

MAX_ARRANGEMENT_N = 12
MAX_MULTINOMIAL_K = 4
MAX_MULTINOMIAL_N = 20


@dataclass(frozen=True)
class RunCountDistribution:
    counts: CountVector
    pmf: dict[int, Fraction]

    def mean(self) -> Fraction:
        return sum((r * p for r, p in self.pmf.items()), Fraction(0))

    def variance(self) -> Fraction:
        m = self.mean()
        return sum(((r - m) ** 2 * p for r, p in self.pmf.items()), Fraction(0))


def multiset_arrangements(counts: tuple[int, ...]):
    """Yield every distinct ordering of a multiset exactly once."""
    remaining = list(counts)
    n = sum(counts)
    prefix: list[int] = []

    def rec():
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for j, left in enumerate(remaining):
            if left:
                remaining[j] -= 1
                prefix.append(j)
                yield from rec()
                prefix.pop()
                remaining[j] += 1

    yield from rec()


def _runs(arr: tuple[int, ...]) -> int:
    # deliberately independent of stratest.core.count_runs
    runs = 0
    prev = None
    for x in arr:
        if x != prev:
            runs += 1
            prev = x
    return runs


def exact_run_distribution(counts: CountVector) -> RunCountDistribution:
    n = counts.n
    if n > MAX_ARRANGEMENT_N:
        raise ValueError("enumeration bound exceeded")
    if n == 0:
        raise ValueError("empty multiset has no runs")
    tally = Counter(_runs(arr) for arr in multiset_arrangements(counts.counts))
    total = sum(tally.values())
    assert total == factorial(n) // prod(factorial(c) for c in counts.counts)
    pmf = {r: Fraction(m, total) for r, m in sorted(tally.items())}
    return RunCountDistribution(counts, pmf)


def compositions(n: int, k: int):
    """All k-tuples of non-negative integers summing to n."""
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, k - 1):
            yield (first, *rest)


def multinomial_pmf(counts: tuple[int, ...], probs: tuple[Fraction, ...]) -> Fraction:
    n = sum(counts)
    coef = factorial(n) // prod(factorial(c) for c in counts)
    return coef * prod((p**c for p, c in zip(probs, counts)), start=Fraction(1))


def exact_multinomial_rejection_rate(target: MixedStrategy, n: int, alpha: float) -> float:
    """Exact Type-I error of the chi-squared component at level ``alpha``.

    Sums the multinomial probability, under ``target``, of every count vector
    whose chi-squared p-value is <= alpha.
    """
    k = target.alphabet.k
    if k > MAX_MULTINOMIAL_K or n > MAX_MULTINOMIAL_N:
        raise ValueError("enumeration bound exceeded")
    if n < 1:
        raise ValueError("need at least one observation")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    # limit_denominator recovers 1/3 etc. from their float images
    probs = tuple(Fraction(p).limit_denominator(10**9) for p in target.probs)
    rate = Fraction(0)
    for cv in compositions(n, k):
        mass = multinomial_pmf(cv, probs)
        if mass == 0:
            continue
        gof = chi_squared_gof(target, CountVector(target.alphabet, cv))
        if gof.p_value <= alpha:
            rate += mass
    return float(rate)


def sample_run_counts(counts: tuple[int, ...], size: int, seed: int = 0) -> np.ndarray:
    """Run counts of ``size`` uniformly random shuffles of a multiset."""
    rng = np.random.default_rng(seed)
    base = np.repeat(np.arange(len(counts)), counts)
    shuffled = rng.permuted(np.tile(base, (size, 1)), axis=1)
    return 1 + np.count_nonzero(shuffled[:, 1:] != shuffled[:, :-1], axis=1)
