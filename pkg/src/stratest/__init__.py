"""Nonparametric test of observed play against a target mixed strategy."""

from stratest.chisq_gof import GofTestResult, chi_squared_gof
from stratest.core import (
    RPS,
    ActionAlphabet,
    CountVector,
    MixedStrategy,
    PlaySequence,
    count_categories,
    count_runs,
)
from stratest.runs_test import RunsTestResult, generalized_runs_test
from stratest.special_fn import chi_squared_sf, std_normal_cdf
from stratest.strategy_test import Component, Decision, StrategyTestReport, strategy_test

__all__ = [
    "RPS",
    "ActionAlphabet",
    "Component",
    "CountVector",
    "Decision",
    "GofTestResult",
    "MixedStrategy",
    "PlaySequence",
    "RunsTestResult",
    "StrategyTestReport",
    "chi_squared_gof",
    "chi_squared_sf",
    "count_categories",
    "count_runs",
    "generalized_runs_test",
    "std_normal_cdf",
    "strategy_test",
]
