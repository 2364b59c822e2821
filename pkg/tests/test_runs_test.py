import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stratest.core import RPS, ActionAlphabet, CountVector, PlaySequence
from stratest.oracle import compositions, exact_run_distribution, sample_run_counts
from stratest.runs_test import generalized_runs_test, runs_moments

sequences = st.lists(st.integers(0, 3), min_size=2, max_size=80).map(
    lambda xs: PlaySequence(ActionAlphabet.of_size(4), xs)
)


class TestWorkedExamples:
    def test_short_example(self, short_example):
        res = generalized_runs_test(short_example)
        assert (res.n, res.r, res.q, res.c) == (9, 5, 33, 129)
        assert res.mu == pytest.approx(57 / 9, rel=1e-12)
        assert res.variance == pytest.approx(1008 / 648, rel=1e-12)
        # 40-digit mpmath: z = -1.0690449676496975, p = 0.28504940740261274
        assert res.z == pytest.approx(-1.0690449676496975, rel=1e-12)
        assert res.p_value == pytest.approx(0.28504940740261274, rel=1e-12)
        assert not res.degenerate

    def test_constant_sequence_is_degenerate(self):
        res = generalized_runs_test(PlaySequence.from_labels("RRRR", RPS))
        assert res.r == 1
        assert res.mu == 1.0
        assert res.sigma == 0.0
        assert res.degenerate
        assert res.p_value == 1.0
        assert res.z == 0.0

    def test_cycle(self, cycle50):
        res = generalized_runs_test(cycle50)
        assert res.r == 50
        assert res.q == 834
        assert res.mu == pytest.approx(34.32, rel=1e-12)
        # mpmath: sigma^2 = 1305056/122500, z = 4.8039616178274853, p = 1.5555666134232235e-06
        assert res.variance == pytest.approx(1305056 / 122500, rel=1e-12)
        assert res.z == pytest.approx(4.8039616178274853, rel=1e-12)
        assert res.p_value == pytest.approx(1.5555666134232235e-06, rel=1e-9)

    def test_too_short(self):
        with pytest.raises(ValueError, match="too short"):
            generalized_runs_test(PlaySequence(RPS, (1,)))
        with pytest.raises(ValueError, match="too short"):
            generalized_runs_test(PlaySequence(RPS, ()))

    def test_two_items(self):
        # counts (1,1): r = 2 always, variance zero
        res = generalized_runs_test(PlaySequence(RPS, (0, 2)))
        assert res.degenerate and res.p_value == 1.0


class TestProperties:
    @given(sequences, st.permutations(range(4)))
    def test_label_invariance(self, seq, perm):
        a = generalized_runs_test(seq)
        b = generalized_runs_test(PlaySequence(seq.alphabet, [perm[x] for x in seq]))
        assert a == b

    @given(sequences)
    def test_reversal_invariance(self, seq):
        rev = PlaySequence(seq.alphabet, tuple(reversed(seq.items)))
        assert generalized_runs_test(rev) == generalized_runs_test(seq)

    @given(sequences)
    def test_p_value_in_range(self, seq):
        res = generalized_runs_test(seq)
        assert 0.0 <= res.p_value <= 1.0
        assert 1 <= res.r <= res.n
        if not res.degenerate:
            assert res.p_value == pytest.approx(2 * 0.5 * math.erfc(abs(res.z) / math.sqrt(2)), rel=1e-12)


class TestAgainstOracles:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_exact_moments(self, k):
        alphabet = ActionAlphabet.of_size(k)
        for n in range(2, 11):
            for cv in compositions(n, k):
                dist = exact_run_distribution(CountVector(alphabet, cv))
                mean, var = runs_moments(cv)
                assert mean == pytest.approx(float(dist.mean()), rel=1e-9)
                assert var == pytest.approx(float(dist.variance()), rel=1e-9, abs=1e-12)

    def test_exact_moments_four_categories(self):
        alphabet = ActionAlphabet.of_size(4)
        for cv in [(1, 2, 3, 2), (3, 3, 1, 1), (2, 2, 2, 2), (5, 1, 1, 1)]:
            dist = exact_run_distribution(CountVector(alphabet, cv))
            mean, var = runs_moments(cv)
            assert Fraction(mean).limit_denominator(10**6) == dist.mean()
            assert var == pytest.approx(float(dist.variance()), rel=1e-9)

    def test_monte_carlo_cycle_counts(self):
        size = 200_000
        r = sample_run_counts((17, 17, 16), size, seed=11)
        mean, var = runs_moments((17, 17, 16))
        se_mean = math.sqrt(var / size)
        # standard error of the sample variance: sqrt((m4 - var^2) / size)
        m4 = np.mean((r - r.mean()) ** 4)
        se_var = math.sqrt((m4 - r.var() ** 2) / size)
        assert abs(r.mean() - mean) < 3 * se_mean
        assert abs(r.var(ddof=1) - var) < 3 * se_var
