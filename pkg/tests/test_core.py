import pytest
from hypothesis import given
from hypothesis import strategies as st

from stratest.core import (
    RPS,
    ActionAlphabet,
    CountVector,
    MixedStrategy,
    PlaySequence,
    count_categories,
    count_runs,
)

sequences = st.lists(st.integers(0, 3), max_size=60).map(lambda xs: PlaySequence(ActionAlphabet.of_size(4), xs))


class TestTypes:
    def test_alphabet_validation(self):
        with pytest.raises(ValueError):
            ActionAlphabet(0, ())
        with pytest.raises(ValueError):
            ActionAlphabet(2, ("a", "a"))
        with pytest.raises(ValueError):
            ActionAlphabet(3, ("a", "b"))
        assert ActionAlphabet.of_size(3).labels == ("a0", "a1", "a2")

    def test_sequence_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            PlaySequence(RPS, (0, 3))

    def test_from_labels(self, short_example):
        assert short_example.items == (0, 0, 1, 1, 1, 2, 1, 0, 0)
        assert "".join(short_example.labels()) == "RRPPPSPRR"

    def test_mixed_strategy_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum to 1"):
            MixedStrategy(RPS, (0.3, 0.3, 0.3))
        with pytest.raises(ValueError):
            MixedStrategy(RPS, (1.5, -0.5, 0.0))
        assert MixedStrategy.uniform(ActionAlphabet.of_size(7)).support == tuple(range(7))
        assert MixedStrategy.pure(RPS, 1).probs == (0.0, 1.0, 0.0)

    def test_count_vector_validation(self):
        with pytest.raises(ValueError):
            CountVector(RPS, (1, -1, 0))
        assert CountVector(RPS, (4, 4, 1)).n == 9


class TestCountCategories:
    def test_short_example(self, short_example):
        cv = count_categories(short_example)
        assert cv.counts == (4, 4, 1)
        assert cv.n == 9

    def test_empty(self):
        cv = count_categories(PlaySequence(RPS, ()))
        assert cv.counts == (0, 0, 0)
        assert cv.n == 0

    def test_cycle(self, cycle50):
        assert count_categories(cycle50).counts == (17, 17, 16)

    @given(sequences)
    def test_sum_reproduces_n(self, seq):
        assert count_categories(seq).n == len(seq)


class TestCountRuns:
    def test_short_example(self, short_example):
        assert count_runs(short_example) == 5

    def test_single_run(self):
        assert count_runs(PlaySequence.from_labels("RRRR", RPS)) == 1

    def test_cycle(self, cycle50):
        assert count_runs(cycle50) == 50

    def test_empty_raises(self):
        with pytest.raises(ValueError, match="empty sequence has no runs"):
            count_runs(PlaySequence(RPS, ()))

    @given(sequences.filter(len), st.permutations(range(4)))
    def test_relabeling_invariance(self, seq, perm):
        relabeled = PlaySequence(seq.alphabet, [perm[x] for x in seq])
        assert count_runs(relabeled) == count_runs(seq)

    @given(sequences.filter(len))
    def test_bounds(self, seq):
        r = count_runs(seq)
        assert len(set(seq)) <= r <= len(seq)
