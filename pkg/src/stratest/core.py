"""Domain types shared by every test: alphabets, play sequences, targets, counts."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ActionAlphabet:
    """The k pure strategies of one player, with display labels."""

    k: int
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("alphabet needs at least one action")
        if len(self.labels) != self.k:
            raise ValueError(f"expected {self.k} labels, got {len(self.labels)}")
        if len(set(self.labels)) != self.k:
            raise ValueError("alphabet labels must be distinct")

    @classmethod
    def of_size(cls, k: int) -> ActionAlphabet:
        return cls(k, tuple(f"a{i}" for i in range(k)))

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> ActionAlphabet:
        labels = tuple(labels)
        return cls(len(labels), labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown action label {label!r}") from None


RPS = ActionAlphabet.from_labels("RPS")


@dataclass(frozen=True)
class PlaySequence:
    """Ordered observations of one player's pure strategies, as indices."""

    alphabet: ActionAlphabet
    items: tuple[int, ...]

    def __post_init__(self) -> None:
        items = tuple(int(x) for x in self.items)
        for pos, x in enumerate(items):
            if not 0 <= x < self.alphabet.k:
                raise ValueError(f"value {x} out of range at index {pos}")
        object.__setattr__(self, "items", items)

    @classmethod
    def from_labels(cls, labels: Iterable[str], alphabet: ActionAlphabet) -> PlaySequence:
        """Build from label tokens, e.g. ``PlaySequence.from_labels("RRPS", RPS)``."""
        return cls(alphabet, tuple(alphabet.index(s) for s in labels))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def n(self) -> int:
        return len(self.items)

    def labels(self) -> list[str]:
        return [self.alphabet.labels[i] for i in self.items]


@dataclass(frozen=True)
class MixedStrategy:
    """Probability vector over an alphabet's pure strategies."""

    alphabet: ActionAlphabet
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(p) for p in self.probs)
        if len(probs) != self.alphabet.k:
            raise ValueError(f"expected {self.alphabet.k} probabilities, got {len(probs)}")
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(math.fsum(probs) - 1.0) > PROB_SUM_TOL:
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, alphabet: ActionAlphabet) -> MixedStrategy:
        k = alphabet.k
        # fsum of k copies of 1/k is within an ulp or two of 1
        return cls(alphabet, (1.0 / k,) * k)

    @classmethod
    def pure(cls, alphabet: ActionAlphabet, index: int) -> MixedStrategy:
        probs = [0.0] * alphabet.k
        probs[index] = 1.0
        return cls(alphabet, tuple(probs))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, p in enumerate(self.probs) if p > 0.0)


@dataclass(frozen=True)
class CountVector:
    """Per-category counts of a play sequence; ``n`` is always their sum."""

    alphabet: ActionAlphabet
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != self.alphabet.k:
            raise ValueError(f"expected {self.alphabet.k} counts, got {len(counts)}")
        if any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return sum(self.counts)


def count_categories(seq: PlaySequence) -> CountVector:
    counts = [0] * seq.alphabet.k
    for x in seq.items:
        counts[x] += 1
    return CountVector(seq.alphabet, tuple(counts))


def count_runs(seq: PlaySequence | Sequence[int]) -> int:
    """Number of maximal blocks of identical consecutive categories."""
    items = seq.items if isinstance(seq, PlaySequence) else tuple(seq)
    if not items:
        raise ValueError("empty sequence has no runs")
    return 1 + sum(1 for a, b in zip(items, items[1:]) if a != b)
