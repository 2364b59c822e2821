"""Two-player strategic-form games and a test-gated opponent-exploitation loop.

The loop plays the equilibrium for an exploration phase, runs the strategy
test once on the opponent's observed plays, and then either keeps playing
the equilibrium (test accepts) or switches to repeatedly best-responding to
a frequency-count model of the opponent (test rejects).

We are always player 1 (rows); the opponent is player 2 (columns).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from stratest.core import RPS, ActionAlphabet, MixedStrategy, PlaySequence, count_categories
from stratest.strategy_test import StrategyTestReport, strategy_test

TIE_TOL = 1e-12

EQUILIBRIUM_BRANCH = "equilibrium"
EXPLOIT_BRANCH = "exploit"


@dataclass(frozen=True, eq=False)
class StrategicFormGame:
    """Payoff table ``payoffs[i, j] = (u1, u2)`` for row action i, column action j."""

    payoffs: np.ndarray
    row_actions: ActionAlphabet
    col_actions: ActionAlphabet

    def __post_init__(self) -> None:
        table = np.asarray(self.payoffs, dtype=float)
        if table.ndim != 3 or table.shape[2] != 2:
            raise ValueError(f"payoff table must have shape (k1, k2, 2), got {table.shape}")
        if table.shape[:2] != (self.row_actions.k, self.col_actions.k):
            raise ValueError("payoff table does not match the action alphabets")
        table.setflags(write=False)
        object.__setattr__(self, "payoffs", table)

    @classmethod
    def from_table(cls, payoffs) -> StrategicFormGame:
        table = np.asarray(payoffs, dtype=float)
        return cls(table, ActionAlphabet.of_size(table.shape[0]), ActionAlphabet.of_size(table.shape[1]))

    @property
    def k1(self) -> int:
        return self.row_actions.k

    @property
    def k2(self) -> int:
        return self.col_actions.k

    def utility(self, player: int) -> np.ndarray:
        if player not in (1, 2):
            raise ValueError("player must be 1 or 2")
        return self.payoffs[:, :, player - 1]

    @property
    def is_zero_sum(self) -> bool:
        return bool(np.all(self.payoffs[:, :, 0] + self.payoffs[:, :, 1] == 0))


def rock_paper_scissors() -> StrategicFormGame:
    u1 = np.array([[0, -1, 1], [1, 0, -1], [-1, 1, 0]], dtype=float)
    return StrategicFormGame(np.stack([u1, -u1], axis=-1), RPS, RPS)


def parse_game(text: str) -> StrategicFormGame:
    """Parse the plain-text game format.

    First non-comment line: ``k1 k2``.  Then k1 rows, each holding k2
    whitespace-separated ``u1,u2`` cells.  ``#`` starts a comment.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty game file")
    try:
        k1, k2 = (int(x) for x in lines[0].replace(",", " ").split())
    except ValueError:
        raise ValueError(f"bad header {lines[0]!r}, expected 'k1 k2'") from None
    if k1 < 1 or k2 < 1:
        raise ValueError("game dimensions must be positive")
    rows = lines[1:]
    if len(rows) != k1:
        raise ValueError(f"expected {k1} payoff rows, got {len(rows)}")
    table = np.empty((k1, k2, 2))
    for i, row in enumerate(rows):
        cells = row.split()
        if len(cells) != k2:
            raise ValueError(f"row {i + 1}: expected {k2} cells, got {len(cells)}")
        for j, cell in enumerate(cells):
            try:
                u1, u2 = (float(x) for x in cell.split(","))
            except ValueError:
                raise ValueError(f"row {i + 1}, cell {j + 1}: bad payoff pair {cell!r}") from None
            table[i, j] = u1, u2
    return StrategicFormGame.from_table(table)


def format_game(game: StrategicFormGame) -> str:
    out = [f"{game.k1} {game.k2}"]
    for i in range(game.k1):
        out.append(" ".join(f"{game.payoffs[i, j, 0]:g},{game.payoffs[i, j, 1]:g}" for j in range(game.k2)))
    return "\n".join(out) + "\n"


def _own_and_opp_alphabets(game: StrategicFormGame, player: int):
    return (game.row_actions, game.col_actions) if player == 1 else (game.col_actions, game.row_actions)


def _payoff_matrix(game: StrategicFormGame, player: int) -> np.ndarray:
    """Player's utility with their own actions on the rows."""
    u = game.utility(player)
    return u if player == 1 else u.T


def expected_payoff(game: StrategicFormGame, own: MixedStrategy, opp: MixedStrategy, player: int = 1) -> float:
    u = _payoff_matrix(game, player)
    if (own.alphabet.k, opp.alphabet.k) != u.shape:
        raise ValueError(f"strategy sizes {own.alphabet.k}x{opp.alphabet.k} do not match game {u.shape}")
    return math.fsum(
        own.probs[j] * opp.probs[l] * u[j, l] for j in range(u.shape[0]) for l in range(u.shape[1])
    )


def pure_strategy_values(game: StrategicFormGame, opp_probs, player: int = 1) -> np.ndarray:
    u = _payoff_matrix(game, player)
    opp_probs = np.asarray(opp_probs, dtype=float)
    if opp_probs.shape != (u.shape[1],):
        raise ValueError(f"opponent model has {opp_probs.size} entries, game needs {u.shape[1]}")
    return u @ opp_probs


def _best_index(values: np.ndarray) -> int:
    # lowest index among (near-)maximizers
    return int(np.flatnonzero(values >= values.max() - TIE_TOL)[0])


def best_response(game: StrategicFormGame, opp_model: MixedStrategy, player: int = 1) -> MixedStrategy:
    own_alphabet, _ = _own_and_opp_alphabets(game, player)
    values = pure_strategy_values(game, opp_model.probs, player)
    return MixedStrategy.pure(own_alphabet, _best_index(values))


def _model_probs(pseudo: np.ndarray, counts: np.ndarray) -> np.ndarray:
    total = pseudo + counts
    denom = total.sum()
    if denom <= 0:
        raise ValueError("frequency model has no prior mass and no observations")
    return total / denom


def frequency_model(prior_pseudocounts, observations: PlaySequence) -> MixedStrategy:
    """Posterior-mean style estimate: (pseudo_j + n_j) / (sum pseudo + n)."""
    pseudo = np.asarray(prior_pseudocounts, dtype=float)
    if pseudo.shape != (observations.alphabet.k,):
        raise ValueError("pseudocounts do not match the observation alphabet")
    if np.any(pseudo < 0):
        raise ValueError("pseudocounts must be non-negative")
    counts = np.asarray(count_categories(observations).counts, dtype=float)
    probs = _model_probs(pseudo, counts)
    # renormalize against accumulated rounding so MixedStrategy validation holds
    return MixedStrategy(observations.alphabet, tuple(probs / math.fsum(probs)))


# -- opponents ---------------------------------------------------------------


@dataclass(frozen=True)
class StaticMixed:
    strategy: MixedStrategy
    seed: int = 0

    @property
    def k(self) -> int:
        return self.strategy.alphabet.k

    def generate(self, length: int) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        return rng.choice(self.k, size=length, p=np.asarray(self.strategy.probs))


@dataclass(frozen=True)
class Cycle:
    actions: tuple[int, ...]
    k: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.actions:
            raise ValueError("cycle must be nonempty")
        if any(not 0 <= a < self.k for a in self.actions):
            raise ValueError("cycle action out of range")

    def generate(self, length: int) -> np.ndarray:
        return np.resize(np.asarray(self.actions, dtype=int), length)


@dataclass(frozen=True)
class Markov:
    transitions: tuple[tuple[float, ...], ...]
    initial: tuple[float, ...]
    seed: int = 0

    def __post_init__(self) -> None:
        k = len(self.initial)
        table = np.asarray(self.transitions, dtype=float)
        if table.shape != (k, k):
            raise ValueError(f"transition table must be {k}x{k}")
        if np.any(table < 0) or np.any(np.abs(table.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("transition rows must be probability vectors")
        init = np.asarray(self.initial, dtype=float)
        if np.any(init < 0) or abs(init.sum() - 1.0) > 1e-12:
            raise ValueError("initial distribution must be a probability vector")

    @property
    def k(self) -> int:
        return len(self.initial)

    def generate(self, length: int) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        table = np.asarray(self.transitions, dtype=float)
        out = np.empty(length, dtype=int)
        state = rng.choice(self.k, p=np.asarray(self.initial))
        for t in range(length):
            if t:
                state = rng.choice(self.k, p=table[state])
            out[t] = state
        return out


OpponentProcess = StaticMixed | Cycle | Markov


# -- meta-algorithm ----------------------------------------------------------


@dataclass(frozen=True)
class MetaConfig:
    """Settings for one test-gated exploitation run.

    ``equilibrium`` is our own strategy; ``target`` is what the opponent is
    tested against and defaults to ``equilibrium`` (symmetric games).
    """

    explore_steps: int
    horizon: int
    equilibrium: MixedStrategy
    prior_pseudocounts: tuple[float, ...] = ()
    alpha: float = 0.05
    target: MixedStrategy | None = None

    def __post_init__(self) -> None:
        if not 2 <= self.explore_steps <= self.horizon:
            raise ValueError("need 2 <= explore_steps <= horizon")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if any(p < 0 for p in self.prior_pseudocounts):
            raise ValueError("pseudocounts must be non-negative")

    @property
    def test_target(self) -> MixedStrategy:
        return self.target if self.target is not None else self.equilibrium


@dataclass
class MetaTrajectory:
    own_actions: np.ndarray
    opp_actions: np.ndarray
    payoffs: np.ndarray
    test_report: StrategyTestReport
    branch: str
    explore_steps: int
    summary: dict = field(default_factory=dict)

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.payoffs)

    @property
    def total_payoff(self) -> float:
        return float(self.payoffs.sum())

    @property
    def post_exploration_mean(self) -> float:
        tail = self.payoffs[self.explore_steps :]
        return float(tail.mean()) if tail.size else float("nan")

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.summary.items():
            buf.write(f"# {key}: {value}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "own_action", "opp_action", "payoff", "cumulative_payoff"])
        for t, (a, b, u, cu) in enumerate(zip(self.own_actions, self.opp_actions, self.payoffs, self.cumulative), 1):
            writer.writerow([t, int(a), int(b), f"{u:g}", f"{cu:g}"])
        return buf.getvalue()


def run_meta_algorithm(
    game: StrategicFormGame,
    config: MetaConfig,
    opponent: OpponentProcess,
    seed: int = 0,
) -> MetaTrajectory:
    """Explore with the equilibrium, test once, then keep it or exploit.

    The strategy test sees the raw sequence of opponent plays (the runs test
    needs the ordering).  The opponent is oblivious, so its whole action
    stream is drawn up front from its own seed; our own sampling uses
    ``seed``.
    """
    target = config.test_target
    if config.equilibrium.alphabet.k != game.k1 or target.alphabet.k != game.k2:
        raise ValueError("equilibrium/target sizes do not match the game")
    if opponent.k != game.k2:
        raise ValueError("opponent action count does not match the game")
    pseudo = np.asarray(config.prior_pseudocounts or (0.0,) * game.k2, dtype=float)
    if pseudo.shape != (game.k2,):
        raise ValueError("pseudocounts do not match the opponent's action count")

    # distinct entropy from the opponent's default_rng(seed) stream
    rng = np.random.default_rng([seed, 1])
    u1 = game.utility(1)
    E, horizon = config.explore_steps, config.horizon
    opp = opponent.generate(horizon).astype(int)
    own = np.empty(horizon, dtype=int)

    own[:E] = rng.choice(game.k1, size=E, p=np.asarray(config.equilibrium.probs))
    observed = PlaySequence(target.alphabet, tuple(opp[:E].tolist()))
    report = strategy_test(target, observed, config.alpha)

    if not report.rejected:
        branch = EQUILIBRIUM_BRANCH
        own[E:] = rng.choice(game.k1, size=horizon - E, p=np.asarray(config.equilibrium.probs))
    else:
        branch = EXPLOIT_BRANCH
        counts = np.bincount(opp[:E], minlength=game.k2).astype(float)
        response = _best_index(u1 @ _model_probs(pseudo, counts))
        for t in range(E, horizon):
            own[t] = response
            counts[opp[t]] += 1
            response = _best_index(u1 @ _model_probs(pseudo, counts))

    payoffs = u1[own, opp]
    traj = MetaTrajectory(own, opp, payoffs, report, branch, E)
    traj.summary = {
        "branch": branch,
        "decision": report.decision.value,
        "rejected_by": ",".join(sorted(c.value for c in report.rejected_by)) or "-",
        "p_runs": f"{report.runs.p_value:.6g}",
        "p_chi2": f"{report.gof.p_value:.6g}",
        "explore_steps": E,
        "horizon": horizon,
        "seed": seed,
        "total_payoff": f"{traj.total_payoff:g}",
        "post_exploration_mean_payoff": f"{traj.post_exploration_mean:.6g}",
    }
    return traj


def write_trajectory(traj: MetaTrajectory, path: str | Path) -> None:
    Path(path).write_text(traj.to_csv(), encoding="utf-8")
