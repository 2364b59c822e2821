"""Command-line front end.

    stratest test SEQ.csv [--target P1,P2,...] [--alpha A]
    stratest batch DATASET_DIR [--alpha A]... [--out subjects.csv]
    stratest calibrate --n 50 --trials 100000 [--alpha A] [--seed S]
    stratest meta [--game FILE] --opponent SPEC [--explore E] [--horizon H]

Exit codes: 0 accept / success, 1 reject (``test`` only), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.stats import binomtest

from stratest.core import ActionAlphabet, MixedStrategy, PlaySequence
from stratest.ingest import load_dataset, parse_sequence_file
from stratest.simulate import (
    Cycle,
    Markov,
    MetaConfig,
    StaticMixed,
    StrategicFormGame,
    parse_game,
    rock_paper_scissors,
    run_meta_algorithm,
)
from stratest.strategy_test import Component, StrategyTestReport, check_alpha, strategy_test

log = logging.getLogger("stratest")

EXIT_ACCEPT, EXIT_REJECT, EXIT_ERROR = 0, 1, 2

CLASS_BOTH = "both"
CLASS_CHI2_ONLY = "chi2_only"
CLASS_RUNS_ONLY = "runs_only"
CLASS_NEITHER = "neither"
CLASSES = (CLASS_BOTH, CLASS_CHI2_ONLY, CLASS_RUNS_ONLY, CLASS_NEITHER)


class UsageError(ValueError):
    pass


def parse_probs(text: str, k: int | None = None) -> tuple[float, ...]:
    """Parse ``"0.25,0.6,0.15"`` or ``"1/3,1/3,1/3"``; ``"uniform"`` needs ``k``."""
    text = text.strip()
    if text == "uniform":
        if k is None:
            raise UsageError("'uniform' needs a known number of actions")
        return (1.0 / k,) * k
    try:
        return tuple(float(Fraction(tok.strip())) for tok in text.split(",") if tok.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse probability vector {text!r}") from None


def make_target(text: str, k: int | None = None) -> MixedStrategy:
    probs = parse_probs(text, k)
    return MixedStrategy(ActionAlphabet.of_size(len(probs)), probs)


# -- batch classification ----------------------------------------------------


@dataclass(frozen=True)
class BatchSummary:
    """Subjects per joint outcome at one alpha (each subtest at alpha / 2)."""

    alpha: float
    x1: int  # both significant
    x2: int  # only chi-squared
    x3: int  # only runs
    x4: int  # neither

    @property
    def total(self) -> int:
        return self.x1 + self.x2 + self.x3 + self.x4


def classify(report: StrategyTestReport) -> str:
    runs = Component.RUNS in report.rejected_by
    chi2 = Component.CHI2 in report.rejected_by
    if runs and chi2:
        return CLASS_BOTH
    if chi2:
        return CLASS_CHI2_ONLY
    if runs:
        return CLASS_RUNS_ONLY
    return CLASS_NEITHER


def summarize(classes: list[str], alpha: float) -> BatchSummary:
    tally = {c: 0 for c in CLASSES}
    for c in classes:
        tally[c] += 1
    return BatchSummary(alpha, *(tally[c] for c in CLASSES))


@dataclass
class BatchResult:
    summaries: list[BatchSummary]
    rows: list[dict]
    failures: list[tuple[str, str]]


def run_batch(directory, target: MixedStrategy, alphas: list[float], recursive: bool = False) -> BatchResult:
    loaded = load_dataset(directory, target.alphabet, recursive=recursive)
    failures = list(loaded.failures)
    rows = []
    per_alpha: dict[float, list[str]] = {a: [] for a in alphas}
    for rec in loaded.records:
        try:
            reports = {a: strategy_test(target, rec.sequence, a) for a in alphas}
        except ValueError as exc:
            failures.append((rec.subject_id, str(exc)))
            continue
        first = next(iter(reports.values()))
        row = {
            "subject_id": rec.subject_id,
            "n": rec.sequence.n,
            "runs": first.runs.r,
            "p_runs": first.runs.p_value,
            "p_chi2": first.gof.p_value,
        }
        for a, rep in reports.items():
            cls = classify(rep)
            row[f"class@{a:g}"] = cls
            per_alpha[a].append(cls)
        rows.append(row)
    return BatchResult([summarize(per_alpha[a], a) for a in alphas], rows, sorted(failures))


def batch_csv(result: BatchResult) -> str:
    buf = io.StringIO()
    if not result.rows:
        return ""
    fields = list(result.rows[0])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in result.rows:
        writer.writerow([f"{row[f]:.6g}" if isinstance(row[f], float) else row[f] for f in fields])
    return buf.getvalue()


def format_summary_table(summaries: list[BatchSummary]) -> str:
    lines = [f"{'alpha':>8} {'X1':>6} {'X2':>6} {'X3':>6} {'X4':>6} {'total':>6}"]
    for s in summaries:
        lines.append(f"{s.alpha:>8g} {s.x1:>6d} {s.x2:>6d} {s.x3:>6d} {s.x4:>6d} {s.total:>6d}")
    lines.append("X1 both significant, X2 only chi-squared, X3 only runs, X4 neither")
    return "\n".join(lines)


# -- calibration -------------------------------------------------------------


@dataclass(frozen=True)
class RejectionRate:
    rejections: int
    trials: int
    ci_low: float
    ci_high: float

    @property
    def rate(self) -> float:
        return self.rejections / self.trials


def _rate(rejections: int, trials: int) -> RejectionRate:
    ci = binomtest(rejections, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return RejectionRate(rejections, trials, ci.low, ci.high)


def calibrate(target: MixedStrategy, n: int, trials: int, alpha: float, seed: int = 0) -> dict[str, RejectionRate]:
    """Rejection rates of each subtest and the combined test under i.i.d. target play."""
    if trials < 1:
        raise UsageError("trials must be at least 1")
    if n < 2:
        raise UsageError("n must be at least 2")
    alpha = check_alpha(alpha)
    rng = np.random.default_rng(seed)
    draws = rng.choice(target.alphabet.k, size=(trials, n), p=np.asarray(target.probs))
    runs = chi2 = combined = 0
    for row in draws:
        rep = strategy_test(target, PlaySequence(target.alphabet, tuple(row.tolist())), alpha)
        runs += Component.RUNS in rep.rejected_by
        chi2 += Component.CHI2 in rep.rejected_by
        combined += rep.rejected
    return {"runs": _rate(runs, trials), "chi2": _rate(chi2, trials), "combined": _rate(combined, trials)}


# -- opponents ---------------------------------------------------------------


def parse_opponent(spec: str, game: StrategicFormGame, seed: int):
    """``uniform`` | ``static:P,...`` | ``cycle:A,B,...`` | ``markov:ROW/ROW/...``."""
    kind, _, arg = spec.partition(":")
    k = game.k2
    if kind == "uniform":
        return StaticMixed(MixedStrategy.uniform(game.col_actions), seed)
    if kind == "static":
        return StaticMixed(MixedStrategy(game.col_actions, parse_probs(arg, k)), seed)
    if kind == "cycle":
        tokens = [t.strip() for t in arg.split(",") if t.strip()]
        actions = []
        for tok in tokens:
            if tok in game.col_actions.labels:
                actions.append(game.col_actions.index(tok))
            else:
                try:
                    actions.append(int(tok))
                except ValueError:
                    raise UsageError(f"unknown cycle action {tok!r}") from None
        return Cycle(tuple(actions), k, seed)
    if kind == "markov":
        rows = tuple(parse_probs(r, k) for r in arg.split("/"))
        return Markov(rows, (1.0 / k,) * k, seed)
    raise UsageError(f"unknown opponent spec {spec!r}")


# -- rendering ---------------------------------------------------------------


def render_report(report: StrategyTestReport) -> str:
    r, g = report.runs, report.gof
    lines = [
        f"n          {r.n}",
        f"runs       r={r.r}  mu={r.mu:.6g}  sigma={r.sigma:.6g}  z={r.z:.6g}  p_r={r.p_value:.6g}"
        + ("  [degenerate]" if r.degenerate else ""),
        f"chi2       T={g.statistic:.6g}  df={g.df}  p_chi={g.p_value:.6g}"
        + (f"  [{', '.join(sorted(g.warnings))}]" if g.warnings else ""),
        f"alpha      {report.alpha:g} (each subtest at {report.alpha / 2:g})",
        f"decision   {report.decision.value}",
        f"rejected   {', '.join(sorted(c.value for c in report.rejected_by)) or '-'}",
    ]
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------


def cmd_test(args) -> int:
    content = Path(args.sequence_file).read_text(encoding="utf-8")
    if args.target == "uniform":
        k = args.k or 3
        target = MixedStrategy.uniform(ActionAlphabet.of_size(k))
    else:
        target = make_target(args.target)
        if args.k and args.k != target.alphabet.k:
            raise UsageError(f"--k {args.k} does not match a {target.alphabet.k}-entry target")
    seq = parse_sequence_file(content, target.alphabet)
    report = strategy_test(target, seq, args.alpha)
    print(render_report(report))
    return EXIT_REJECT if report.rejected else EXIT_ACCEPT


def cmd_batch(args) -> int:
    k = args.k or 3
    target = MixedStrategy.uniform(ActionAlphabet.of_size(k)) if args.target == "uniform" else make_target(args.target)
    alphas = [check_alpha(a) for a in (args.alpha or [0.05, 0.025])]
    result = run_batch(args.dataset_dir, target, alphas, recursive=args.recursive)
    if not result.rows:
        log.warning("no subjects parsed from %s", args.dataset_dir)
    print(f"subjects: {len(result.rows)}  failures: {len(result.failures)}")
    print(format_summary_table(result.summaries))
    for subject_id, message in result.failures:
        print(f"failed: {subject_id}: {message}")
    if args.out:
        Path(args.out).write_text(batch_csv(result), encoding="utf-8")
    return EXIT_ACCEPT


def cmd_calibrate(args) -> int:
    target = MixedStrategy.uniform(ActionAlphabet.of_size(args.k or 3)) if args.target == "uniform" else make_target(args.target)
    rates = calibrate(target, args.n, args.trials, args.alpha, args.seed)
    print(f"target={','.join(f'{p:g}' for p in target.probs)} n={args.n} trials={args.trials} alpha={args.alpha:g} seed={args.seed}")
    for name, r in rates.items():
        print(f"{name:<9} rate={r.rate:.6f}  ({r.rejections}/{r.trials})  95% CI [{r.ci_low:.6f}, {r.ci_high:.6f}]")
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["test", "rejections", "trials", "rate", "ci_low", "ci_high"])
            for name, r in rates.items():
                writer.writerow([name, r.rejections, r.trials, f"{r.rate:.6g}", f"{r.ci_low:.6g}", f"{r.ci_high:.6g}"])
    return EXIT_ACCEPT


def cmd_meta(args) -> int:
    if args.game in (None, "rps"):
        game = rock_paper_scissors()
    else:
        game = parse_game(Path(args.game).read_text(encoding="utf-8"))
    if args.equilibrium == "uniform":
        equilibrium = MixedStrategy.uniform(game.row_actions)
    else:
        equilibrium = MixedStrategy(game.row_actions, parse_probs(args.equilibrium, game.k1))
    target = None
    if args.target is not None:
        target = MixedStrategy(game.col_actions, parse_probs(args.target, game.k2))
    elif game.k1 != game.k2:
        raise UsageError("non-square game: pass --target for the opponent")
    prior = parse_probs(args.prior) if args.prior else ()
    config = MetaConfig(args.explore, args.horizon, equilibrium, prior, args.alpha, target)
    opp_seed = args.opponent_seed if args.opponent_seed is not None else args.seed
    opponent = parse_opponent(args.opponent, game, opp_seed)
    traj = run_meta_algorithm(game, config, opponent, seed=args.seed)
    print(f"branch     {traj.branch}")
    print(render_report(traj.test_report))
    print(f"payoff     total={traj.total_payoff:g}  post-exploration mean={traj.post_exploration_mean:.6g}")
    if args.out:
        Path(args.out).write_text(traj.to_csv(), encoding="utf-8")
    return EXIT_ACCEPT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stratest", description="Test observed play against a target mixed strategy.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test one play sequence")
    p.add_argument("sequence_file")
    p.add_argument("--target", default="uniform", help="P1,P2,... (fractions allowed) or 'uniform'")
    p.add_argument("--k", type=int, help="number of actions when --target is 'uniform' (default 3)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("batch", help="classify every subject in a dataset directory")
    p.add_argument("dataset_dir")
    p.add_argument("--target", default="uniform")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=float, action="append", help="repeatable; default 0.05 and 0.025")
    p.add_argument("--recursive", action="store_true", help="also read CSV files in subdirectories")
    p.add_argument("--out", help="per-subject CSV path")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("calibrate", help="empirical rejection rates under i.i.d. target play")
    p.add_argument("--target", default="uniform")
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("meta", help="simulate test-gated opponent exploitation")
    p.add_argument("--game", help="game file, or 'rps' (default)")
    p.add_argument("--opponent", required=True, help="uniform | static:P,... | cycle:A,B,... | markov:ROW/ROW/...")
    p.add_argument("--equilibrium", default="uniform", help="our strategy (default uniform)")
    p.add_argument("--target", help="opponent's tested strategy (default: same as --equilibrium)")
    p.add_argument("--prior", help="pseudocounts for the opponent model")
    p.add_argument("--explore", type=int, default=50)
    p.add_argument("--horizon", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--opponent-seed", type=int)
    p.add_argument("--out", help="trajectory CSV path")
    p.set_defaults(func=cmd_meta)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
