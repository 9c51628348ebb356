"""Monte Carlo estimation of threshold exponents and survival curves.

This is the one module where floats are allowed (log-log regression); the
theoretical exponents attached to estimates stay exact rationals.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .densities import XRational, threshold_exponent
from .game import GameConfig, edge_count, play
from .graphs import Graph
from .rng import derive_seed

DEFAULT_BUDGET = 1 << 31


class BudgetExceededError(RuntimeError):
    """Planned work exceeds the configured round budget."""


@dataclass(frozen=True)
class ExperimentPlan:
    """Template for a grid of seeded games: the game parameters minus n,
    plus the board-size grid, trial count and root seed."""

    pattern: Graph
    colors: int
    n_grid: tuple[int, ...]
    trials_per_n: int
    seed_root: int
    strategy: str = "greedy"
    preference: tuple[int, ...] | None = None
    max_rounds: int | None = None  # per-n cap; default is the full process
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "n_grid", tuple(self.n_grid))
        if len(self.n_grid) < 2 or any(
            a >= b for a, b in zip(self.n_grid, self.n_grid[1:])
        ):
            raise ValueError("n_grid must be strictly increasing with >= 2 points")
        if self.trials_per_n < 1:
            raise ValueError("need at least one trial per n")

    def rounds_cap(self, n: int) -> int:
        cap = edge_count(n)
        return cap if self.max_rounds is None else min(cap, self.max_rounds)

    def game_config(self, n: int, trial: int) -> GameConfig:
        return GameConfig(
            n=n,
            pattern=self.pattern,
            colors=self.colors,
            max_rounds=self.rounds_cap(n),
            seed=derive_seed(self.seed_root, n, trial),
            strategy=self.strategy,
            preference=self.preference,
        )


@dataclass(frozen=True)
class TrialOutcome:
    n: int
    trial: int
    seed: int
    duration: int
    survived: bool


@dataclass(frozen=True)
class ExponentEstimate:
    """Per-n duration medians with the fitted log-log slope and its standard
    error, next to the exact theoretical exponent."""

    medians: tuple[tuple[int, float], ...]
    slope: float
    stderr: float
    theoretical: XRational
    outcomes: tuple[TrialOutcome, ...] = field(repr=False)

    def to_json_dict(self) -> dict:
        return {
            "medians": [[n, med] for n, med in self.medians],
            "slope": self.slope,
            "stderr": self.stderr,
            "theoretical_exponent": str(self.theoretical),
        }


def _run_trial(args) -> TrialOutcome:
    plan, n, trial = args
    config = plan.game_config(n, trial)
    record = play(config)
    return TrialOutcome(n, trial, config.seed, record.duration, record.survived)


def _fit_loglog(points) -> tuple[float, float]:
    xs = [math.log(n) for n, _ in points]
    ys = [math.log(d) for _, d in points]
    k = len(xs)
    if k < 2:
        raise ValueError("need at least two grid points")
    mx = sum(xs) / k
    my = sum(ys) / k
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("degenerate grid")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    if k == 2:
        return slope, 0.0
    ss_res = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    stderr = math.sqrt(ss_res / (k - 2) / sxx)
    return slope, stderr


def _check_budget(plan: ExperimentPlan):
    work = sum(plan.rounds_cap(n) for n in plan.n_grid) * plan.trials_per_n
    if work > plan.budget:
        raise BudgetExceededError(
            f"planned worst-case work {work} exceeds budget {plan.budget}"
        )


def run_trials(plan: ExperimentPlan, jobs: int = 1) -> list[TrialOutcome]:
    """All seeded trials of the plan, sorted by (n, trial).  Trial seeds are
    derive_seed(seed_root, n, trial), so grids can be extended without
    perturbing existing trials.  Results are independent of `jobs`."""
    _check_budget(plan)
    args = [(plan, n, t) for n in plan.n_grid for t in range(plan.trials_per_n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_trial, args, chunksize=8))
    else:
        outcomes = [_run_trial(a) for a in args]
    outcomes.sort(key=lambda o: (o.n, o.trial))
    return outcomes


def run_experiment(
    plan: ExperimentPlan,
    jobs: int = 1,
    duration_oracle=None,
) -> ExponentEstimate:
    """Estimate the threshold exponent: regress log median duration on log n.

    `duration_oracle(n, trial, seed) -> duration` replaces the game when
    given (synthetic power-law inputs for calibration tests)."""
    if duration_oracle is not None:
        outcomes = [
            TrialOutcome(
                n,
                t,
                derive_seed(plan.seed_root, n, t),
                duration_oracle(n, t, derive_seed(plan.seed_root, n, t)),
                False,
            )
            for n in plan.n_grid
            for t in range(plan.trials_per_n)
        ]
    else:
        outcomes = run_trials(plan, jobs=jobs)
    medians = []
    for n in plan.n_grid:
        durs = [o.duration for o in outcomes if o.n == n]
        med = float(statistics.median(durs))
        if med <= 0:
            raise ValueError(f"median duration at n={n} is not positive")
        medians.append((n, med))
    slope, stderr = _fit_loglog(medians)
    return ExponentEstimate(
        medians=tuple(medians),
        slope=slope,
        stderr=stderr,
        theoretical=threshold_exponent(plan.pattern, plan.colors),
        outcomes=tuple(outcomes),
    )


def survival_curve(
    pattern: Graph,
    colors: int,
    n: int,
    round_marks,
    trials: int,
    seed_root: int,
    strategy: str = "greedy",
    preference=None,
) -> list[tuple[int, float]]:
    """Monte Carlo survival probabilities: the fraction of trials that last
    strictly beyond each mark, computed on one shared trial set so the curve
    is monotone non-increasing by construction."""
    marks = sorted(set(int(x) for x in round_marks))
    if not marks or marks[0] < 0:
        raise ValueError("round marks must be nonnegative")
    horizon = min(edge_count(n), max(marks))
    results = []
    for trial in range(trials):
        config = GameConfig(
            n=n,
            pattern=pattern,
            colors=colors,
            max_rounds=horizon,
            seed=derive_seed(seed_root, n, trial),
            strategy=strategy,
            preference=preference,
        )
        record = play(config)
        results.append((record.duration, record.survived))
    curve = []
    for mark in marks:
        alive = sum(
            1
            for duration, survived in results
            if survived or duration > min(mark, horizon)
        )
        curve.append((mark, alive / trials))
    return curve


def outcomes_to_csv(outcomes) -> str:
    lines = ["n,trial,seed,duration,survived"]
    for o in outcomes:
        lines.append(
            f"{o.n},{o.trial},{o.seed},{o.duration},{'true' if o.survived else 'false'}"
        )
    return "\n".join(lines) + "\n"
