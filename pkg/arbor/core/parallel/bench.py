"""
Arbor Solver Bench.

Monte Carlo estimate of the failure rate of the randomized antichain solver. Trial `i` runs the solver with seed
`base + i`; trials are spread over a process pool and collected in trial order, so a base seed and a configuration
always give the same table. The summary compares the observed rate and its Wilson interval with the bound of the
schedule.

Imports:
    - concurrent.futures: The process pool.
    - statistics.NormalDist: The normal quantile of the Wilson interval.
    - pandas: The trial table and its CSV.
    - rich.progress: Trial progress.
    - tabulate: The console summary.

Classes:
    - BenchSummary: Failure count, rate, interval and bound.
    - BenchReport: Trial table and summary.
    - Bench: The bench runner.

Functions:
    - wilson_interval: Wilson score interval of a binomial proportion.
    - run_trial: One seeded solver run.
    - write_bench: The trial table and the summary files.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass
from pathlib import Path
from statistics import NormalDist
from typing import Any

import pandas as pd
from rich.progress import Progress, SpinnerColumn
from tabulate import tabulate

from arbor.core.model.branching import BranchingSet
from arbor.core.solvers.sac import Schedule, Success, probabilistic_sac_solve
from arbor.core.utils.config import RunConfig
from arbor.core.utils.constants import ReportFormat
from arbor.core.utils.log import LogMixin
from arbor.core.utils.rich import get_default_columns

COLUMNS = ["trial", "seed", "outcome", "fail_round", "antichain_size"]


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """
    Two-sided Wilson score interval for `failures / trials`.
    """
    if trials <= 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    z2 = z * z
    rate = failures / trials
    denominator = 1 + z2 / trials
    center = rate + z2 / (2 * trials)
    margin = z * math.sqrt(rate * (1 - rate) / trials + z2 / (4 * trials * trials))
    return max(0.0, (center - margin) / denominator), min(1.0, (center + margin) / denominator)


def run_trial(branching: BranchingSet, rounds: int, schedule: Schedule, trial: int, seed: int) -> dict[str, Any]:
    """
    One solver run, as a row of the trial table.
    """
    outcome = probabilistic_sac_solve(branching, rounds, schedule, seed)
    if isinstance(outcome, Success):
        return {
            "trial": trial,
            "seed": seed,
            "outcome": "SUCCESS",
            "fail_round": None,
            "antichain_size": len(outcome.antichain),
        }
    return {
        "trial": trial,
        "seed": seed,
        "outcome": outcome.reason.value,
        "fail_round": outcome.round,
        "antichain_size": 0,
    }


@dataclass(frozen=True)
class BenchSummary:
    trials: int
    failures: int
    failure_rate: float
    wilson_low: float
    wilson_high: float
    bound: float
    schedule: str
    rounds: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def table(self) -> str:
        return tabulate([list(self.to_dict().values())], headers=list(self.to_dict()), tablefmt="github")


@dataclass(frozen=True)
class BenchReport:
    frame: pd.DataFrame
    summary: BenchSummary


class Bench(LogMixin):
    """
    Run many seeded trials of the randomized solver on one branching set.

    Args:
        branching: The branching set every trial solves.
        config: Seed, trials, rounds, schedule and pool size.
    """

    def __init__(self, branching: BranchingSet, config: RunConfig) -> None:
        config.check_bench()
        self.branching = branching
        self.config = config
        self.schedule = Schedule.named(config.schedule, config.schedule_n)

    def _rows(self, *, progress: bool) -> list[dict[str, Any]]:
        seeds = [(trial, self.config.seed + trial) for trial in range(self.config.trials)]
        workers = self.config.pool_size()
        args = (self.branching, self.config.rounds, self.schedule)
        if workers == 1:
            return [run_trial(*args, trial, seed) for trial, seed in seeds]

        rows = []
        with Progress(SpinnerColumn(), *get_default_columns(), disable=not progress) as bar:
            task = bar.add_task(f"[green]Running {len(seeds)} trials on {workers} workers", total=len(seeds))
            with ProcessPoolExecutor(max_workers=workers) as executor:
                futures = [executor.submit(run_trial, *args, trial, seed) for trial, seed in seeds]
                for future in as_completed(futures):
                    rows.append(future.result())
                    bar.advance(task)
        return sorted(rows, key=lambda row: row["trial"])

    def run(self, *, progress: bool = False) -> BenchReport:
        """
        Run every trial and summarize the failures.
        """
        self.logger.info(
            f"Started a bench of {self.config.trials} trials, {self.config.rounds} rounds, "
            f"schedule {self.schedule.name}"
        )
        frame = pd.DataFrame(self._rows(progress=progress), columns=COLUMNS)
        frame["fail_round"] = frame["fail_round"].astype("Int64")
        failures = int((frame["outcome"] != "SUCCESS").sum())
        trials = len(frame)
        low, high = wilson_interval(failures, trials)
        summary = BenchSummary(
            trials, failures, failures / trials, low, high, self.schedule.bound, self.schedule.name, self.config.rounds
        )
        self.logger.info(f"Bench failure rate {summary.failure_rate:.4f} (bound {summary.bound})")
        return BenchReport(frame, summary)


def write_bench(out_dir: str | Path, report: BenchReport, report_format: ReportFormat = ReportFormat.json) -> Path:
    """
    Write `bench.csv` with one row per trial, and the summary as `bench-summary.json` or `bench-summary.csv`.

    Returns:
        The trial table path.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_path = out_dir / "bench.csv"
    report.frame.to_csv(table_path, index=False)
    summary_path = out_dir / f"bench-summary.{report_format.value}"
    if report_format is ReportFormat.csv:
        pd.DataFrame([report.summary.to_dict()]).to_csv(summary_path, index=False)
    else:
        summary_path.write_text(json.dumps(report.summary.to_dict(), sort_keys=True), encoding="utf-8")
    return table_path
