import math
from pathlib import Path

import pandas as pd
import pytest

from arbor.core.adversary.families import one_bad_element_family
from arbor.core.model.branching import BranchingSet, PerfectBinaryFamily
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.parallel.bench import COLUMNS, Bench, run_trial, wilson_interval, write_bench
from arbor.core.solvers.sac import Schedule
from arbor.core.utils.config import RunConfig
from arbor.core.utils.constants import DEFAULT_ROUNDS, ReportFormat


@pytest.fixture
def config() -> RunConfig:
    """
    A serial bench of the minimum size.

    Returns:
        The run configuration.
    """
    return RunConfig(seed=10, trials=100, rounds=2, workers=1)


def test_wilson_interval() -> None:
    """
    Test the interval against reference values, at the edges and for symmetry.
    """
    assert wilson_interval(50, 100) == pytest.approx((0.40383, 0.59617), abs=1e-3)
    low, high = wilson_interval(0, 100)
    assert low == pytest.approx(0.0, abs=1e-12)
    assert high == pytest.approx(0.036994, abs=1e-4)
    assert wilson_interval(0, 0) == (0.0, 1.0)
    low, high = wilson_interval(0, 10)
    assert low == pytest.approx(0.0, abs=1e-12)
    assert 0.0 < high < 0.5
    low, high = wilson_interval(5, 10)
    assert low + high == pytest.approx(1.0)
    assert low < 0.5 < high


def test_run_trial_rows() -> None:
    """
    Test the trial row of a successful run.
    """
    row = run_trial(BranchingSet(PerfectBinaryFamily(), 12), 2, Schedule(), trial=3, seed=13)
    assert row == {"trial": 3, "seed": 13, "outcome": "SUCCESS", "fail_round": None, "antichain_size": 2}


def test_bench_needs_enough_trials() -> None:
    """
    Test that small benches are refused.
    """
    with pytest.raises(WorkbenchError) as excinfo:
        Bench(BranchingSet(PerfectBinaryFamily(), 12), RunConfig(trials=10))
    assert excinfo.value.code == ErrorCode.BAD_PARAMS


def test_bench_on_perfect_tree(config: RunConfig) -> None:
    """
    Test that the perfect binary tree never fails.

    Args:
        config: The run configuration.
    """
    report = Bench(BranchingSet(PerfectBinaryFamily(), 12), config).run()
    assert list(report.frame.columns) == COLUMNS
    assert list(report.frame["seed"]) == list(range(10, 110))
    assert report.summary.failures == 0
    assert report.summary.bound == 0.5
    assert report.summary.schedule == "default"


def test_bench_on_one_bad_family(config: RunConfig) -> None:
    """
    Test that failures on the one-bad family are collapses, and that the bench is reproducible.

    Args:
        config: The run configuration.
    """
    branching = one_bad_element_family(rounds=3)
    report = Bench(branching, config).run()
    assert set(report.frame["outcome"]) <= {"SUCCESS", "BAD_CHOICE_COLLAPSE"}
    summary = report.summary
    assert summary.failures == int((report.frame["outcome"] != "SUCCESS").sum())
    assert summary.wilson_low <= summary.failure_rate <= summary.wilson_high
    assert Bench(branching, config).run().frame.equals(report.frame)


def test_write_bench(tmp_path: Path, config: RunConfig) -> None:
    """
    Test the trial table and both summary formats.

    Args:
        tmp_path: Temporary directory.
        config: The run configuration.
    """
    report = Bench(BranchingSet(PerfectBinaryFamily(), 12), config).run()
    table = write_bench(tmp_path / "out", report)
    assert table.name == "bench.csv"
    assert len(pd.read_csv(table)) == 100
    assert (tmp_path / "out" / "bench-summary.json").exists()

    write_bench(tmp_path / "out", report, ReportFormat.csv)
    summary = pd.read_csv(tmp_path / "out" / "bench-summary.csv")
    assert int(summary["trials"][0]) == 100


@pytest.mark.slow
def test_default_schedule_failure_bound() -> None:
    """
    Test the failure rate of 2000 trials on the one-bad family against the default schedule's bound.
    """
    report = Bench(one_bad_element_family(), RunConfig(seed=0, trials=2000, rounds=DEFAULT_ROUNDS)).run()
    assert set(report.frame["outcome"]) <= {"SUCCESS", "BAD_CHOICE_COLLAPSE"}
    assert 0.25 <= report.summary.failure_rate <= 0.5 + 3 * math.sqrt(0.25 / 2000)


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
def test_shifted_schedule_failure_bound(n: int) -> None:
    """
    Test the failure rate of 2000 trials against the bound `2^-n` of the schedule shifted by `n`.

    Args:
        n: The shift.
    """
    config = RunConfig(seed=0, trials=2000, rounds=DEFAULT_ROUNDS, schedule="shifted", schedule_n=n)
    report = Bench(one_bad_element_family(shift=n), config).run()
    bound = 2.0**-n
    assert report.summary.bound == bound
    assert set(report.frame["outcome"]) <= {"SUCCESS", "BAD_CHOICE_COLLAPSE"}
    assert bound / 2 <= report.summary.failure_rate <= bound + 3 * math.sqrt(bound / 2000)
