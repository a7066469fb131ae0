"""
Arbor CLI Helpers.

Pieces shared by the workbench commands: turning a `WorkbenchError` into an error panel and an exit code, reading the
run configuration from the Typer context, coercing loaded instances to the type a reduction expects, and dispatching
the named solvers.

Imports:
    - typer: Exits and contexts.
    - rich: Error panels.
    - pandas: CSV reports.

Functions:
    - exit_on_error: Print a workbench error and exit with its code.
    - get_config: The run configuration of the current invocation.
    - with_overrides: The run configuration with command flags applied.
    - output_path: A path in the output directory.
    - coerce_source: Adapt a loaded instance to a reduction's source type.
    - as_branching: The branching set a solver runs on.
    - solve_instance: Run a named solver.
    - write_report: A JSON or CSV report in the output directory.
    - load_instance, load_solution: Read input files, reporting missing ones as parse errors.
"""

import json
import logging
from collections.abc import Callable
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, NoReturn

import pandas as pd
import typer
from rich import print

from arbor.core.model.branching import BranchingSet
from arbor.core.model.colorings import Approx2Sequence, Delta2Instance
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import Solution
from arbor.core.model.strings import EPSILON
from arbor.core.model.trees import FiniteTreeSnapshot, StagedTree
from arbor.core.reductions.base import Reduction
from arbor.core.solvers.brute import brute_force_longest_chain, brute_force_max_antichain
from arbor.core.solvers.sac import Schedule, SolverOutcome, Success, advised_sac_solve, probabilistic_sac_solve
from arbor.core.utils.config import RunConfig
from arbor.core.utils.constants import DEFAULT_STREAM_DEPTH, EXACT_ANTICHAIN_LIMIT, ReportFormat
from arbor.core.utils.formats import Instance, read_instance, read_solution
from arbor.core.utils.rich import error_panel, format_counterexample


def exit_on_error(e: WorkbenchError, logger: logging.Logger, context: str) -> NoReturn:
    """
    Log the error, print it with its counterexample, and exit with the code of its error code.
    """
    message = f"{context}: {e}"
    logger.exception(message)
    if e.counterexample is not None:
        message += f"\nCounterexample: {format_counterexample(e.counterexample)}"
    print(error_panel(message, title=e.code.value))
    raise typer.Exit(code=int(e.code.exit_code)) from e


def get_config(ctx: typer.Context) -> RunConfig:
    config = ctx.obj
    return config if isinstance(config, RunConfig) else RunConfig()


def with_overrides(config: RunConfig, **overrides: Any) -> RunConfig:  # noqa: ANN401
    """
    The configuration with the command flags that were given; unset flags are None and keep the global value.
    """
    return replace(config, **{key: value for key, value in overrides.items() if value is not None})


def output_path(config: RunConfig, name: str) -> Path:
    config.out.mkdir(parents=True, exist_ok=True)
    return config.out / name


def coerce_source(instance: Instance, reduction: Reduction, index: int | None = None) -> Instance:
    """
    Adapt a loaded instance to the source type of a reduction.

    A finite tree becomes a staged tree enumerated at stage 0, and an approximation table becomes the Δ2 instance of
    set `index`.

    Raises:
        WorkbenchError: TYPE_MISMATCH if no adaptation applies.
    """
    if isinstance(instance, reduction.source_types):
        return instance
    if isinstance(instance, FiniteTreeSnapshot) and StagedTree in reduction.source_types:
        return StagedTree.constant(instance)
    if isinstance(instance, BranchingSet) and FiniteTreeSnapshot in reduction.source_types:
        return FiniteTreeSnapshot(instance.tree_nodes())
    if isinstance(instance, Approx2Sequence) and Delta2Instance in reduction.source_types:
        return Delta2Instance(instance, index or 0)
    raise WorkbenchError(
        ErrorCode.TYPE_MISMATCH, f"{reduction.name} expects a {reduction.source_kind}, got {type(instance).__name__}"
    )


def _string_set(instance: Instance) -> FiniteTreeSnapshot | list[tuple[int, ...]]:
    if isinstance(instance, BranchingSet):
        return instance.members()
    if isinstance(instance, StagedTree):
        return instance.final()
    if isinstance(instance, FiniteTreeSnapshot):
        return instance
    raise WorkbenchError(ErrorCode.TYPE_MISMATCH, f"brute-force solvers take trees, got {type(instance).__name__}")


def as_branching(instance: Instance) -> BranchingSet:
    """
    The branching set a solver runs on.

    A certified set is infinite, and its file only shows a finite slice, so it is searched to the full stream depth,
    or past the decisive depth of its family when that is deeper.
    A finite tree becomes the explicit set of its nonempty nodes.

    Raises:
        WorkbenchError: TYPE_MISMATCH for other instances.
    """
    if isinstance(instance, BranchingSet):
        depth = max(DEFAULT_STREAM_DEPTH, instance.family.decisive_depth + 1)
        if instance.certified and instance.depth < depth:
            return BranchingSet(instance.family, depth)
        return instance
    if isinstance(instance, FiniteTreeSnapshot):
        return BranchingSet.explicit(instance.nodes - {EPSILON})
    raise WorkbenchError(
        ErrorCode.TYPE_MISMATCH, f"antichain solvers take branching sets, got {type(instance).__name__}"
    )


@dataclass(frozen=True)
class Solved:
    solution: Solution | None
    outcome: SolverOutcome | None = None


def _brute_antichain(instance: Instance, config: RunConfig) -> Solved:
    nodes = _string_set(instance)
    return Solved(brute_force_max_antichain(nodes, exact=len(nodes) <= EXACT_ANTICHAIN_LIMIT))


def _brute_chain(instance: Instance, config: RunConfig) -> Solved:
    return Solved(brute_force_longest_chain(_string_set(instance)))


def _solved(outcome: SolverOutcome) -> Solved:
    return Solved(outcome.antichain if isinstance(outcome, Success) else None, outcome)


def _prob_sac(instance: Instance, config: RunConfig) -> Solved:
    schedule = Schedule.named(config.schedule, config.schedule_n)
    return _solved(probabilistic_sac_solve(as_branching(instance), config.rounds, schedule, config.seed))


def _advised_sac(instance: Instance, config: RunConfig) -> Solved:
    schedule = Schedule.named(config.schedule, config.schedule_n)
    return _solved(advised_sac_solve(as_branching(instance), config.rounds, schedule))


SOLVERS: dict[str, Callable[[Instance, RunConfig], Solved]] = {
    "brute-antichain": _brute_antichain,
    "brute-chain": _brute_chain,
    "prob-sac": _prob_sac,
    "advised-sac": _advised_sac,
}


def solve_instance(name: str, instance: Instance, config: RunConfig) -> Solved:
    """
    Run a named solver.

    Raises:
        WorkbenchError: BAD_PARAMS for unknown solvers, TYPE_MISMATCH for instances the solver does not take.
    """
    solver = SOLVERS.get(name)
    if solver is None:
        raise WorkbenchError(ErrorCode.BAD_PARAMS, f"unknown solver {name!r}; known: {', '.join(SOLVERS)}")
    return solver(instance, config)


def write_report(config: RunConfig, stem: str, data: dict[str, Any]) -> Path:
    """
    Write a report as `<stem>.json`, or as a one-row `<stem>.csv` when the CSV format is configured.
    """
    path = output_path(config, f"{stem}.{config.format.value}")
    if config.format is ReportFormat.csv:
        flat = {key: json.dumps(value) if isinstance(value, (dict, list)) else value for key, value in data.items()}
        pd.DataFrame([flat]).to_csv(path, index=False)
    else:
        path.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def load_instance(path: Path) -> Instance:
    """
    Read an instance file.

    Raises:
        WorkbenchError: PARSE_ERROR if the file is missing or malformed.
    """
    try:
        return read_instance(path)
    except OSError as e:
        raise WorkbenchError(ErrorCode.PARSE_ERROR, f"cannot read {path}: {e.strerror or e}") from e


def load_solution(path: Path) -> Solution:
    """
    Read a solution file.

    Raises:
        WorkbenchError: PARSE_ERROR if the file is missing or malformed.
    """
    try:
        return read_solution(path)
    except OSError as e:
        raise WorkbenchError(ErrorCode.PARSE_ERROR, f"cannot read {path}: {e.strerror or e}") from e
