#!/usr/bin/env python3
"""
Arbor: A workbench for chain and antichain principles on trees.

This module provides the command-line interface for Arbor. It generates instances from the family catalog, applies
registered reductions and checks their soundness, runs the brute-force and antichain solvers, verifies solutions
against instances, and benchmarks the failure rate of the randomized antichain solver.

Imports:
    - pathlib.Path: Class for representing filesystem paths.
    - typer: Library for building CLI applications.
    - rich: Panels and console output.
    - arbor.core.utils.log: Logging setup and run tags.
    - tabulate: Tables of registered reductions.
    - arbor.core.adversary.families: The instance catalog.
    - arbor.core.cli.common: Shared command helpers.
    - arbor.core.parallel.bench: The solver bench.
    - arbor.core.reductions.registry: The registered reductions.
    - arbor.core.utils.config: The run configuration.
    - arbor.core.utils.formats: Instance and solution files.

Functions:
    - global_options: Sets global options for the Arbor CLI.
    - gen_command: Generates an instance of a catalog family.
    - reduce_command: Applies a reduction and checks a target solution.
    - solve_command: Runs a solver on an instance.
    - verify_command: Checks a solution against an instance.
    - bench_command: Estimates the failure rate of the randomized solver.
"""

import importlib.metadata
import time
from pathlib import Path

import typer
from rich import print
from tabulate import tabulate

from arbor.core.adversary.families import GenOptions, generate, one_bad_element_family, parse_family
from arbor.core.adversary.marker import write_construction
from arbor.core.cli.common import (
    as_branching,
    coerce_source,
    exit_on_error,
    get_config,
    load_instance,
    load_solution,
    output_path,
    solve_instance,
    with_overrides,
    write_report,
)
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import validate_solution
from arbor.core.parallel.bench import Bench, write_bench
from arbor.core.reductions.base import Reduction
from arbor.core.reductions.registry import get_reduction, list_reductions
from arbor.core.solvers.sac import Fail, FailReason, Schedule, write_trace
from arbor.core.utils.config import RunConfig
from arbor.core.utils.constants import (
    DEFAULT_FAMILY_DEPTH,
    DEFAULT_ROUNDS,
    HORIZON_HELP,
    OUT_HELP,
    SEED_HELP,
    ExitCode,
    ReportFormat,
)
from arbor.core.utils.formats import (
    instance_digest,
    instance_extension,
    solution_to_dict,
    write_instance,
    write_solution,
)
from arbor.core.utils.log import LogLevel, configure_logging, get_logger, tagged_run
from arbor.core.utils.rich import (
    ARBOR,
    error_panel,
    format_command,
    format_counterexample,
    format_entity,
    success_panel,
    verdict_panel,
    warning_panel,
)

__author__ = "Arbor Development Team"
__license__ = "CC BY-SA 4.0"
__version__ = importlib.metadata.version("arbor")
__status__ = "Development"


arbor_cli = typer.Typer(
    name="Arbor",
    help="""Arbor\n
        A workbench for chain and antichain principles on trees: instances, reductions, solvers and benches""",
    short_help="Arbor",
    no_args_is_help=True,
    pretty_exceptions_show_locals=False,
)

logger = get_logger(__name__)


def version_callback(value: bool) -> None:
    if value:
        print(f"{ARBOR} v{__version__}")
        raise typer.Exit


def _parse_values(values: str | None) -> tuple[int, ...] | None:
    if values is None:
        return None
    try:
        return tuple(int(value) for value in values.split(",") if value.strip())
    except ValueError as e:
        raise WorkbenchError(ErrorCode.BAD_PARAMS, f"colors must be comma-separated integers, got {values!r}") from e


@arbor_cli.callback()
def global_options(
    ctx: typer.Context,
    version: bool = typer.Option(
        False,
        "--version",
        callback=version_callback,
        is_eager=True,
        help="Print the Arbor version and exit.",
    ),
    level: LogLevel = typer.Option(LogLevel.WARNING, help="Logging level."),
    log_dir: Path | None = typer.Option(None, help="Directory to mirror the log of this run to, as arbor.log."),
    config: Path | None = typer.Option(None, help="YAML file of run settings. Flags override its keys."),
    seed: int | None = typer.Option(None, help=SEED_HELP),
    horizon: int | None = typer.Option(None, help=HORIZON_HELP),
    out: Path | None = typer.Option(None, help=OUT_HELP),
    report_format: ReportFormat | None = typer.Option(None, "--format", help="Report format."),
) -> None:
    """
    Global options for Arbor CLI.
    """
    configure_logging(level, log_dir)

    try:
        ctx.obj = RunConfig.load(config, seed=seed, horizon=horizon, out=out, format=report_format)
    except WorkbenchError as e:
        exit_on_error(e, logger, "Invalid run configuration")
    except OSError as e:
        error_message = f"Cannot read configuration {config}: {e}"
        logger.exception(error_message)
        print(error_panel(error_message))
        raise typer.Exit(code=ExitCode.USAGE_ERROR) from None

    logger.info(f"Initialised Arbor CLI v{__version__}")


@arbor_cli.command("gen")
def gen_command(
    ctx: typer.Context,
    family: str = typer.Argument(..., help="Catalog family, as name or name:arg (e.g. rt1k:3, one-bad:4)."),
    depth: int = typer.Option(DEFAULT_FAMILY_DEPTH, help="Depth of trees and branching sets."),
    rounds: int = typer.Option(DEFAULT_ROUNDS, help="Rounds of the one-bad family."),
    shift: int = typer.Option(1, help="Schedule shift the one-bad family is built for."),
    k: int = typer.Option(2, "--k", help="Number of colors."),
    f: str | None = typer.Option(None, "--f", help="Explicit colors of an rt1k coloring, comma-separated."),
    count: int = typer.Option(1, help="Number of sets in approximation tables."),
    stages: int | None = typer.Option(None, help="Steps of the marker construction."),
    tooth: int = typer.Option(0, help="Length of the comb spine."),
    name: str | None = typer.Option(None, help="Output file stem. Defaults to the family name."),
) -> None:
    """
    Generate an instance of a catalog family.
    """
    run_config = get_config(ctx)
    try:
        options = GenOptions(
            depth=depth,
            rounds=rounds,
            shift=shift,
            colors=k,
            values=_parse_values(f),
            horizon=run_config.horizon,
            count=count,
            stages=stages,
            tooth=tooth,
            seed=run_config.seed,
        )
        generated = generate(family, options)
        stem = name or parse_family(family)[0]
        path = output_path(run_config, f"{stem}.{instance_extension(generated.instance)}")
        if generated.trace is not None:
            write_construction(path, generated.instance, generated.trace)
        else:
            write_instance(path, generated.instance)
    except WorkbenchError as e:
        exit_on_error(e, logger, f"Could not generate {family}")

    print(success_panel(f'Generated "{format_entity(family)}" at {path}'))


@arbor_cli.command("reduce")
def reduce_command(
    ctx: typer.Context,
    name: str | None = typer.Argument(None, help="Registered reduction name."),
    instance: Path | None = typer.Argument(None, help="Source instance file."),
    solution: Path | None = typer.Option(None, help="Target solution file to map back and check."),
    index: int | None = typer.Option(None, help="Set index when the source is an approximation table."),
    list_all: bool = typer.Option(False, "--list", help="List the registered reductions and exit."),
) -> None:
    """
    Apply a reduction to an instance, and map a target solution back with a soundness verdict.
    """
    if list_all:
        rows = [(cls.name, cls.source_kind, cls.target_kind) for cls in list_reductions()]
        print(tabulate(rows, headers=["reduction", "source", "target"], tablefmt="github"))
        return
    if name is None or instance is None:
        print(error_panel(f"{format_command('reduce')} needs a reduction name and an instance file"))
        raise typer.Exit(code=ExitCode.USAGE_ERROR)

    run_config = get_config(ctx)
    try:
        reduction = get_reduction(name)
        source = coerce_source(load_instance(instance), reduction, index)
        run = reduction.map_instance(source)
        target_path = write_instance(
            output_path(run_config, f"{name}.target.{instance_extension(run.target)}"), run.target
        )
        data = {
            "reduction": name,
            "instance_digest": instance_digest(source),
            "assumptions": list(run.assumptions),
            "target": str(target_path),
        }
        message = f'Reduced "{instance}" by {format_entity(name)} to {target_path}'
        if solution is not None:
            report = reduction.check_soundness(run, load_solution(solution))
            data.update(report.to_dict())
            if report.source_solution is not None:
                write_solution(output_path(run_config, f"{name}.source.sol"), report.source_solution)
            write_report(run_config, f"{name}.report", data)
            if not report.passed:
                raise Reduction.UnsoundError(name, report.counterexample)
            message += "\nSoundness: pass"
        else:
            write_report(run_config, f"{name}.report", data)
    except WorkbenchError as e:
        exit_on_error(e, logger, f"Could not apply {name}")

    print(success_panel(message))
    if run.assumptions:
        print(warning_panel("\n".join(run.assumptions), title="Holds only within the horizon"))


@arbor_cli.command("solve")
def solve_command(
    ctx: typer.Context,
    solver: str = typer.Argument(..., help="brute-antichain, brute-chain, prob-sac or advised-sac."),
    instance: Path | None = typer.Argument(None, help="Instance file. The antichain solvers default to one-bad."),
    rounds: int | None = typer.Option(None, help="Rounds of the antichain solvers."),
    schedule: str | None = typer.Option(None, help="Antichain size schedule: default or shifted."),
    schedule_n: int | None = typer.Option(None, help="Shift of the shifted schedule."),
) -> None:
    """
    Run a solver, validate its solution and write it with the solver trace.
    """
    start_time = time.time()
    try:
        run_config = with_overrides(get_config(ctx), rounds=rounds, schedule=schedule, schedule_n=schedule_n)
        with tagged_run(f"seed={run_config.seed}"):
            if instance is not None:
                loaded = load_instance(instance)
            elif solver.endswith("-sac"):
                shift = Schedule.named(run_config.schedule, run_config.schedule_n).shift or 1
                loaded = one_bad_element_family(rounds=run_config.rounds, shift=shift)
            else:
                raise WorkbenchError(ErrorCode.BAD_PARAMS, f"{solver} needs an instance file")

            solved = solve_instance(solver, loaded, run_config)
            data: dict[str, object] = {
                "solver": solver,
                "instance_digest": instance_digest(loaded),
                "seed": run_config.seed,
            }
            if solved.outcome is not None:
                data["rounds"] = run_config.rounds
                data["schedule"] = Schedule.named(run_config.schedule, run_config.schedule_n).name
                write_trace(output_path(run_config, f"{solver}.trace.jsonl"), solved.outcome)

            outcome = solved.outcome
            if isinstance(outcome, Fail):
                data.update({"outcome": outcome.reason.value, "fail_round": outcome.round})
                write_report(run_config, f"{solver}.report", data)
            else:
                if solved.solution is None:
                    raise WorkbenchError(ErrorCode.INVALID_SOLUTION, f"{solver} returned no solution")
                check = validate_solution(solved.solution, loaded)
                if not check:
                    raise WorkbenchError(
                        ErrorCode.INVALID_SOLUTION, f"{solver} returned an invalid solution", check.counterexample
                    )
                solution_path = write_solution(output_path(run_config, f"{solver}.sol"), solved.solution)
                data.update({"outcome": "SUCCESS", "solution": solution_to_dict(solved.solution)})
                write_report(run_config, f"{solver}.report", data)
    except WorkbenchError as e:
        exit_on_error(e, logger, f"Could not solve with {solver}")

    if isinstance(outcome, Fail):
        error_message = f"{format_entity(solver)} failed in round {outcome.round}: {outcome.reason.value}"
        logger.error(error_message)
        print(error_panel(error_message, title=outcome.reason.value))
        code = ExitCode.LIMITATION if outcome.reason is FailReason.SEARCH_TIMEOUT else ExitCode.VERIFICATION_FAILURE
        raise typer.Exit(code=code)

    elapsed_time = time.time() - start_time
    print(
        success_panel(
            f"Solved with {format_entity(solver)} in {elapsed_time:.2f} seconds, solution written to {solution_path}",
        ),
    )


@arbor_cli.command("verify")
def verify_command(
    ctx: typer.Context,
    instance: Path = typer.Argument(..., help="Instance file."),
    solution: Path = typer.Argument(..., help="Solution file."),
) -> None:
    """
    Check a solution against an instance. Exits with 0 if it is valid and 1 otherwise.
    """
    run_config = get_config(ctx)
    try:
        loaded = load_instance(instance)
        candidate = load_solution(solution)
        check = validate_solution(candidate, loaded)
        data = {
            "instance_digest": instance_digest(loaded),
            "solution": solution_to_dict(candidate),
            "valid": check.ok,
            "counterexample": None if check else repr(check.counterexample),
        }
        write_report(run_config, "verify", data)
    except WorkbenchError as e:
        exit_on_error(e, logger, f"Could not verify {solution}")

    if check:
        print(verdict_panel(True, f'"{solution}" is a valid {candidate.kind} of "{instance}"'))
        return
    message = f'"{solution}" is not a valid {candidate.kind} of "{instance}"'
    logger.error(f"{message}: {check.counterexample!r}")
    print(verdict_panel(False, f"{message}\nCounterexample: {format_counterexample(check.counterexample)}"))
    raise typer.Exit(code=ExitCode.VERIFICATION_FAILURE)


@arbor_cli.command("bench")
def bench_command(
    ctx: typer.Context,
    instance: Path | None = typer.Argument(None, help="Branching set file. Defaults to the --family instance."),
    family: str = typer.Option("one-bad", help="Catalog family to bench when no instance file is given."),
    trials: int | None = typer.Option(None, help="Number of trials (at least 100)."),
    rounds: int | None = typer.Option(None, help="Rounds per trial."),
    schedule: str | None = typer.Option(None, help="Antichain size schedule: default or shifted."),
    schedule_n: int | None = typer.Option(None, help="Shift of the shifted schedule."),
    workers: int | None = typer.Option(
        None,
        help="Maximum number of worker processes. Defaults to WORKBENCH_WORKERS, then to all logical processors.",
    ),
) -> None:
    """
    Run seeded trials of the randomized antichain solver and summarize its failure rate.
    """
    start_time = time.time()
    try:
        run_config = with_overrides(
            get_config(ctx), trials=trials, rounds=rounds, schedule=schedule, schedule_n=schedule_n, workers=workers
        )
        if instance is not None:
            loaded = load_instance(instance)
        else:
            shift = Schedule.named(run_config.schedule, run_config.schedule_n).shift or 1
            options = GenOptions(rounds=run_config.rounds, shift=shift, seed=run_config.seed)
            loaded = generate(family, options).instance
        report = Bench(as_branching(loaded), run_config).run(progress=True)
        table_path = write_bench(run_config.out, report, run_config.format)
    except WorkbenchError as e:
        exit_on_error(e, logger, "Could not run the bench")

    print(report.summary.table())
    elapsed_time = time.time() - start_time
    print(
        success_panel(
            f"Ran {report.summary.trials} trials in {elapsed_time:.2f} seconds: failure rate "
            f"{report.summary.failure_rate:.4f}, bound {report.summary.bound}. Trials written to {table_path}",
        ),
    )
