"""
Arbor Reduction Abstract Base Class Module.

A computable reduction from a problem P to a problem Q is a pair of maps: an instance map turning a P-instance into a
Q-instance, and a solution map turning any Q-solution of that instance back into a P-solution. Every reduction in the
workbench inherits `Reduction`, implements both maps, and supplies brute-force target solutions and random source
instances so that soundness can be checked mechanically.

Imports:
    - json: Report serialization.
    - arbor.core.model.solutions: Solution validation.
    - arbor.core.utils.log: LogMixin.

Classes:
    - ReductionRun: The state of one application of a reduction.
    - ReductionReport: The machine-readable soundness report.
    - Reduction: Abstract base class for reductions.
"""

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np

from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import Solution, validate_solution
from arbor.core.utils.formats import instance_digest, instance_horizon, solution_to_dict
from arbor.core.utils.log import LogMixin
from arbor.core.utils.rich import format_command, format_entity


@dataclass
class ReductionRun:
    """
    One application of a reduction: the source, the target, and whatever the solution map needs to remember.

    Attributes:
        source: The source instance.
        target: The target instance.
        context: Construction state consumed by the solution map (image maps, enumerations, traces).
        assumptions: Horizon assumptions made while mapping.
    """

    source: Any
    target: Any
    context: dict[str, Any] = field(default_factory=dict)
    assumptions: list[str] = field(default_factory=list)

    def assume(self, assumption: str) -> None:
        if assumption not in self.assumptions:
            self.assumptions.append(assumption)


@dataclass(frozen=True)
class ReductionReport:
    """
    Soundness verdict for one target solution.
    """

    reduction: str
    instance_digest: str
    horizon: int
    assumptions: tuple[str, ...]
    soundness: str
    source_solution: Solution | None = None
    counterexample: Any = None

    @property
    def passed(self) -> bool:
        return self.soundness == "pass"

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "reduction": self.reduction,
            "instance_digest": self.instance_digest,
            "horizon": self.horizon,
            "assumptions": list(self.assumptions),
            "soundness": self.soundness,
        }
        if self.source_solution is not None:
            data["solution"] = solution_to_dict(self.source_solution)
        if self.counterexample is not None:
            data["counterexample"] = repr(self.counterexample)
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


class Reduction(ABC, LogMixin):
    """
    Reduction abstract base class. All reductions should inherit from this class.

    Subclasses set `name`, `source_kind`, `target_kind` and `source_types`, and implement `_map_instance`,
    `_map_solution`, `target_solutions` and `random_source`.
    """

    name: ClassVar[str]
    source_kind: ClassVar[str]
    target_kind: ClassVar[str]
    source_types: ClassVar[tuple[type, ...]]

    class UnsoundError(WorkbenchError):
        """
        Raised when a mapped solution fails validation against the source instance.
        """

        def __init__(self, reduction: str, counterexample: Any) -> None:  # noqa: ANN401
            super().__init__(
                ErrorCode.UNSOUND,
                f"{reduction} mapped a valid target solution to an invalid source solution",
                counterexample,
            )

    def map_instance(self, source: Any) -> ReductionRun:  # noqa: ANN401
        """
        Apply the instance map.

        Do not override this method. Override `_map_instance` instead.

        Raises:
            WorkbenchError: TYPE_MISMATCH if the source is not an instance of the reduction's source problem.
        """
        if not isinstance(source, self.source_types):
            raise WorkbenchError(
                ErrorCode.TYPE_MISMATCH,
                f"{self.name} expects a {self.source_kind}, got {type(source).__name__}",
            )
        self.logger.debug(f"Started {format_command('instance map')} of reduction {format_entity(self.name)}")
        run = self._map_instance(source)
        for assumption in run.assumptions:
            self.logger.warning(f"{self.name}: {assumption}")
        self.logger.debug(f"Completed {format_command('instance map')} of reduction {format_entity(self.name)}")
        return run

    def map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        """
        Apply the solution map to a target solution, after checking that it is valid for the target.

        Raises:
            WorkbenchError: INVALID_SOLUTION if the target solution fails validation.
        """
        check = validate_solution(target_solution, run.target)
        if not check:
            raise WorkbenchError(
                ErrorCode.INVALID_SOLUTION,
                f"target solution is not valid for {self.target_kind}",
                check.counterexample,
            )
        return self._map_solution(run, target_solution)

    def check_soundness(self, run: ReductionRun, target_solution: Solution) -> ReductionReport:
        """
        Map a target solution and validate the result against the source.

        Returns:
            The report; `soundness` is "fail" with the counterexample if the mapped solution is invalid.
        """
        source_solution = self.map_solution(run, target_solution)
        check = validate_solution(source_solution, run.source)
        if not check:
            self.logger.error(f"{self.name} is unsound on {target_solution}: {check.counterexample}")
        return ReductionReport(
            reduction=self.name,
            instance_digest=instance_digest(run.source),
            horizon=instance_horizon(run.source),
            assumptions=tuple(run.assumptions),
            soundness="pass" if check else "fail",
            source_solution=source_solution,
            counterexample=None if check else check.counterexample,
        )

    @abstractmethod
    def _map_instance(self, source: Any) -> ReductionRun:  # noqa: ANN401
        raise NotImplementedError

    @abstractmethod
    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        raise NotImplementedError

    @abstractmethod
    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        """
        Valid target solutions found by brute force, used to exercise the solution map.
        """
        raise NotImplementedError

    @abstractmethod
    def random_source(self, rng: np.random.Generator) -> Any:  # noqa: ANN401
        """
        A random source instance small enough for the brute-force solvers.
        """
        raise NotImplementedError

    def _wrong_variant(self, solution: Solution) -> WorkbenchError:
        return WorkbenchError(
            ErrorCode.TYPE_MISMATCH,
            f"{self.name} does not map a {type(solution).__name__} of the {self.target_kind}",
        )
