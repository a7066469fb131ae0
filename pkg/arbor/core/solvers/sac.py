"""
Arbor Antichain Solvers.

Round-based solvers for the antichain problem on completely branching sets. Round `k` searches the restricted set
`S_k` for a finite antichain `A_k` of the size the schedule requires, picks one element `σ_k` of it, and restricts
to the members incomparable to and longer than `σ_k`. The randomized solver picks uniformly; it fails exactly when a
pick leaves only finitely many members, which happens for at most one element of each `A_k`. The advised solver
asks the family's certificate which element that is and avoids it.

Imports:
    - json: Trace records.
    - numpy: The seeded generator behind the uniform picks.
    - arbor.core.utils.log: LogMixin.

Classes:
    - Schedule: Required antichain size per round.
    - SolverState: The chosen elements and the restriction they define.
    - FailReason: Why a run stopped.
    - RoundRecord: One trace record.
    - Success, Fail: Solver outcomes.
    - SacSolver: The round loop shared by both solvers.

Functions:
    - find_antichain_of_size: An antichain of exactly `n` members of a restricted set.
    - bad_element: The element of an antichain leaving finitely many members, if any.
    - probabilistic_sac_solve: Uniform random picks.
    - advised_sac_solve: Certificate-advised picks.
    - write_trace: The JSON-lines trace of a run.
"""

import json
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import Enum
from itertools import islice
from pathlib import Path

import numpy as np

from arbor.core.model.branching import BranchingSet
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import Antichain
from arbor.core.model.strings import Str, format_str, incomparable, phi_code, pretty
from arbor.core.reductions.tac import flip_chain
from arbor.core.utils.log import LogMixin
from arbor.core.utils.sampling import make_rng


@dataclass(frozen=True)
class Schedule:
    """
    Required antichain size per round: `2^(k+2)` by default, `2^(n+k+1)` when shifted by `n`.

    The chance that a uniform pick from `A_k` is the bad element is at most `1 / |A_k|`, so a run fails with
    probability at most the sum of these, which is `bound`.
    """

    shift: int | None = None

    def __post_init__(self) -> None:
        if self.shift is not None and self.shift < 1:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"schedule shift must be positive, got {self.shift}")

    @classmethod
    def shifted(cls, n: int) -> "Schedule":
        return cls(n)

    @classmethod
    def named(cls, name: str, n: int = 1) -> "Schedule":
        """
        The `default` schedule, or the `shifted` one with shift `n`.

        Raises:
            WorkbenchError: BAD_PARAMS for other names.
        """
        if name == "default":
            return cls()
        if name == "shifted":
            return cls.shifted(n)
        raise WorkbenchError(ErrorCode.BAD_PARAMS, f"unknown schedule {name!r}")

    def size(self, k: int) -> int:
        return 2 ** (k + 2) if self.shift is None else 2 ** (self.shift + k + 1)

    def depth_for(self, rounds: int) -> int:
        """
        A represented depth that `rounds` rounds on the one-bad family never search past.

        Round `k` collects members no longer than its first level plus `size(k) - 1`, and its pick is one of them.
        """
        return sum(self.size(k) for k in range(rounds))

    @property
    def bound(self) -> float:
        return 0.5 if self.shift is None else 2.0**-self.shift

    @property
    def name(self) -> str:
        return "default" if self.shift is None else f"shifted-{self.shift}"


@dataclass(frozen=True)
class SolverState:
    """
    Round `k` of a run: `S_k` holds the members incomparable to and longer than every chosen element.
    """

    branching: BranchingSet
    schedule: Schedule = field(default_factory=Schedule)
    chosen: tuple[Str, ...] = ()

    @property
    def round(self) -> int:
        return len(self.chosen)

    @property
    def required_size(self) -> int:
        return self.schedule.size(self.round)

    def restricted(self) -> Iterator[Str]:
        """
        Members of `S_k` in increasing code order.
        """
        return self.branching.stream(self.chosen)

    def admits(self, sigma: Str) -> bool:
        return sigma in self.branching and all(
            incomparable(sigma, tau) and len(sigma) > len(tau) for tau in self.chosen
        )

    def advance(self, sigma: Str) -> "SolverState":
        """
        Choose `sigma` and move to the next round.

        Raises:
            WorkbenchError: DOMAIN_MISMATCH if `sigma` is not in `S_k`.
        """
        if not self.admits(sigma):
            raise WorkbenchError(ErrorCode.DOMAIN_MISMATCH, f"{pretty(sigma)} is not in S_{self.round}", (sigma,))
        return SolverState(self.branching, self.schedule, (*self.chosen, sigma))


def find_antichain_of_size(
    branching: BranchingSet,
    n: int,
    budget: int | None = None,
    *,
    chosen: Iterable[Str] = (),
    stream: Iterable[Str] | None = None,
) -> Antichain:
    """
    Find an antichain of exactly `n` members of a restricted set.

    Members are collected in increasing code order, so every collected prefix of a member arrives before it. The
    collection stops as soon as its maximal elements, which are pairwise incomparable, number `n`, or as soon as it
    holds a chain of `n` members, whose siblings are then pairwise incomparable members of the same restricted set.
    A collection with fewer than `n` maximal elements and no chain of `n` members has at most `(n - 1) * depth`
    elements, which is the default budget.

    Args:
        branching: The completely branching set.
        n: The antichain size.
        budget: Largest number of members collected.
        chosen: Restrict to members incomparable to and longer than these.
        stream: Members to collect from instead of the restricted set.

    Returns:
        The antichain, in increasing code order.

    Raises:
        WorkbenchError: BUDGET_EXHAUSTED if the members run out or the budget is spent first.
    """
    if n <= 0:
        return Antichain(())
    limit = budget if budget is not None else (n - 1) * max(branching.depth, 1) + 1
    source = branching.stream(tuple(chosen)) if stream is None else iter(stream)
    height: dict[Str, int] = {}
    parent: dict[Str, Str | None] = {}
    maximal: dict[Str, None] = {}
    shortest: int | None = None
    for sigma in islice(source, limit):
        shortest = len(sigma) if shortest is None else min(shortest, len(sigma))
        below = _nearest_collected(sigma, height, shortest)
        height[sigma] = 1 if below is None else height[below] + 1
        parent[sigma] = below
        if below is not None:
            # the prefixes of `below` left the maximal elements when it arrived
            maximal.pop(below, None)
        maximal[sigma] = None
        if len(maximal) >= n:
            return Antichain.of(sorted(maximal, key=phi_code)[:n])
        if height[sigma] >= n:
            chain: list[Str] = []
            node: Str | None = sigma
            while node is not None and len(chain) < n:
                chain.append(node)
                node = parent[node]
            return Antichain.of(sorted(flip_chain(chain[::-1], branching.__contains__).nodes, key=phi_code))
    raise WorkbenchError(
        ErrorCode.BUDGET_EXHAUSTED,
        f"no antichain of size {n} among {len(height)} members (budget {limit})",
    )


def _nearest_collected(sigma: Str, collected: Mapping[Str, int], shortest: int) -> Str | None:
    for length in range(len(sigma) - 1, shortest - 1, -1):
        if sigma[:length] in collected:
            return sigma[:length]
    return None


def bad_elements(branching: BranchingSet, antichain: Antichain, chosen: Iterable[Str] = ()) -> list[Str]:
    """
    The elements `σ` of an antichain of `S_k` for which `S_k` restricted by `σ` is finite.

    Raises:
        WorkbenchError: NO_CERTIFICATE for uncertified sets.
    """
    constraints = tuple(chosen)
    if not branching.is_infinite_restriction(constraints):
        return list(antichain.nodes)
    return [sigma for sigma in antichain.nodes if not branching.is_infinite_restriction((*constraints, sigma))]


def bad_element(branching: BranchingSet, antichain: Antichain, chosen: Iterable[Str] = ()) -> Str | None:
    """
    The element of an antichain of `S_k` leaving finitely many members, or None.

    When `S_k` is infinite at most one element is bad; on a finite `S_k` every element is, and the first is returned.

    Raises:
        WorkbenchError: NO_CERTIFICATE for uncertified sets.
    """
    found = bad_elements(branching, antichain, chosen)
    return found[0] if found else None


class FailReason(str, Enum):
    """
    Why a run stopped short of its rounds.

    Attributes:
        - SEARCH_TIMEOUT: The antichain search ran out of members or budget.
        - BAD_CHOICE_COLLAPSE: The certificate shows that the pick of the round left finitely many members.
    """

    SEARCH_TIMEOUT = "SEARCH_TIMEOUT"
    BAD_CHOICE_COLLAPSE = "BAD_CHOICE_COLLAPSE"


@dataclass(frozen=True)
class RoundRecord:
    k: int
    size: int
    chosen: Str | None
    bad_present: bool | None
    outcome: str

    def to_dict(self) -> dict[str, object]:
        return {
            "k": self.k,
            "size": self.size,
            "chosen": None if self.chosen is None else format_str(self.chosen),
            "bad_present": self.bad_present,
            "outcome": self.outcome,
        }


@dataclass(frozen=True)
class Success:
    antichain: Antichain
    trace: tuple[RoundRecord, ...] = ()

    ok = True


@dataclass(frozen=True)
class Fail:
    reason: FailReason
    round: int
    trace: tuple[RoundRecord, ...] = ()

    ok = False


SolverOutcome = Success | Fail

Chooser = Callable[[SolverState, Antichain], Str]


class SacSolver(LogMixin):
    """
    The round loop: search `A_k`, let the chooser pick `σ_k`, restrict.

    Args:
        branching: The completely branching set.
        schedule: Required antichain size per round.
        budget: Per-round collection budget; the search default when None.
    """

    def __init__(self, branching: BranchingSet, schedule: Schedule | None = None, budget: int | None = None) -> None:
        self.branching = branching
        self.schedule = schedule or Schedule()
        self.budget = budget

    def _bad(self, state: SolverState, antichain: Antichain) -> list[Str] | None:
        if not self.branching.certified:
            return None
        return bad_elements(self.branching, antichain, state.chosen)

    def _failure(self, state: SolverState) -> FailReason:
        if self.branching.certified and not self.branching.is_infinite_restriction(state.chosen):
            return FailReason.BAD_CHOICE_COLLAPSE
        return FailReason.SEARCH_TIMEOUT

    def run(self, rounds: int, choose: Chooser) -> SolverOutcome:
        """
        Run `rounds` rounds.

        Returns:
            Success with the chosen elements, or Fail with the round whose pick collapsed the restriction or whose
            search found no antichain.
        """
        state = SolverState(self.branching, self.schedule)
        trace: list[RoundRecord] = []
        for k in range(rounds):
            size = state.required_size
            try:
                antichain = find_antichain_of_size(self.branching, size, self.budget, chosen=state.chosen)
            except WorkbenchError as e:
                if e.code is not ErrorCode.BUDGET_EXHAUSTED:
                    raise
                reason = self._failure(state)
                self.logger.info(f"Round {k} found no antichain of size {size}: {reason.value}")
                trace.append(RoundRecord(k, 0, None, None, reason.value))
                return Fail(reason, k, tuple(trace))
            sigma = choose(state, antichain)
            bad = self._bad(state, antichain)
            if bad is not None and sigma in bad:
                reason = FailReason.BAD_CHOICE_COLLAPSE
                self.logger.info(f"Round {k} picked {pretty(sigma)}, which leaves finitely many members")
                trace.append(RoundRecord(k, len(antichain), sigma, True, reason.value))
                return Fail(reason, k, tuple(trace))
            trace.append(RoundRecord(k, len(antichain), sigma, None if bad is None else bool(bad), "continue"))
            self.logger.debug(f"Round {k}: picked {pretty(sigma)} from an antichain of size {len(antichain)}")
            state = state.advance(sigma)
        self.logger.info(f"Solved {rounds} rounds")
        return Success(Antichain.of(state.chosen), tuple(trace))


def probabilistic_sac_solve(
    branching: BranchingSet,
    rounds: int,
    schedule: Schedule | None = None,
    seed: int | np.random.Generator = 0,
    budget: int | None = None,
) -> SolverOutcome:
    """
    Pick each `σ_k` uniformly from `A_k`, listed in increasing code order.

    Args:
        branching: The completely branching set.
        rounds: Number of rounds, the size of the antichain sought.
        schedule: Required antichain sizes; `2^(k+2)` by default.
        seed: Seed or generator for the uniform picks.
        budget: Per-round collection budget.

    Returns:
        The outcome; on a certified set a failure is a collapse at the round whose pick left finitely many members,
        or a search timeout from the represented depth.
    """
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)

    def choose(_: SolverState, antichain: Antichain) -> Str:
        return antichain.nodes[int(rng.integers(len(antichain)))]

    return SacSolver(branching, schedule, budget).run(rounds, choose)


def advised_sac_solve(
    branching: BranchingSet,
    rounds: int,
    schedule: Schedule | None = None,
    budget: int | None = None,
) -> SolverOutcome:
    """
    Pick the first element of `A_k` that the certificate does not flag as bad.

    Every pick leaves infinitely many members, so a failure can only come from the represented depth.

    Raises:
        WorkbenchError: NO_CERTIFICATE for uncertified sets.
    """
    if not branching.certified:
        raise WorkbenchError(ErrorCode.NO_CERTIFICATE, "advised solving needs a certified family")

    def choose(state: SolverState, antichain: Antichain) -> Str:
        bad = bad_element(branching, antichain, state.chosen)
        return next(sigma for sigma in antichain.nodes if sigma != bad)

    return SacSolver(branching, schedule, budget).run(rounds, choose)


def write_trace(path: str | Path, outcome: SolverOutcome) -> Path:
    """
    Write one JSON record per round.
    """
    path = Path(path)
    lines = [json.dumps(record.to_dict(), sort_keys=True) for record in outcome.trace]
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    return path
