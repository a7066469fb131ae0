"""
Arbor Movable Markers.

A computable binary tree built against a sequence of approximated sets of strings, so that none of them is an
infinite antichain of it. Requirement `e` keeps a marker `σ_e`, an element of `A_e` that either stays outside the
tree (requirement `R_e`) or lies in the tree below all but finitely many of its nodes (requirement `S_e`). The sets
are given as stage tables of string codes; code `x` stands for the string `phi_decode(x)`, and naturals that are not
codes never name a string.

Step `s` first splits the leftmost leaf of `T_{s-1}` extending the last `σ̂` of step `s - 1`, then runs the sub-steps
`e < s` in increasing order, each seeing the markers already moved in the same step. The markers must be constant
over the final quarter of the steps.

Imports:
    - json: The construction sidecar.
    - arbor.core.utils.log: LogMixin.

Classes:
    - Verdict: How a requirement is met.
    - MarkerState: The marker tables `σ_e^s` and `σ̂_e^s`.
    - ConstructionTrace: Tree snapshots, split leaves, markers and verdicts.
    - MovableMarker: The construction.

Functions:
    - movable_marker_tree: Run the construction.
    - verify_requirements: The verdict of every requirement.
    - solution_size_bound: The largest antichain of `A_e` through `σ_e` that a met `S_e` allows.
    - write_construction: The tree as CETREE with a JSON sidecar.
"""

import json
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from pathlib import Path

from arbor.core.model.colorings import Approx2Sequence
from arbor.core.model.errors import CheckResult, ErrorCode, WorkbenchError
from arbor.core.model.strings import EPSILON, Str, comparable, format_str, is_prefix_eq, phi_code, phi_decode, pretty
from arbor.core.model.trees import StagedTree
from arbor.core.solvers.brute import brute_force_max_antichain
from arbor.core.utils.constants import EXACT_ANTICHAIN_LIMIT, STABILIZATION_FRACTION
from arbor.core.utils.formats import write_instance
from arbor.core.utils.log import LogMixin, get_logger

logger = get_logger(__name__)

TRACE_SUFFIX = ".trace.json"


class Verdict(str, Enum):
    """
    How requirement `e` is met at the horizon.

    Attributes:
        - R: `σ_e` is in `A_e` and not in the tree.
        - S: `σ_e` is in `A_e` and the tree, and every node added after stabilization extends it.
        - UNRESOLVED: Neither could be confirmed.
    """

    R = "R"
    S = "S"
    UNRESOLVED = "UNRESOLVED"


@lru_cache(maxsize=1 << 12)
def _decode(code: int) -> Str | None:
    try:
        return phi_decode(code)
    except WorkbenchError:
        return None


def stabilization_start(stages: int) -> int:
    """
    First step of the final quarter of `stages` steps.
    """
    return stages - max(1, round(stages * STABILIZATION_FRACTION))


@dataclass(frozen=True)
class MarkerState:
    """
    `sigma[e][s]` is `σ_e^s`, None while undefined; `sigma_hat[e][s]` is `σ̂_e^s`.

    Sub-step `e` first runs at step `e + 1`; before that `σ_e^s` is undefined and `σ̂_e^s` is `σ̂_{e-1}^s`.
    """

    sigma: tuple[tuple[Str | None, ...], ...]
    sigma_hat: tuple[tuple[Str, ...], ...]

    @property
    def count(self) -> int:
        return len(self.sigma)

    def final(self, e: int) -> Str | None:
        return self.sigma[e][-1]

    def final_hat(self, e: int) -> Str:
        return self.sigma_hat[e][-1]

    def moves(self, e: int) -> int:
        """
        Number of steps at which `σ_e` changed.
        """
        row = self.sigma[e]
        return sum(1 for s in range(1, len(row)) if row[s] != row[s - 1])

    def stable_from(self, e: int) -> int:
        """
        The least step from which both `σ_e^s` and `σ̂_e^s` keep their final values.
        """
        row, hats = self.sigma[e], self.sigma_hat[e]
        s = len(row) - 1
        while s > 0 and row[s - 1] == row[-1] and hats[s - 1] == hats[-1]:
            s -= 1
        return s

    def check_stabilized(self, start: int) -> CheckResult:
        """
        Check that every marker is constant from step `start`; the counterexample is the index and its last move.
        """
        for e in range(self.count):
            stable = self.stable_from(e)
            if stable > start:
                return CheckResult.failed(e, stable)
        return CheckResult.passed()

    def to_dict(self) -> dict[str, list[dict[str, object]]]:
        return {
            "markers": [
                {
                    "e": e,
                    "sigma": None if self.final(e) is None else format_str(self.final(e)),
                    "sigma_hat": format_str(self.final_hat(e)),
                    "moves": self.moves(e),
                    "stable_from": self.stable_from(e),
                }
                for e in range(self.count)
            ]
        }


@dataclass(frozen=True)
class ConstructionTrace:
    """
    Attributes:
        snapshots: `T_s` for every step.
        leaves: `τ_s`, the leaf split at step `s`; None at step 0.
        markers: The marker tables.
        stabilization_stage: First step of the window over which the markers are constant.
        verdicts: The verdict of each requirement.
    """

    snapshots: tuple[frozenset[Str], ...]
    leaves: tuple[Str | None, ...]
    markers: MarkerState
    stabilization_stage: int
    verdicts: tuple[Verdict, ...] = ()

    @property
    def stages(self) -> int:
        return len(self.snapshots)

    def added_after(self, stage: int) -> frozenset[Str]:
        """
        Nodes added at steps later than `stage`.
        """
        return self.snapshots[-1] - self.snapshots[stage]

    def to_dict(self) -> dict[str, object]:
        return {
            **self.markers.to_dict(),
            "verdicts": [verdict.value for verdict in self.verdicts],
            "stabilization_stage": self.stabilization_stage,
            "leaves": [None if tau is None else format_str(tau) for tau in self.leaves],
        }


class MovableMarker(LogMixin):
    """
    The marker construction over an approximation table.

    Args:
        approx: The sets `A_e[s]`, as stage tables of string codes.
        stages: Number of steps.
    """

    def __init__(self, approx: Approx2Sequence, stages: int) -> None:
        if stages < 1:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"stages must be at least 1, got {stages}")
        self.approx = approx
        self.stages = stages

    def _candidates(self, e: int, s: int) -> list[Str]:
        """
        Strings of `A_e[s]` whose code is below `s`, by increasing code.
        """
        row = self.approx.members[e][min(s, self.approx.horizon - 1)]
        strings = (_decode(x) for x in sorted(row) if x < s)
        return [sigma for sigma in strings if sigma is not None]

    @staticmethod
    def _split_leaf(tree: frozenset[Str], base: Str) -> Str:
        leaves = [sigma for sigma in tree if is_prefix_eq(base, sigma) and sigma + (0,) not in tree]
        return min(leaves)

    def _sub_step(self, e: int, s: int, tree: frozenset[Str], hat_below: Str) -> tuple[Str | None, Str]:
        sigma = next(
            (tau for tau in self._candidates(e, s) if tau not in tree or is_prefix_eq(hat_below, tau)),
            None,
        )
        hat = sigma if sigma is not None and sigma in tree else hat_below
        return sigma, hat

    def run(self) -> tuple[StagedTree, ConstructionTrace]:
        """
        Run every step.

        Raises:
            WorkbenchError: HORIZON_TOO_SMALL if some marker still moves in the final quarter of the steps.
        """
        count = self.approx.count
        sigma: list[list[Str | None]] = [[] for _ in range(count)]
        sigma_hat: list[list[Str]] = [[] for _ in range(count)]
        tree: frozenset[Str] = frozenset({EPSILON})
        snapshots, leaves = [tree], [None]
        last_hat = EPSILON
        for e in range(count):
            sigma[e].append(None)
            sigma_hat[e].append(EPSILON)

        for s in range(1, self.stages):
            tau = self._split_leaf(tree, last_hat)
            tree = tree | {(*tau, 0), (*tau, 1)}
            snapshots.append(tree)
            leaves.append(tau)
            hat_below = EPSILON
            for e in range(count):
                if e < s:
                    marker, hat_below = self._sub_step(e, s, tree, hat_below)
                else:
                    marker = None
                if marker != sigma[e][-1]:
                    self.logger.debug(f"Step {s}: marker {e} moves to {pretty(marker) if marker else 'undefined'}")
                sigma[e].append(marker)
                sigma_hat[e].append(hat_below)
            last_hat = hat_below

        markers = MarkerState(tuple(map(tuple, sigma)), tuple(map(tuple, sigma_hat)))
        start = stabilization_start(self.stages)
        markers.check_stabilized(start).raise_for(
            ErrorCode.HORIZON_TOO_SMALL, f"markers still move after step {start} of {self.stages}"
        )
        trace = ConstructionTrace(tuple(snapshots), tuple(leaves), markers, start)
        self.logger.info(f"Built a tree of {len(tree)} nodes in {self.stages} steps against {count} sets")
        return StagedTree.from_snapshots(snapshots, branching_bound=2), trace


def _limit_strings(approx: Approx2Sequence, e: int) -> frozenset[Str]:
    strings = (_decode(x) for x in approx.members[e][-1])
    return frozenset(sigma for sigma in strings if sigma is not None)


def solution_size_bound(trace: ConstructionTrace, e: int) -> int | None:
    """
    The largest size of an antichain of the tree through `σ_e` when `S_e` holds.

    Every node added after the stabilization step extends `σ̂_e = σ_e`, so an antichain through `σ_e` uses `σ_e`
    and nodes of the tree at that step incomparable to it.

    Returns:
        The bound, or None when `σ_e` is undefined or outside the tree.
    """
    sigma = trace.markers.final(e)
    if sigma is None or sigma not in trace.snapshots[-1]:
        return None
    return 1 + sum(1 for tau in trace.snapshots[trace.stabilization_stage] if not comparable(sigma, tau))


def _antichain_through(sigma: Str, nodes: frozenset[Str]) -> int:
    others = frozenset(tau for tau in nodes if not comparable(sigma, tau))
    return 1 + len(brute_force_max_antichain(others, exact=len(others) <= EXACT_ANTICHAIN_LIMIT))


def _verdict(trace: ConstructionTrace, approx: Approx2Sequence, e: int) -> Verdict:
    markers, tree = trace.markers, trace.snapshots[-1]
    sigma = markers.final(e)
    if sigma is None or markers.stable_from(e) > trace.stabilization_stage:
        return Verdict.UNRESOLVED
    if phi_code(sigma) not in approx.members[e][-1]:
        return Verdict.UNRESOLVED
    if sigma not in tree:
        return Verdict.R
    later = trace.added_after(trace.stabilization_stage)
    if markers.final_hat(e) != sigma or not all(is_prefix_eq(sigma, tau) for tau in later):
        return Verdict.UNRESOLVED
    bound = solution_size_bound(trace, e)
    size = _antichain_through(sigma, _limit_strings(approx, e) & tree)
    if bound is None or size > bound:
        logger.warning(f"requirement {e}: antichain of size {size} through {pretty(sigma)} exceeds {bound}")
        return Verdict.UNRESOLVED
    return Verdict.S


def verify_requirements(trace: ConstructionTrace, approx: Approx2Sequence) -> tuple[Verdict, ...]:
    """
    Decide how each requirement is met.

    `R_e` needs the final `σ_e` in the last stage of `A_e` and outside the tree. `S_e` needs it in `A_e` and in the
    tree, equal to `σ̂_e`, below every node added after stabilization, and no antichain of `A_e` in the tree through
    it larger than `solution_size_bound`.

    Args:
        trace: The construction trace.
        approx: The approximation table the construction ran against.

    Returns:
        One verdict per set.
    """
    if approx.count != trace.markers.count:
        raise WorkbenchError(
            ErrorCode.DOMAIN_MISMATCH, f"trace has {trace.markers.count} markers, table {approx.count}"
        )
    verdicts = tuple(_verdict(trace, approx, e) for e in range(approx.count))
    unresolved = [e for e, verdict in enumerate(verdicts) if verdict is Verdict.UNRESOLVED]
    if unresolved:
        logger.warning(f"unresolved requirements: {unresolved}")
    return verdicts


def movable_marker_tree(approx: Approx2Sequence, stages: int) -> tuple[StagedTree, ConstructionTrace]:
    """
    Build the binary staged tree against `approx`, and verify its requirements.

    Args:
        approx: The sets `A_e[s]`, as stage tables of string codes.
        stages: Number of steps, and the horizon of the tree.

    Returns:
        The staged tree and its trace, verdicts included.

    Raises:
        WorkbenchError: HORIZON_TOO_SMALL if some marker still moves in the final quarter of the steps.
    """
    tree, trace = MovableMarker(approx, stages).run()
    return tree, replace(trace, verdicts=verify_requirements(trace, approx))


def trace_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + TRACE_SUFFIX)


def write_construction(path: str | Path, tree: StagedTree, trace: ConstructionTrace) -> Path:
    """
    Write the tree as CETREE, and the markers, verdicts and stabilization step next to it.
    """
    path = write_instance(path, tree)
    trace_path(path).write_text(json.dumps(trace.to_dict(), sort_keys=True), encoding="utf-8")
    return path
