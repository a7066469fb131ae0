"""
Arbor Solutions.

The solution variants of the chain-antichain and Ramsey-type problems, and `validate_solution`, which checks any
variant against any instance it makes sense for. A failed validation reports the first violating pair or triple.

Classes:
    - Chain: Strings strictly increasing under the prefix order.
    - Antichain: Pairwise incomparable strings.
    - Path: A chain of immediate extensions.
    - HomogeneousSet: Naturals whose pairs (or members) all have one color.
    - WeaklyHomogeneousSet: Naturals whose consecutive pairs all have one color.
    - TransitiveSet: Naturals on which every color is transitive.
    - SemiHereditarySet: Naturals on which the coloring is semi-hereditary for a color.
    - SemiAncestralSet: Naturals on which the coloring has semi-ancestry for a color.
    - AscendingSeq: Naturals increasing in both the natural and the instance order.
    - DescendingSeq: Naturals increasing naturally and decreasing in the instance order.

Functions:
    - validate_solution: Check a solution against an instance.
"""

from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Union

from arbor.core.model.branching import BranchingSet
from arbor.core.model.colorings import (
    Delta2Instance,
    LinearOrderInstance,
    PairColoring,
    UnaryColoring,
    check_homogeneous,
    check_semi_ancestry,
    check_semi_hereditary,
    check_transitive,
    check_weakly_homogeneous,
)
from arbor.core.model.errors import CheckResult, ErrorCode, WorkbenchError
from arbor.core.model.strings import EPSILON, Str, comparable, is_prefix, pretty
from arbor.core.model.trees import FiniteTreeSnapshot, StagedTree


@dataclass(frozen=True)
class Chain:
    nodes: tuple[Str, ...]

    kind = "chain"

    @classmethod
    def of(cls, nodes: Iterable[Str]) -> "Chain":
        return cls(tuple(tuple(sigma) for sigma in nodes))


@dataclass(frozen=True)
class Antichain:
    """
    Pairwise incomparable strings. The order of `nodes` is kept, since witness functions index it.
    """

    nodes: tuple[Str, ...]

    kind = "antichain"

    @classmethod
    def of(cls, nodes: Iterable[Str]) -> "Antichain":
        return cls(tuple(tuple(sigma) for sigma in nodes))

    def as_set(self) -> frozenset[Str]:
        return frozenset(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class Path:
    nodes: tuple[Str, ...]

    kind = "path"

    @classmethod
    def of(cls, nodes: Iterable[Str]) -> "Path":
        return cls(tuple(tuple(sigma) for sigma in nodes))


@dataclass(frozen=True)
class HomogeneousSet:
    """
    Naturals homogeneous for `color`. Against a Δ2 instance, color 1 means "contained in the set", color 0 "disjoint".
    """

    color: int
    points: tuple[int, ...]

    kind = "homogeneous"

    @classmethod
    def of(cls, color: int, points: Iterable[int]) -> "HomogeneousSet":
        return cls(color, tuple(sorted(set(points))))


@dataclass(frozen=True)
class WeaklyHomogeneousSet:
    color: int
    points: tuple[int, ...]

    kind = "weakly-homogeneous"


@dataclass(frozen=True)
class TransitiveSet:
    points: tuple[int, ...]

    kind = "transitive"


@dataclass(frozen=True)
class SemiHereditarySet:
    """
    Naturals on which the coloring is semi-hereditary for `color`.
    """

    color: int
    points: tuple[int, ...]

    kind = "semi-hereditary"


@dataclass(frozen=True)
class SemiAncestralSet:
    """
    Naturals on which the coloring has semi-ancestry for `color`.
    """

    color: int
    points: tuple[int, ...]

    kind = "semi-ancestral"


@dataclass(frozen=True)
class AscendingSeq:
    points: tuple[int, ...]

    kind = "ascending"


@dataclass(frozen=True)
class DescendingSeq:
    points: tuple[int, ...]

    kind = "descending"


Solution = Union[
    Chain,
    Antichain,
    Path,
    HomogeneousSet,
    WeaklyHomogeneousSet,
    TransitiveSet,
    SemiHereditarySet,
    SemiAncestralSet,
    AscendingSeq,
    DescendingSeq,
]

SOLUTION_KINDS: dict[str, type] = {
    cls.kind: cls
    for cls in (
        Chain,
        Antichain,
        Path,
        HomogeneousSet,
        WeaklyHomogeneousSet,
        TransitiveSet,
        SemiHereditarySet,
        SemiAncestralSet,
        AscendingSeq,
        DescendingSeq,
    )
}

STRING_SOLUTIONS = (Chain, Antichain, Path)


def check_chain(nodes: tuple[Str, ...]) -> CheckResult:
    for sigma, tau in zip(nodes, nodes[1:]):
        if not is_prefix(sigma, tau):
            return CheckResult.failed(sigma, tau)
    return CheckResult.passed()


def check_antichain(nodes: tuple[Str, ...]) -> CheckResult:
    for sigma, tau in combinations(nodes, 2):
        if comparable(sigma, tau):
            return CheckResult.failed(sigma, tau)
    return CheckResult.passed()


def check_path(nodes: tuple[Str, ...]) -> CheckResult:
    for sigma, tau in zip(nodes, nodes[1:]):
        if len(tau) != len(sigma) + 1 or tau[:-1] != sigma:
            return CheckResult.failed(sigma, tau)
    return CheckResult.passed()


def _check_string_solution(sol: Solution, contains: Any) -> CheckResult:  # noqa: ANN401
    nodes = sol.nodes  # type: ignore[union-attr]
    outside = [sigma for sigma in nodes if not contains(sigma)]
    if outside:
        raise WorkbenchError(ErrorCode.DOMAIN_MISMATCH, f"{pretty(outside[0])} is not in the instance", (outside[0],))
    if isinstance(sol, Chain):
        return check_chain(nodes)
    if isinstance(sol, Antichain):
        return check_antichain(nodes)
    return check_path(nodes)


def _check_naturals(points: tuple[int, ...], horizon: int) -> None:
    outside = [x for x in points if not 0 <= x < horizon]
    if outside:
        raise WorkbenchError(ErrorCode.DOMAIN_MISMATCH, f"{outside[0]} is past the horizon {horizon}", (outside[0],))


def _check_increasing(points: tuple[int, ...]) -> CheckResult:
    for a, b in zip(points, points[1:]):
        if a >= b:
            return CheckResult.failed(a, b)
    return CheckResult.passed()


def validate_solution(sol: Solution, against: Any) -> CheckResult:  # noqa: ANN401, C901
    """
    Check that a solution satisfies its defining property for an instance.

    Strings are checked against trees and branching sets; naturals against colorings, linear orders and Δ2
    instances. A staged tree is checked against its final snapshot.

    Args:
        sol: Any solution variant.
        against: The instance.

    Returns:
        The check result; on failure, the first violating pair or triple.

    Raises:
        WorkbenchError: DOMAIN_MISMATCH if the solution leaves the instance's domain; TYPE_MISMATCH if the variant
            does not apply to the instance.
    """
    if isinstance(against, StagedTree):
        against = against.final()

    if isinstance(sol, STRING_SOLUTIONS):
        if isinstance(against, FiniteTreeSnapshot):
            return _check_string_solution(sol, against.__contains__)
        if isinstance(against, BranchingSet):
            # certified sets are checked against the whole family, not the represented depth
            member = against.family.member if against.certified else against.__contains__
            if isinstance(sol, Path):
                return _check_string_solution(sol, lambda sigma: sigma == EPSILON or member(sigma))
            return _check_string_solution(sol, member)

    elif isinstance(sol, (HomogeneousSet, WeaklyHomogeneousSet, TransitiveSet)):
        if isinstance(against, PairColoring):
            _check_naturals(sol.points, against.horizon)
            if isinstance(sol, HomogeneousSet):
                return check_homogeneous(against, sol.points, sol.color)
            if isinstance(sol, WeaklyHomogeneousSet):
                return check_weakly_homogeneous(against, sol.points, sol.color)
            return check_transitive(against, sol.points)
        if isinstance(sol, HomogeneousSet) and isinstance(against, UnaryColoring):
            _check_naturals(sol.points, against.horizon)
            for x in sol.points:
                if against(x) != sol.color:
                    return CheckResult.failed(x)
            return CheckResult.passed()
        if isinstance(sol, HomogeneousSet) and isinstance(against, Delta2Instance):
            _check_naturals(sol.points, against.approx.settled)
            limit = against.limit()
            for x in sol.points:
                if (x in limit) != bool(sol.color):
                    return CheckResult.failed(x)
            return CheckResult.passed()

    elif isinstance(sol, (SemiHereditarySet, SemiAncestralSet)) and isinstance(against, PairColoring):
        _check_naturals(sol.points, against.horizon)
        check = _check_increasing(sol.points)
        if not check:
            return check
        if isinstance(sol, SemiHereditarySet):
            return check_semi_hereditary(against, sol.color, sol.points)
        return check_semi_ancestry(against, sol.color, sol.points)

    elif isinstance(sol, (AscendingSeq, DescendingSeq)) and isinstance(against, LinearOrderInstance):
        _check_naturals(sol.points, against.horizon)
        check = _check_increasing(sol.points)
        if not check:
            return check
        ascending = isinstance(sol, AscendingSeq)
        for a, b in zip(sol.points, sol.points[1:]):
            if against(a, b) != ascending:
                return CheckResult.failed(a, b)
        return CheckResult.passed()

    raise WorkbenchError(
        ErrorCode.TYPE_MISMATCH,
        f"cannot validate a {type(sol).__name__} against a {type(against).__name__}",
    )
