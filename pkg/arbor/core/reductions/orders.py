"""
Arbor Order Reductions.

Chains and antichains of a tree from monotone sequences of a linear order on its nodes, and from transitive sets of a
coloring of pairs of its nodes. Both reductions enumerate the tree through `psi`, which lists nodes with strictly
increasing codes, so that a strict prefix always gets the smaller index.

Classes:
    - Ads: Chain-antichain from ascending-descending sequences.
    - Em: Chain-antichain from transitive sets.

Functions:
    - ads_instance: The order `<0` on the enumerated nodes.
    - ads_solution_extract: A chain or antichain from a monotone sequence.
    - prefix_coloring: `f(x, y) = 1` iff `psi(x)` is a strict prefix of `psi(y)`.
    - em_instance: The prefix coloring of a tree.
    - em_solution_extract: A chain or antichain from a transitive set.
"""

from collections.abc import Callable, Sequence

import numpy as np

from arbor.core.model.colorings import LinearOrderInstance, PairColoring, check_transitive
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import (
    Antichain,
    AscendingSeq,
    Chain,
    DescendingSeq,
    Solution,
    TransitiveSet,
)
from arbor.core.model.strings import Str, incomparable, is_prefix, order_lt0
from arbor.core.model.trees import StagedTree, psi_enumeration
from arbor.core.reductions.base import Reduction, ReductionRun
from arbor.core.solvers.brute import greedy_subset, longest_monotone, max_homogeneous_set
from arbor.core.utils import sampling
from arbor.core.utils.constants import EVENTUALLY_FRACTION

Assume = Callable[[str], None]


def skip_assumption(_: str) -> None:
    pass


def eventual_start(length: int) -> int:
    """
    First index of the final third of a sequence of `length` items, where "eventually" claims are read.

    Args:
        length: Length of the sequence.

    Returns:
        The index.
    """
    return length - max(1, round(length * EVENTUALLY_FRACTION))


def ads_instance(tree: StagedTree) -> tuple[LinearOrderInstance, list[Str]]:
    """
    Order the enumerated nodes of a tree by `<0`.

    Args:
        tree: The staged c.e. tree.

    Returns:
        The order on `[0, N)`, where `x <_L y` iff `psi(x) <0 psi(y)`, and the enumeration `psi`.
    """
    psi = psi_enumeration(tree)
    size = len(psi)
    lt = np.zeros((size, size), dtype=bool)
    for x in range(size):
        for y in range(size):
            if x != y:
                lt[x, y] = order_lt0(psi[x], psi[y])
    return LinearOrderInstance(size, lt), psi


def ads_solution_extract(
    sequence: AscendingSeq | DescendingSeq,
    psi: Sequence[Str],
    assume: Assume = skip_assumption,
) -> Chain | Antichain:
    """
    Read a chain or an antichain off a monotone sequence of the `<0` order.

    Call `ℓ` a break when `psi(s_ℓ)` and `psi(s_ℓ+1)` are incomparable. If a break occurs in the final third of the
    sequence, breaks are taken to recur, and the strings after each break (descending) or before it (ascending) form
    an antichain. Otherwise the strings after the last break are consecutive prefixes and form a chain.

    Args:
        sequence: The monotone sequence over psi-indices.
        psi: The enumeration of the tree.
        assume: Receives the horizon assumption made.

    Returns:
        The chain or antichain.

    Raises:
        WorkbenchError: AMBIGUOUS_AT_HORIZON for sequences of fewer than two elements.
    """
    strings = [psi[x] for x in sequence.points]
    if len(strings) < 2:
        raise WorkbenchError(ErrorCode.AMBIGUOUS_AT_HORIZON, "a sequence of fewer than two elements decides nothing")
    breaks = [ell for ell in range(len(strings) - 1) if incomparable(strings[ell], strings[ell + 1])]
    descending = isinstance(sequence, DescendingSeq)
    if breaks and breaks[-1] >= eventual_start(len(strings) - 1):
        assume("breaks in the final third of the sequence recur")
        return Antichain.of(strings[ell + 1] if descending else strings[ell] for ell in breaks)
    assume("no break in the final third of the sequence means no later break")
    tail = strings[breaks[-1] + 1 :] if breaks else strings
    return Chain.of(sorted(tail, key=len))


class Ads(Reduction):
    """
    Chains and antichains of trees from monotone sequences of the order `<0`.
    """

    name = "ads"
    source_kind = "chain-antichain problem on a tree"
    target_kind = "ascending-descending sequence problem on a linear order"
    source_types = (StagedTree,)

    def _map_instance(self, source: StagedTree) -> ReductionRun:
        order, psi = ads_instance(source)
        return ReductionRun(source, order, {"psi": psi})

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if not isinstance(target_solution, (AscendingSeq, DescendingSeq)):
            raise self._wrong_variant(target_solution)
        return ads_solution_extract(target_solution, run.context["psi"], run.assume)

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        sequences = [longest_monotone(run.target, ascending=True), longest_monotone(run.target, ascending=False)]
        return [sequence for sequence in sequences if len(sequence.points) >= 2]

    def random_source(self, rng: np.random.Generator) -> StagedTree:
        return sampling.random_staged_tree(rng)


def prefix_coloring(psi: Sequence[Str]) -> PairColoring:
    """
    Color `{x, y}` with `x < y` by 1 iff `psi(x)` is a strict prefix of `psi(y)`.

    Args:
        psi: An enumeration of distinct strings.

    Returns:
        The 2-coloring on `[0, len(psi))`.
    """
    return PairColoring.from_function(2, len(psi), lambda x, y: int(is_prefix(psi[x], psi[y])))


def em_instance(tree: StagedTree) -> tuple[PairColoring, list[Str]]:
    """
    The prefix coloring of the enumerated nodes of a tree.

    Args:
        tree: The staged c.e. tree.

    Returns:
        The coloring and the enumeration `psi`.
    """
    psi = psi_enumeration(tree)
    return prefix_coloring(psi), psi


def em_solution_extract(
    transitive: TransitiveSet,
    f: PairColoring,
    psi: Sequence[Str],
    assume: Assume = skip_assumption,
) -> Chain | Antichain:
    """
    Read a chain or an antichain off a transitive set of the prefix coloring.

    On a transitive set, `f(x, y) = 0` forces `f(x, z) = 0` for every later `z`. So if consecutive elements with
    color 0 occur in the final third, the elements starting such a step are pairwise 0 and their strings form an
    antichain; otherwise the strings after the last such step are a chain.

    Args:
        transitive: A transitive set of the coloring.
        f: The prefix coloring.
        psi: The enumeration the coloring was built from.
        assume: Receives the assumptions the extraction relies on.

    Returns:
        The chain or antichain of the enumerated nodes.

    Raises:
        WorkbenchError: NOT_TRANSITIVE with a violating triple.
    """
    points = sorted(transitive.points)
    check = check_transitive(f, points)
    if not check:
        raise WorkbenchError(ErrorCode.NOT_TRANSITIVE, "set is not transitive", check.counterexample)
    zeros = [j for j in range(len(points) - 1) if f(points[j], points[j + 1]) == 0]
    if zeros and zeros[-1] >= eventual_start(len(points) - 1):
        assume("color-0 steps in the final third of the set recur")
        return Antichain.of(psi[points[j]] for j in zeros)
    assume("no color-0 step in the final third of the set means no later one")
    tail = points[zeros[-1] + 1 :] if zeros else points
    return Chain.of(psi[x] for x in tail)


class Em(Reduction):
    """
    Chains and antichains of trees from transitive sets of their prefix coloring.
    """

    name = "em"
    source_kind = "chain-antichain problem on a tree"
    target_kind = "transitive set problem on a coloring of pairs"
    source_types = (StagedTree,)

    def _map_instance(self, source: StagedTree) -> ReductionRun:
        f, psi = em_instance(source)
        return ReductionRun(source, f, {"psi": psi})

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if not isinstance(target_solution, TransitiveSet):
            raise self._wrong_variant(target_solution)
        return em_solution_extract(target_solution, run.target, run.context["psi"], run.assume)

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        f: PairColoring = run.target
        points = range(f.horizon)
        return [
            TransitiveSet(max_homogeneous_set(f, 0).points),
            TransitiveSet(max_homogeneous_set(f, 1).points),
            TransitiveSet(greedy_subset(points, lambda candidate: check_transitive(f, candidate))),
            TransitiveSet(greedy_subset(points[::-1], lambda candidate: check_transitive(f, candidate))),
        ]

    def random_source(self, rng: np.random.Generator) -> StagedTree:
        return sampling.random_staged_tree(rng)
