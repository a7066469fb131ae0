"""
Arbor Semi-Hereditary Reductions.

The two directions between chain-antichain on c.e. trees and Ramsey's theorem for semi-hereditary colorings. A tree
becomes a coloring through its prefix coloring; a coloring semi-hereditary for `i` becomes the tree of its
backward-greedy sequences `σn`, whose paths are weakly homogeneous and refine to homogeneous sets, and whose
antichains are homogeneous for the other color.

Classes:
    - Sher: Chains and antichains of c.e. trees from homogeneous sets of their prefix coloring.
    - TcacToSher: Homogeneous sets of semi-hereditary colorings from chains and antichains of their sigma trees.

Functions:
    - sher_instance: The prefix coloring of a c.e. tree or a branching set.
    - sher_solution_extract: A chain or antichain from a homogeneous set.
    - sigma_sequence: The backward-greedy sequence ending at a natural.
    - tcac_to_sher_tree: The tree of all backward-greedy sequences.
    - tcac_to_sher_solution: A homogeneous or weakly homogeneous set from a solution of the sigma tree.
    - weak_homog_refine: A homogeneous subset of a weakly homogeneous sequence.
"""

from collections.abc import Sequence
from itertools import islice

import numpy as np

from arbor.core.model.branching import BranchingSet
from arbor.core.model.colorings import (
    ColoringCertificate,
    PairColoring,
    check_homogeneous,
    check_semi_hereditary,
    check_weakly_homogeneous,
)
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import (
    Antichain,
    Chain,
    HomogeneousSet,
    Path,
    Solution,
    WeaklyHomogeneousSet,
)
from arbor.core.model.stability import SigmaTree
from arbor.core.model.strings import EPSILON, Str
from arbor.core.model.trees import FiniteTreeSnapshot, StagedTree, psi_enumeration
from arbor.core.reductions.base import Reduction, ReductionRun
from arbor.core.reductions.orders import Assume, eventual_start, prefix_coloring, skip_assumption
from arbor.core.solvers.brute import max_homogeneous_set, maximal_paths
from arbor.core.utils import sampling


def sher_instance(tree: StagedTree | BranchingSet, horizon: int | None = None) -> tuple[PairColoring, list[Str]]:
    """
    The prefix coloring of a tree, semi-hereditary for the color 1.

    A c.e. tree is enumerated through `psi`. A branching set is enumerated root first and then by increasing code,
    `horizon` strings in all; when the set is certified the coloring carries a certificate derived from it.

    Args:
        tree: A staged c.e. tree or a completely branching set.
        horizon: Number of strings enumerated from a branching set.

    Returns:
        The coloring and the enumeration.
    """
    if isinstance(tree, StagedTree):
        psi = psi_enumeration(tree)
        return prefix_coloring(psi), psi
    size = horizon if horizon is not None else len(tree.members()) + 1
    psi = [EPSILON, *islice(tree.stream(), size - 1)]
    if len(psi) < size:
        raise WorkbenchError(ErrorCode.HORIZON_TOO_SMALL, f"the set has fewer than {size - 1} members at its depth")
    f = prefix_coloring(psi)
    if tree.certified:
        certificate = ColoringCertificate("sher", tree.certificate.to_dict())
        f = PairColoring(f.num_colors, f.horizon, f.table, certificate)
    return f, psi


def sher_solution_extract(homogeneous: HomogeneousSet, f: PairColoring, psi: Sequence[Str]) -> Chain | Antichain:
    """
    Color 0 gives the antichain `psi(H)`, color 1 the chain `psi(H)`.

    Args:
        homogeneous: A homogeneous set of the coloring.
        f: The prefix coloring.
        psi: The enumeration the coloring was built from.

    Returns:
        The antichain or chain of the enumerated nodes.

    Raises:
        WorkbenchError: NOT_HOMOGENEOUS with a violating pair.
    """
    check = check_homogeneous(f, homogeneous.points, homogeneous.color)
    if not check:
        raise WorkbenchError(ErrorCode.NOT_HOMOGENEOUS, "set is not homogeneous", check.counterexample)
    strings = [psi[x] for x in sorted(homogeneous.points)]
    if homogeneous.color == 0:
        return Antichain.of(strings)
    return Chain.of(strings)


class Sher(Reduction):
    """
    Chains and antichains of c.e. trees from homogeneous sets of their prefix coloring.
    """

    name = "sher-instance"
    source_kind = "chain-antichain problem on a c.e. tree"
    target_kind = "homogeneous set problem on a coloring semi-hereditary for 1"
    source_types = (StagedTree,)

    def _map_instance(self, source: StagedTree) -> ReductionRun:
        f, psi = sher_instance(source)
        return ReductionRun(source, f, {"psi": psi})

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if not isinstance(target_solution, HomogeneousSet):
            raise self._wrong_variant(target_solution)
        return sher_solution_extract(target_solution, run.target, run.context["psi"])

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        return [max_homogeneous_set(run.target, 0), max_homogeneous_set(run.target, 1)]

    def random_source(self, rng: np.random.Generator) -> StagedTree:
        return sampling.random_staged_tree(rng)


def sigma_sequence(f: PairColoring, n: int, color: int) -> Str:
    """
    The sequence `σn`: start from `n` and repeatedly prepend the largest `j` below the first entry with
    `f(j, first) = color`.

    Args:
        f: The pair coloring.
        n: The last entry.
        color: The color followed downwards.

    Returns:
        The sequence, ending in `n`.
    """
    sequence = [n]
    while True:
        first = sequence[0]
        below = [j for j in range(first - 1, -1, -1) if f(j, first) == color]
        if not below:
            return tuple(sequence)
        sequence.insert(0, below[0])


def tcac_to_sher_tree(f: PairColoring, color: int) -> SigmaTree:
    """
    Build the tree of the sequences `σn` of a coloring semi-hereditary for `color`.

    Each `σn` increases, ends with `n`, is weakly homogeneous for `color` and cannot be extended below or between its
    entries; it contains every `j < n` with `f(j, n) = color`. The prefixes of `σn` are the sequences `σm` of its
    entries, so the sequences form a tree.

    Args:
        f: The pair coloring.
        color: The color `f` is semi-hereditary for.

    Returns:
        The tree of the sequences, with its node sequences.

    Raises:
        WorkbenchError: NOT_SEMI_HEREDITARY with a violating triple.
    """
    check = check_semi_hereditary(f, color)
    if not check:
        raise WorkbenchError(
            ErrorCode.NOT_SEMI_HEREDITARY, f"coloring is not semi-hereditary for {color}", check.counterexample
        )
    labels = tuple(sigma_sequence(f, n, color) for n in range(f.horizon))
    return SigmaTree(FiniteTreeSnapshot.of(labels, close=True), labels, f, color)


def tcac_to_sher_solution(solution: Solution, tree: SigmaTree) -> WeaklyHomogeneousSet | HomogeneousSet:
    """
    An antichain `(σ_nj)` gives `{nj}`, homogeneous for the other color; a chain or path gives the entries of its
    longest node, weakly homogeneous for the tree's color.

    Args:
        solution: A chain, path or antichain of the tree.
        tree: The tree of the sequences.

    Returns:
        The homogeneous or weakly homogeneous set.

    Raises:
        WorkbenchError: INVALID_SOLUTION if a node is not one of the sequences.
    """
    nodes = [sigma for sigma in solution.nodes if sigma]  # type: ignore[union-attr]
    for sigma in nodes:
        if tree.node_label(sigma) is None:
            raise WorkbenchError(ErrorCode.INVALID_SOLUTION, f"{sigma} is not a sigma sequence", (sigma,))
    if isinstance(solution, Antichain):
        return HomogeneousSet.of(1 - tree.color, (sigma[-1] for sigma in nodes))
    if isinstance(solution, (Chain, Path)):
        longest = max(nodes, key=len, default=EPSILON)
        return WeaklyHomogeneousSet(tree.color, tuple(longest))
    raise WorkbenchError(ErrorCode.TYPE_MISMATCH, f"no homogeneous set from a {type(solution).__name__}")


def weak_homog_refine(
    sequence: WeaklyHomogeneousSet,
    f: PairColoring,
    assume: Assume = skip_assumption,
) -> HomogeneousSet:
    """
    Refine a sequence weakly homogeneous for `i` into a homogeneous subset.

    With `f` semi-hereditary for `i`, every entry either sees `i` with all later entries, or sees `i` up to a cut
    and `1-i` from the cut on. If an entry of the second kind occurs in the final third, such entries are taken to
    recur and a set homogeneous for `1-i` is built greedily, each pick at or after the previous pick's cut.
    Otherwise the entries of the first kind are homogeneous for `i`, and the report flags the assumption that no
    later entry is of the second kind.

    Args:
        sequence: The weakly homogeneous sequence.
        f: The coloring, semi-hereditary for the sequence's color.
        assume: Receives the assumptions the refinement relies on.

    Returns:
        The homogeneous subset.

    Raises:
        WorkbenchError: NOT_WEAKLY_HOMOGENEOUS or NOT_SEMI_HEREDITARY with the violating pair or triple.
    """
    color, points = sequence.color, sequence.points
    check = check_weakly_homogeneous(f, points, color)
    if not check:
        raise WorkbenchError(
            ErrorCode.NOT_WEAKLY_HOMOGENEOUS, "sequence is not weakly homogeneous", check.counterexample
        )
    check = check_semi_hereditary(f, color, points)
    if not check:
        raise WorkbenchError(
            ErrorCode.NOT_SEMI_HEREDITARY, "coloring is not semi-hereditary on the sequence", check.counterexample
        )

    cuts: list[int | None] = []
    for j, a in enumerate(points):
        later = [k for k in range(j + 1, len(points)) if f(a, points[k]) != color]
        cuts.append(later[0] if later else None)
    second_kind = [j for j, cut in enumerate(cuts) if cut is not None]

    if second_kind and second_kind[-1] >= eventual_start(len(points)):
        assume(f"entries seeing {1 - color} in the final third recur")
        picks = [second_kind[0]]
        while True:
            cut = cuts[picks[-1]]
            assert cut is not None  # noqa: S101
            following = [j for j in second_kind if j >= cut]
            if not following:
                break
            picks.append(following[0])
        picks.append(len(points) - 1)
        return HomogeneousSet.of(1 - color, (points[j] for j in picks))

    if second_kind:
        assume(f"entries seeing only {color} after the final third stay so")
    return HomogeneousSet.of(color, (points[j] for j, cut in enumerate(cuts) if cut is None))


class TcacToSher(Reduction):
    """
    Homogeneous sets of semi-hereditary colorings from chains and antichains of their sigma trees.

    Args:
        color: The color the coloring is semi-hereditary for; detected when omitted.
    """

    name = "tcac-to-sher"
    source_kind = "homogeneous set problem on a semi-hereditary coloring"
    target_kind = "chain-antichain problem on a tree"
    source_types = (PairColoring,)

    def __init__(self, color: int | None = None) -> None:
        self.color = color

    def _semi_hereditary_color(self, f: PairColoring) -> int:
        if self.color is not None:
            return self.color
        for color in (1, 0):
            if check_semi_hereditary(f, color):
                return color
        raise WorkbenchError(ErrorCode.NOT_SEMI_HEREDITARY, "coloring is semi-hereditary for no color")

    def _map_instance(self, source: PairColoring) -> ReductionRun:
        tree = tcac_to_sher_tree(source, self._semi_hereditary_color(source))
        return ReductionRun(source, tree.snapshot, {"sigma_tree": tree})

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if not isinstance(target_solution, (Chain, Antichain, Path)):
            raise self._wrong_variant(target_solution)
        result = tcac_to_sher_solution(target_solution, run.context["sigma_tree"])
        if isinstance(result, WeaklyHomogeneousSet):
            return weak_homog_refine(result, run.source, run.assume)
        return result

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        tree: SigmaTree = run.context["sigma_tree"]
        leaves = Antichain.of(sorted(tree.snapshot.leaves(), key=lambda sigma: sigma[-1] if sigma else -1))
        return [leaves, *maximal_paths(tree.snapshot)]

    def random_source(self, rng: np.random.Generator) -> PairColoring:
        f, _ = sher_instance(sampling.random_staged_tree(rng))
        if rng.random() < 0.5:
            return f
        return PairColoring.from_function(2, f.horizon, lambda x, y: 1 - f(x, y))
