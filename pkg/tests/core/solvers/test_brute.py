import pytest

from arbor.core.model.branching import BranchingSet, PerfectBinaryFamily
from arbor.core.model.colorings import LinearOrderInstance, PairColoring, check_homogeneous
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import AscendingSeq, DescendingSeq, HomogeneousSet, validate_solution
from arbor.core.model.strings import EPSILON
from arbor.core.model.trees import FiniteTreeSnapshot
from arbor.core.solvers.brute import (
    brute_force_longest_chain,
    brute_force_max_antichain,
    greedy_subset,
    hasse_graph,
    longest_monotone,
    max_homogeneous_set,
    maximal_paths,
)


def perfect_tree(depth: int) -> FiniteTreeSnapshot:
    """
    The perfect binary tree of a depth.

    Args:
        depth: Length of the longest strings.

    Returns:
        The tree.
    """
    return FiniteTreeSnapshot(BranchingSet(PerfectBinaryFamily(), depth).tree_nodes())


def test_max_antichain_of_perfect_tree() -> None:
    """
    Test that the leaves are a maximum antichain of a perfect binary tree.
    """
    tree = perfect_tree(3)
    antichain = brute_force_max_antichain(tree)
    assert len(antichain) == 8
    assert antichain.as_set() == tree.leaves()
    assert validate_solution(antichain, tree)


def test_max_antichain_size_limit() -> None:
    """
    Test that the exact search refuses large trees and the fallback returns the maximal elements.
    """
    tree = perfect_tree(4)
    with pytest.raises(WorkbenchError) as excinfo:
        brute_force_max_antichain(tree)
    assert excinfo.value.code == ErrorCode.SIZE_LIMIT
    assert brute_force_max_antichain(tree, exact=False).as_set() == tree.leaves()


def test_max_antichain_of_empty_set() -> None:
    """
    Test the empty set of strings.
    """
    assert len(brute_force_max_antichain([])) == 0


def test_longest_chain() -> None:
    """
    Test that a longest chain runs from the root to a deepest leaf.
    """
    chain = brute_force_longest_chain(FiniteTreeSnapshot.of([(0, 1, 1), (1,)], close=True))
    assert chain.nodes == (EPSILON, (0,), (0, 1), (0, 1, 1))


def test_hasse_graph_is_a_tree() -> None:
    """
    Test that the Hasse diagram has one edge per non-root node.
    """
    tree = perfect_tree(3)
    graph = hasse_graph(tree)
    assert graph.number_of_nodes() == 15
    assert graph.number_of_edges() == 14


def test_maximal_paths() -> None:
    """
    Test that every leaf gives one path.
    """
    paths = maximal_paths(perfect_tree(2))
    assert len(paths) == 4
    assert paths[0].nodes == (EPSILON, (0,), (0, 0))


def test_max_homogeneous_set() -> None:
    """
    Test largest homogeneous sets of the parity coloring.
    """
    f = PairColoring.parity(6)
    assert max_homogeneous_set(f, 1) == HomogeneousSet(1, (0, 1, 3, 5))
    zero = max_homogeneous_set(f, 0)
    assert len(zero.points) == 3
    assert validate_solution(zero, f)


def test_longest_monotone() -> None:
    """
    Test longest monotone sequences of the standard and reversed orders.
    """
    assert longest_monotone(LinearOrderInstance.standard(5), ascending=True) == AscendingSeq((0, 1, 2, 3, 4))
    assert len(longest_monotone(LinearOrderInstance.standard(5), ascending=False).points) == 1
    assert longest_monotone(LinearOrderInstance.reverse(4), ascending=False) == DescendingSeq((0, 1, 2, 3))


def test_greedy_subset() -> None:
    """
    Test that the greedy construction keeps every point that preserves the property.
    """
    f = PairColoring.parity(6)
    assert greedy_subset(range(6), lambda c: check_homogeneous(f, c, 1)) == (0, 1, 3, 5)
