import pytest

from arbor.core.model.branching import BranchingSet, KPathFamily, PerfectBinaryFamily
from arbor.core.model.colorings import PairColoring, UnaryColoring
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.strings import EPSILON
from arbor.core.reductions.stable import (
    check_stability_of_coloring,
    check_stable_coloring_preserved,
    lt0_order_type,
    stable_rt1k_tree,
)
from arbor.core.solvers.brute import brute_force_max_antichain
from arbor.core.utils.sampling import make_rng, random_unary_coloring


def test_stable_rt1k_tree() -> None:
    """
    Test the tree of color-class prefixes of a small coloring.
    """
    tree = stable_rt1k_tree(UnaryColoring(2, (0, 1, 0)))
    assert tree.nodes == frozenset({EPSILON, (0,), (1,), (0, 2)})
    assert len(brute_force_max_antichain(tree)) == 2


def test_strings_stop_at_their_last_entry() -> None:
    """
    Test that each string lists its color class only up to its last entry, so one color gives a single chain.
    """
    tree = stable_rt1k_tree(UnaryColoring(2, (0, 0, 1, 0)))
    assert tree.nodes == frozenset({EPSILON, (0,), (0, 1), (2,), (0, 1, 3)})
    assert len(brute_force_max_antichain(tree)) == 2


def test_stable_rt1k_antichains_are_small() -> None:
    """
    Test on random colorings that antichains have at most one node per color.
    """
    rng = make_rng(41)
    for k in (1, 2, 3):
        for _ in range(10):
            tree = stable_rt1k_tree(random_unary_coloring(rng, num_colors=k))
            assert len(brute_force_max_antichain(tree)) <= k


def test_heuristic_stability() -> None:
    """
    Test the tail-window check for colorings without a certificate.
    """
    constant = PairColoring.from_function(2, 6, lambda x, y: 1)
    assert check_stability_of_coloring(constant, heuristic=True)
    with pytest.raises(WorkbenchError) as excinfo:
        check_stability_of_coloring(constant)
    assert excinfo.value.code == ErrorCode.NO_CERTIFICATE

    alternating = PairColoring.from_function(2, 6, lambda x, y: y % 2)
    assert check_stability_of_coloring(alternating, heuristic=True).counterexample == (0,)
    assert not check_stability_of_coloring(PairColoring.parity(6), heuristic=True)


def test_stable_coloring_preserved() -> None:
    """
    Test that the prefix coloring of a stable family is stable, and that unstable families are refused.
    """
    assert check_stable_coloring_preserved(BranchingSet(KPathFamily(1)), horizon=10)
    with pytest.raises(WorkbenchError) as excinfo:
        check_stable_coloring_preserved(BranchingSet(PerfectBinaryFamily()), horizon=10)
    assert excinfo.value.code == ErrorCode.BAD_PARAMS


def test_order_type_of_a_stable_family() -> None:
    """
    Test that a single-path family splits into an ascending and a descending block.
    """
    result = lt0_order_type(BranchingSet(KPathFamily(1), 12), horizon=9)
    assert result.ok
    assert result.window == ((0, 0, 1), (0, 0, 0, 0), (0, 0, 0, 1))
    assert result.ascending == (EPSILON, (0,), (0, 0), (0, 0, 0))
    assert result.descending == ((0, 1), (1,))


def test_order_type_of_an_unstable_family() -> None:
    """
    Test that the perfect binary tree has nodes fitting neither block.
    """
    result = lt0_order_type(BranchingSet(PerfectBinaryFamily(), 3), horizon=9)
    assert not result.ok
    assert (1,) in result.unclassified
