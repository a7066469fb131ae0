import pytest

from arbor.core.model.branching import BranchingSet, CombFamily, KPathFamily, PerfectBinaryFamily
from arbor.core.model.colorings import ColoringCertificate, PairColoring
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.stability import check_coloring_stable, check_stable_tree, limit_color, psi_of_family
from arbor.core.model.strings import EPSILON


def test_perfect_binary_tree_is_unstable() -> None:
    """
    Test that a node of the perfect binary tree has infinitely many comparable and incomparable nodes.
    """
    result = check_stable_tree(BranchingSet(PerfectBinaryFamily()))
    assert not result
    assert result.counterexample == ((0,),)


@pytest.mark.parametrize("family", [KPathFamily(1), CombFamily(0), CombFamily(2)])
def test_single_path_families_are_stable(family: object) -> None:
    """
    Test families with one infinite path, which are stable.

    Args:
        family: The branching family.
    """
    assert check_stable_tree(BranchingSet(family))  # type: ignore[arg-type]


def test_explicit_trees_have_no_stability_certificate() -> None:
    """
    Test that stability of an explicit set cannot be decided.
    """
    with pytest.raises(WorkbenchError) as excinfo:
        check_stable_tree(BranchingSet.explicit([(0,), (1,)]))
    assert excinfo.value.code == ErrorCode.NO_CERTIFICATE


def test_psi_of_family() -> None:
    """
    Test the code-order enumeration of a family.
    """
    branching = BranchingSet(PerfectBinaryFamily(), 3)
    assert [psi_of_family(branching, x) for x in range(4)] == [EPSILON, (0,), (1,), (0, 0)]
    with pytest.raises(WorkbenchError) as excinfo:
        psi_of_family(BranchingSet(PerfectBinaryFamily(), 1), 5)
    assert excinfo.value.code == ErrorCode.HORIZON_TOO_SMALL


def test_limit_colors() -> None:
    """
    Test the certified limits of constant, parity and limit-table colorings.
    """
    assert limit_color(PairColoring.constant(5, 1), 3) == 1
    assert limit_color(PairColoring.parity(5), 0) is None
    table = PairColoring.from_function(2, 4, lambda x, y: 0, ColoringCertificate("limit-table", {"limits": [0, None]}))
    assert limit_color(table, 0) == 0
    assert limit_color(table, 1) is None
    with pytest.raises(WorkbenchError) as excinfo:
        limit_color(table, 2)
    assert excinfo.value.code == ErrorCode.HORIZON_TOO_SMALL
    assert not check_coloring_stable(table)


def test_coloring_stability() -> None:
    """
    Test exact stability of certified colorings.
    """
    assert check_coloring_stable(PairColoring.constant(5, 0))
    result = check_coloring_stable(PairColoring.parity(5))
    assert not result
    assert result.counterexample == (0,)
    with pytest.raises(WorkbenchError) as excinfo:
        check_coloring_stable(PairColoring.from_function(2, 4, lambda x, y: 1))
    assert excinfo.value.code == ErrorCode.NO_CERTIFICATE
