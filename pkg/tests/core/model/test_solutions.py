import pytest

from arbor.core.model.branching import BranchingSet, PerfectBinaryFamily
from arbor.core.model.colorings import (
    Approx2Sequence,
    Delta2Instance,
    LinearOrderInstance,
    PairColoring,
    UnaryColoring,
)
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import (
    SOLUTION_KINDS,
    Antichain,
    AscendingSeq,
    Chain,
    DescendingSeq,
    HomogeneousSet,
    Path,
    SemiAncestralSet,
    SemiHereditarySet,
    TransitiveSet,
    WeaklyHomogeneousSet,
    validate_solution,
)
from arbor.core.model.strings import EPSILON
from arbor.core.model.trees import FiniteTreeSnapshot, StagedTree


@pytest.fixture
def tree() -> FiniteTreeSnapshot:
    """
    A small binary tree of depth 2.

    Returns:
        The tree.
    """
    return FiniteTreeSnapshot.of([(0, 0), (0, 1), (1,)], close=True)


def test_solution_kinds() -> None:
    """
    Test that every solution variant is registered under its kind.
    """
    assert set(SOLUTION_KINDS) == {
        "chain",
        "antichain",
        "path",
        "homogeneous",
        "weakly-homogeneous",
        "transitive",
        "semi-hereditary",
        "semi-ancestral",
        "ascending",
        "descending",
    }
    assert HomogeneousSet.of(1, [5, 2, 5]).points == (2, 5)
    assert Antichain.of([[1], [0, 0]]).as_set() == frozenset({(1,), (0, 0)})


def test_string_solutions_against_a_tree(tree: FiniteTreeSnapshot) -> None:
    """
    Test chains, antichains and paths in a finite tree.

    Args:
        tree: The tree under test.
    """
    assert validate_solution(Antichain.of([(1,), (0, 0), (0, 1)]), tree)
    assert validate_solution(Chain.of([EPSILON, (0, 1)]), tree)
    assert validate_solution(Path.of([EPSILON, (0,), (0, 1)]), tree)
    assert validate_solution(Path.of([EPSILON, (0, 1)]), tree).counterexample == (EPSILON, (0, 1))


def test_chain_submitted_as_antichain(tree: FiniteTreeSnapshot) -> None:
    """
    Test that a chain is not accepted as an antichain, with the comparable pair as counterexample.

    Args:
        tree: The tree under test.
    """
    result = validate_solution(Antichain.of([(0,), (0, 1)]), tree)
    assert not result
    assert result.counterexample == ((0,), (0, 1))


def test_string_outside_the_instance(tree: FiniteTreeSnapshot) -> None:
    """
    Test that strings outside the tree raise DOMAIN_MISMATCH.

    Args:
        tree: The tree under test.
    """
    with pytest.raises(WorkbenchError) as excinfo:
        validate_solution(Antichain.of([(1, 1)]), tree)
    assert excinfo.value.code == ErrorCode.DOMAIN_MISMATCH
    with pytest.raises(WorkbenchError) as excinfo:
        validate_solution(HomogeneousSet(0, (1,)), tree)
    assert excinfo.value.code == ErrorCode.TYPE_MISMATCH


def test_staged_tree_is_checked_at_its_final_stage() -> None:
    """
    Test that solutions to a staged tree are checked against its final snapshot.
    """
    staged = StagedTree.from_stages([[EPSILON], [(0,)], [(1,)]])
    assert validate_solution(Antichain.of([(0,), (1,)]), staged)


def test_certified_sets_are_checked_past_their_depth() -> None:
    """
    Test that a certified family accepts members deeper than the represented depth.
    """
    branching = BranchingSet(PerfectBinaryFamily(), 3)
    deep = (0,) * 10 + (1,)
    assert validate_solution(Antichain.of([deep, (1,)]), branching)
    assert validate_solution(Path.of([EPSILON, (1,), (1, 0)]), branching)

    explicit = BranchingSet.explicit([(0,), (1,)])
    with pytest.raises(WorkbenchError) as excinfo:
        validate_solution(Antichain.of([(0, 0)]), explicit)
    assert excinfo.value.code == ErrorCode.DOMAIN_MISMATCH


def test_natural_solutions_against_pair_colorings() -> None:
    """
    Test homogeneous, weakly homogeneous, transitive and closure sets of the parity coloring.
    """
    f = PairColoring.parity(8)
    assert validate_solution(HomogeneousSet(1, (0, 3, 5)), f)
    assert not validate_solution(HomogeneousSet(1, (0, 2)), f)
    assert validate_solution(WeaklyHomogeneousSet(1, (0, 1, 3)), f)
    assert validate_solution(TransitiveSet((0, 1, 2, 3)), f)
    assert validate_solution(SemiAncestralSet(1, (0, 1, 2, 3)), f)
    assert validate_solution(SemiHereditarySet(1, (0, 2, 3)), f).counterexample == (0, 2, 3)
    assert validate_solution(SemiHereditarySet(1, (3, 1)), f).counterexample == (3, 1)
    with pytest.raises(WorkbenchError) as excinfo:
        validate_solution(HomogeneousSet(1, (0, 8)), f)
    assert excinfo.value.code == ErrorCode.DOMAIN_MISMATCH


def test_homogeneous_sets_against_unary_and_delta2() -> None:
    """
    Test homogeneous sets for unary colorings and for the limit of an approximation.
    """
    f = UnaryColoring(2, (0, 1, 1, 0))
    assert validate_solution(HomogeneousSet(1, (1, 2)), f)
    assert validate_solution(HomogeneousSet(1, (0, 1)), f).counterexample == (0,)

    approx = Approx2Sequence.from_function(1, 8, lambda e, s, x: x % 2 == 0)
    instance = Delta2Instance(approx, 0)
    assert validate_solution(HomogeneousSet(1, (0, 2)), instance)
    assert validate_solution(HomogeneousSet(0, (1, 3)), instance)
    assert not validate_solution(HomogeneousSet(0, (1, 2)), instance)
    with pytest.raises(WorkbenchError) as excinfo:
        validate_solution(HomogeneousSet(1, (6,)), instance)
    assert excinfo.value.code == ErrorCode.DOMAIN_MISMATCH


def test_monotone_sequences() -> None:
    """
    Test ascending and descending sequences of a linear order.
    """
    order = LinearOrderInstance.from_ranking([3, 0, 1, 2])
    assert validate_solution(AscendingSeq((0, 1, 2)), order)
    assert validate_solution(DescendingSeq((0, 3)), order)
    assert validate_solution(AscendingSeq((0, 3)), order).counterexample == (0, 3)
    assert validate_solution(DescendingSeq((1, 0)), order).counterexample == (1, 0)
