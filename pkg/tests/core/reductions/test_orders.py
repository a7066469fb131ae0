import pytest

from arbor.core.model.colorings import PairColoring, check_transitive
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import Antichain, AscendingSeq, Chain, DescendingSeq, TransitiveSet, validate_solution
from arbor.core.model.strings import EPSILON
from arbor.core.model.trees import StagedTree
from arbor.core.reductions.orders import (
    ads_instance,
    ads_solution_extract,
    em_instance,
    em_solution_extract,
    eventual_start,
    prefix_coloring,
)
from arbor.core.solvers.brute import longest_monotone
from arbor.core.utils.sampling import make_rng, random_staged_tree


RANDOM_TREES = 500


@pytest.fixture
def fan() -> StagedTree:
    """
    A root with three children and one grandchild, enumerated one node per stage in code order.

    Returns:
        The staged tree.
    """
    return StagedTree.from_stages([[EPSILON], [(0,)], [(1,)], [(0, 0)], [(2,)]])


def test_eventual_start() -> None:
    """
    Test the first index of the final third.
    """
    assert eventual_start(9) == 6
    assert eventual_start(3) == 2
    assert eventual_start(1) == 0


def test_ads_instance_orders_by_lt0(fan: StagedTree) -> None:
    """
    Test that the linear order follows `<0` on the enumeration.

    Args:
        fan: The staged tree.
    """
    order, psi = ads_instance(fan)
    assert psi == [EPSILON, (0,), (1,), (0, 0), (2,)]
    assert [psi[x] for x in order.ranking()] == [EPSILON, (0,), (0, 0), (1,), (2,)]


def test_ads_extracts_chains_and_antichains(fan: StagedTree) -> None:
    """
    Test that breaks late in an ascending sequence give an antichain and prefix runs give a chain.

    Args:
        fan: The staged tree.
    """
    _, psi = ads_instance(fan)
    assert ads_solution_extract(AscendingSeq((0, 1, 2, 4)), psi) == Antichain.of([(0,), (1,)])
    assert ads_solution_extract(AscendingSeq((0, 1, 3)), psi) == Chain.of([EPSILON, (0,), (0, 0)])
    with pytest.raises(WorkbenchError) as excinfo:
        ads_solution_extract(DescendingSeq((3,)), psi)
    assert excinfo.value.code == ErrorCode.AMBIGUOUS_AT_HORIZON


@pytest.mark.slow
def test_ads_descending_sequences_are_antichains() -> None:
    """
    Test on random trees that a descending sequence always maps to an antichain.
    """
    rng = make_rng(17)
    for _ in range(RANDOM_TREES):
        tree = random_staged_tree(rng)
        order, psi = ads_instance(tree)
        sequence = longest_monotone(order, ascending=False)
        if len(sequence.points) < 2:
            continue
        result = ads_solution_extract(sequence, psi)
        assert isinstance(result, Antichain)
        assert validate_solution(result, tree)


@pytest.mark.slow
def test_prefix_coloring_is_transitive() -> None:
    """
    Test that the prefix coloring of an enumeration is transitive for the color 1.
    """
    rng = make_rng(23)
    for _ in range(RANDOM_TREES):
        f, _ = em_instance(random_staged_tree(rng))
        assert check_transitive(f, colors=[1])


def test_em_extract(fan: StagedTree) -> None:
    """
    Test chains and antichains read off transitive sets of the prefix coloring.

    Args:
        fan: The staged tree.
    """
    f, psi = em_instance(fan)
    assert em_solution_extract(TransitiveSet((0, 1, 3)), f, psi) == Chain.of([EPSILON, (0,), (0, 0)])
    assert em_solution_extract(TransitiveSet((1, 2, 4)), f, psi) == Antichain.of([(0,), (1,)])


def test_em_rejects_intransitive_sets() -> None:
    """
    Test that an intransitive set is NOT_TRANSITIVE.
    """
    psi = [EPSILON, (0,), (0, 0)]
    f = PairColoring.from_function(2, 3, lambda x, y: 1 if (x, y) != (0, 2) else 0)
    assert prefix_coloring(psi)(0, 2) == 1
    with pytest.raises(WorkbenchError) as excinfo:
        em_solution_extract(TransitiveSet((0, 1, 2)), f, psi)
    assert excinfo.value.code == ErrorCode.NOT_TRANSITIVE
    assert excinfo.value.counterexample == (0, 1, 2)
