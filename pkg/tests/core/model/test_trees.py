from unittest import TestCase

import pytest

from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.strings import EPSILON, phi_code
from arbor.core.model.trees import (
    FiniteTreeSnapshot,
    SplitTriple,
    StagedTree,
    canonical_order,
    find_split_triples,
    psi_enumeration,
)
from arbor.core.utils.sampling import make_rng, random_staged_tree


class TestFiniteTreeSnapshot(TestCase):
    """
    Tests for finite downward-closed trees.

    Methods:
        test_rejects_missing_parent() -> None:
            A node without its parent is NOT_A_TREE.

        test_close_adds_prefixes() -> None:
            Building with close=True adds every missing prefix.

        test_shape_queries() -> None:
            Children, leaves, depth and branching of a small tree.
    """

    def test_rejects_missing_parent(self) -> None:
        with self.assertRaises(WorkbenchError) as context:
            FiniteTreeSnapshot(frozenset({(0,)}))
        self.assertEqual(context.exception.code, ErrorCode.NOT_A_TREE)
        self.assertEqual(context.exception.counterexample, ((0,), EPSILON))

    def test_close_adds_prefixes(self) -> None:
        tree = FiniteTreeSnapshot.of([(0, 1)], close=True)
        self.assertEqual(tree.nodes, frozenset({EPSILON, (0,), (0, 1)}))

    def test_shape_queries(self) -> None:
        tree = FiniteTreeSnapshot.of([(0, 0), (0, 1), (0, 2), (1,)], close=True)
        self.assertEqual(tree.children((0,)), [(0, 0), (0, 1), (0, 2)])
        self.assertEqual(tree.leaves(), frozenset({(0, 0), (0, 1), (0, 2), (1,)}))
        self.assertEqual(tree.depth, 2)
        self.assertEqual(tree.max_branching(), 3)
        self.assertEqual(list(tree), canonical_order(tree.nodes))


class TestStagedTree(TestCase):
    """
    Tests for staged c.e. trees.

    Methods:
        test_stages_are_monotone() -> None:
            T[s] grows with s and ends at the final tree.

        test_disappearing_node_is_not_monotone() -> None:
            A node vanishing from a later snapshot is rejected.

        test_stage_past_horizon() -> None:
            Stages at or past the horizon raise HORIZON_TOO_SMALL.

        test_apparition_order() -> None:
            Nodes of one stage are ordered by code.

        test_branching_bound() -> None:
            A node with too many children is reported with its children.
    """

    def setUp(self) -> None:
        self.tree = StagedTree.from_stages([[EPSILON], [(1,), (0,)], [(0, 1)]], branching_bound=2)

    def test_stages_are_monotone(self) -> None:
        self.assertEqual(self.tree.horizon, 3)
        self.assertEqual(self.tree.at(0), frozenset({EPSILON}))
        self.assertEqual(self.tree.at(1), frozenset({EPSILON, (0,), (1,)}))
        self.assertTrue(self.tree.at(1) <= self.tree.at(2))
        self.assertEqual(self.tree.final().nodes, self.tree.at(2))
        self.assertEqual(self.tree.stage_of((0, 1)), 2)
        self.assertIsNone(self.tree.stage_of((5,)))

    def test_disappearing_node_is_not_monotone(self) -> None:
        with self.assertRaises(WorkbenchError) as context:
            StagedTree.from_snapshots([{EPSILON}, {EPSILON, (0,)}, {EPSILON}])
        self.assertEqual(context.exception.code, ErrorCode.NOT_MONOTONE)

    def test_stage_past_horizon(self) -> None:
        with self.assertRaises(WorkbenchError) as context:
            self.tree.at(3)
        self.assertEqual(context.exception.code, ErrorCode.HORIZON_TOO_SMALL)

    def test_apparition_order(self) -> None:
        self.assertEqual(self.tree.apparition_order(), (EPSILON, (0,), (1,), (0, 1)))

    def test_branching_bound(self) -> None:
        self.assertTrue(self.tree.check_branching())
        wide = StagedTree(1, {EPSILON: 0, (0,): 0, (1,): 0, (2,): 0}, branching_bound=2)
        result = wide.check_branching()
        self.assertFalse(result)
        self.assertEqual(result.counterexample, (EPSILON, ((0,), (1,), (2,))))


def test_staged_tree_rejects_bad_stages() -> None:
    """
    Test that stages outside the horizon and an empty horizon are BAD_PARAMS.
    """
    with pytest.raises(WorkbenchError) as excinfo:
        StagedTree(2, {EPSILON: 2})
    assert excinfo.value.code == ErrorCode.BAD_PARAMS
    with pytest.raises(WorkbenchError) as excinfo:
        StagedTree(0, {})
    assert excinfo.value.code == ErrorCode.BAD_PARAMS


def test_find_split_triples() -> None:
    """
    Test that every pair of successors of a node forms a split triple.
    """
    tree = FiniteTreeSnapshot.of([(0,), (1,), (2,), (0, 0)], close=True)
    triples = find_split_triples(tree)
    assert triples == [SplitTriple(EPSILON, 0, 1), SplitTriple(EPSILON, 0, 2), SplitTriple(EPSILON, 1, 2)]
    assert triples[1].branch(0) == (0,)
    assert triples[1].branch(1) == (2,)
    assert find_split_triples(tree, within=[(0,)]) == []
    with pytest.raises(WorkbenchError):
        SplitTriple(EPSILON, 1, 1)


def test_psi_enumeration_skips_smaller_codes() -> None:
    """
    Test that psi keeps only nodes whose code beats every earlier one.
    """
    tree = StagedTree.from_stages([[EPSILON], [(1,)], [(0,)], [(1, 1)]])
    assert psi_enumeration(tree) == [EPSILON, (1,), (1, 1)]


def test_psi_enumeration_codes_increase() -> None:
    """
    Test on random staged trees that psi codes strictly increase and respect prefixes.
    """
    rng = make_rng(7)
    for _ in range(30):
        psi = psi_enumeration(random_staged_tree(rng))
        codes = [phi_code(sigma) for sigma in psi]
        assert codes == sorted(set(codes))
        for x, sigma in enumerate(psi):
            for y, tau in enumerate(psi):
                if sigma != tau and tau[: len(sigma)] == sigma:
                    assert x < y
