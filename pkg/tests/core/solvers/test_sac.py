import json
from pathlib import Path
from unittest import TestCase

import numpy as np
import pytest

from arbor.core.adversary.families import one_bad_element_family
from arbor.core.model.branching import BranchingSet, CombFamily, KPathFamily, OneBadFamily, PerfectBinaryFamily
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import Antichain, check_antichain
from arbor.core.model.strings import Str
from arbor.core.solvers.sac import (
    Chooser,
    Fail,
    FailReason,
    SacSolver,
    Schedule,
    SolverState,
    Success,
    advised_sac_solve,
    bad_element,
    bad_elements,
    find_antichain_of_size,
    probabilistic_sac_solve,
    write_trace,
)
from arbor.core.utils.constants import DEFAULT_ROUNDS
from arbor.core.utils.sampling import make_rng


class TestSchedule(TestCase):
    """
    Tests for the round sizes of the solvers.

    Methods:
        test_default_sizes() -> None:
            Round k asks for 2^(k+2) elements.

        test_shifted_sizes() -> None:
            Shifting by n asks for 2^(n+k+1) and lowers the failure bound to 2^-n.

        test_named() -> None:
            Schedules by name, and unknown names.

        test_depth_for() -> None:
            The depth the rounds of a schedule search to is the spine length of the matching one-bad family.
    """

    def test_default_sizes(self) -> None:
        schedule = Schedule()
        self.assertEqual([schedule.size(k) for k in range(3)], [4, 8, 16])
        self.assertEqual(schedule.bound, 0.5)

    def test_shifted_sizes(self) -> None:
        schedule = Schedule.shifted(3)
        self.assertEqual(schedule.size(0), 16)
        self.assertEqual(schedule.bound, 0.125)
        self.assertEqual(schedule.name, "shifted-3")
        with self.assertRaises(WorkbenchError):
            Schedule.shifted(0)

    def test_named(self) -> None:
        self.assertEqual(Schedule.named("default"), Schedule())
        self.assertEqual(Schedule.named("shifted", 2), Schedule(2))
        with self.assertRaises(WorkbenchError) as context:
            Schedule.named("greedy")
        self.assertEqual(context.exception.code, ErrorCode.BAD_PARAMS)

    def test_depth_for(self) -> None:
        self.assertEqual(Schedule().depth_for(DEFAULT_ROUNDS), 252)
        self.assertEqual(Schedule().depth_for(DEFAULT_ROUNDS), OneBadFamily(DEFAULT_ROUNDS).spine_length)
        self.assertEqual(Schedule.shifted(3).depth_for(DEFAULT_ROUNDS), 1008)
        self.assertEqual(Schedule.shifted(3).depth_for(DEFAULT_ROUNDS), OneBadFamily(DEFAULT_ROUNDS, 3).spine_length)
        self.assertEqual(Schedule().depth_for(0), 0)


@pytest.fixture
def one_bad() -> BranchingSet:
    """
    The one-bad family built for three rounds of the default schedule.

    Returns:
        The certified branching set.
    """
    return one_bad_element_family(rounds=3)


def first_good(branching: BranchingSet) -> Chooser:
    """
    A chooser taking the first element of each antichain that leaves infinitely many members.

    Args:
        branching: The certified branching set.

    Returns:
        The chooser.
    """

    def choose(state: SolverState, antichain: Antichain) -> Str:
        bad = bad_elements(branching, antichain, state.chosen)
        return next(sigma for sigma in antichain.nodes if sigma not in bad)

    return choose


def random_good(branching: BranchingSet, rng: np.random.Generator, counts: list[int]) -> Chooser:
    """
    A chooser taking a uniform good element and recording how many bad elements each antichain held.

    Args:
        branching: The certified branching set.
        rng: The generator of the picks.
        counts: Receives one count per round.

    Returns:
        The chooser.
    """

    def choose(state: SolverState, antichain: Antichain) -> Str:
        bad = bad_elements(branching, antichain, state.chosen)
        counts.append(len(bad))
        good = [sigma for sigma in antichain.nodes if sigma not in bad]
        return good[int(rng.integers(len(good)))]

    return choose


def test_find_antichain_collects_maximal_elements(one_bad: BranchingSet) -> None:
    """
    Test the first antichain of the one-bad family and its bad element.

    Args:
        one_bad: The certified branching set.
    """
    antichain = find_antichain_of_size(one_bad, 4)
    assert antichain.nodes == ((1, 0), (0, 1), (0, 0, 0), (1, 1))
    assert bad_element(one_bad, antichain) == (0, 0, 0)
    assert bad_elements(one_bad, antichain) == [(0, 0, 0)]


def test_second_round_holds_the_next_plant(one_bad: BranchingSet) -> None:
    """
    Test that after a good first pick the second antichain again holds exactly one plant.

    Args:
        one_bad: The certified branching set.
    """
    antichain = find_antichain_of_size(one_bad, 8, chosen=[(1, 0)])
    assert antichain.nodes == (
        (0, 1, 0, 0),
        (1, 1, 1),
        (0, 0, 1, 0),
        (1, 1, 0, 0),
        (0, 0, 0, 1),
        (0, 0, 0, 0, 0),
        (0, 1, 1, 0),
        (0, 1, 0, 1),
    )
    assert bad_elements(one_bad, antichain, [(1, 0)]) == [(0, 0, 0, 0, 0)]
    assert (0, 0, 0, 0, 0) in one_bad.family.plants


def test_every_round_offers_one_bad_element() -> None:
    """
    Test that every round of runs with random good picks meets exactly one bad element.
    """
    branching = one_bad_element_family()
    rng = make_rng(11)
    for _ in range(100):
        counts: list[int] = []
        outcome = SacSolver(branching).run(DEFAULT_ROUNDS, random_good(branching, rng, counts))
        assert isinstance(outcome, Success)
        assert counts == [1] * DEFAULT_ROUNDS


def test_default_depth_covers_the_rounds() -> None:
    """
    Test that the default one-bad set is deep enough for its rounds, under both schedules.
    """
    branching = one_bad_element_family()
    assert branching.depth == Schedule().depth_for(DEFAULT_ROUNDS) == 252
    assert isinstance(advised_sac_solve(branching, DEFAULT_ROUNDS), Success)
    shifted = one_bad_element_family(rounds=3, shift=2)
    assert shifted.depth == Schedule.shifted(2).depth_for(3) == 56
    assert isinstance(advised_sac_solve(shifted, 3, Schedule.shifted(2)), Success)


@pytest.mark.slow
def test_antichains_hold_at_most_one_bad_element() -> None:
    """
    Test over random restricted sets and antichains that at most one element leaves finitely many members.
    """
    families = [PerfectBinaryFamily(), KPathFamily(1), KPathFamily(3), CombFamily(0), CombFamily(2), OneBadFamily(3)]
    rng = make_rng(29)
    for index in range(500):
        branching = BranchingSet(families[index % len(families)], 40)
        chosen: list[Str] = []
        for _ in range(int(rng.integers(3))):
            antichain = find_antichain_of_size(branching, int(rng.integers(2, 9)), chosen=chosen)
            bad = bad_elements(branching, antichain, chosen)
            good = [sigma for sigma in antichain.nodes if sigma not in bad]
            chosen.append(good[int(rng.integers(len(good)))])
        n = int(rng.integers(2, 9))
        antichain = find_antichain_of_size(branching, n, chosen=chosen)
        assert len(antichain.nodes) == n
        assert len(bad_elements(branching, antichain, chosen)) <= 1


def test_find_antichain_flips_a_chain() -> None:
    """
    Test that a chain of the requested size is replaced by its siblings.
    """
    branching = BranchingSet(PerfectBinaryFamily(), 6)
    antichain = find_antichain_of_size(branching, 3, stream=[(0,), (0, 0), (0, 0, 0)])
    assert antichain.nodes == ((1,), (0, 1), (0, 0, 1))


def test_find_antichain_budget() -> None:
    """
    Test that running out of members is BUDGET_EXHAUSTED.
    """
    with pytest.raises(WorkbenchError) as excinfo:
        find_antichain_of_size(BranchingSet.explicit([(0,), (1,)]), 4)
    assert excinfo.value.code == ErrorCode.BUDGET_EXHAUSTED
    assert find_antichain_of_size(BranchingSet.explicit([(0,), (1,)]), 0) == Antichain(())


def test_state_advance() -> None:
    """
    Test that the state restricts to longer incomparable members.
    """
    state = SolverState(BranchingSet(PerfectBinaryFamily(), 4)).advance((1,))
    assert state.round == 1
    assert state.required_size == 8
    assert all(sigma[0] == 0 and len(sigma) > 1 for sigma in state.restricted())
    with pytest.raises(WorkbenchError) as excinfo:
        state.advance((1, 0))
    assert excinfo.value.code == ErrorCode.DOMAIN_MISMATCH


def test_bad_choice_collapses(one_bad: BranchingSet) -> None:
    """
    Test that picking the plant fails with BAD_CHOICE_COLLAPSE in the round of the pick.

    Args:
        one_bad: The certified branching set.
    """
    outcome = SacSolver(one_bad).run(3, lambda state, antichain: bad_element(one_bad, antichain, state.chosen))
    assert isinstance(outcome, Fail)
    assert outcome.reason is FailReason.BAD_CHOICE_COLLAPSE
    assert outcome.round == 0
    assert len(outcome.trace) == 1
    assert outcome.trace[-1].chosen == (0, 0, 0)
    assert outcome.trace[-1].bad_present
    assert outcome.trace[-1].outcome == "BAD_CHOICE_COLLAPSE"


def test_last_round_bad_pick_collapses() -> None:
    """
    Test that a plant picked in the final round fails the run instead of returning it.
    """
    branching = one_bad_element_family(rounds=2)
    good = first_good(branching)

    def choose(state: SolverState, antichain: Antichain) -> Str:
        if state.round == 0:
            return good(state, antichain)
        return bad_elements(branching, antichain, state.chosen)[0]

    outcome = SacSolver(branching).run(2, choose)
    assert isinstance(outcome, Fail)
    assert outcome.reason is FailReason.BAD_CHOICE_COLLAPSE
    assert outcome.round == 1
    assert [record.chosen for record in outcome.trace] == [(1, 0), (0, 0, 0, 0, 0)]
    assert [record.outcome for record in outcome.trace] == ["continue", "BAD_CHOICE_COLLAPSE"]


def test_uncertified_failure_is_a_timeout() -> None:
    """
    Test that a failed search on an explicit set is SEARCH_TIMEOUT.
    """
    outcome = probabilistic_sac_solve(BranchingSet.explicit([(0,), (1,)]), rounds=1)
    assert isinstance(outcome, Fail)
    assert outcome.reason is FailReason.SEARCH_TIMEOUT
    assert outcome.round == 0


def test_advised_solve(one_bad: BranchingSet) -> None:
    """
    Test that the advised solver never picks a plant.

    Args:
        one_bad: The certified branching set.
    """
    outcome = advised_sac_solve(one_bad, rounds=2)
    assert isinstance(outcome, Success)
    assert len(outcome.antichain) == 2
    assert check_antichain(outcome.antichain.nodes)
    assert not set(outcome.antichain.nodes) & set(one_bad.family.plants)
    with pytest.raises(WorkbenchError) as excinfo:
        advised_sac_solve(BranchingSet.explicit([(0,), (1,)]), rounds=1)
    assert excinfo.value.code == ErrorCode.NO_CERTIFICATE


def test_probabilistic_solve_on_perfect_tree() -> None:
    """
    Test that uniform picks on the perfect binary tree always succeed.
    """
    branching = BranchingSet(PerfectBinaryFamily(), 12)
    for seed in range(3):
        outcome = probabilistic_sac_solve(branching, rounds=2, seed=seed)
        assert isinstance(outcome, Success)
        assert check_antichain(outcome.antichain.nodes)
        assert all(sigma in branching for sigma in outcome.antichain.nodes)
        assert [record.bad_present for record in outcome.trace] == [False, False]


def test_probabilistic_solve_fails_only_on_plants(one_bad: BranchingSet) -> None:
    """
    Test that uniform picks on the one-bad family fail exactly when the last pick is a plant.

    Args:
        one_bad: The certified branching set.
    """
    failures = 0
    for seed in range(40):
        outcome = probabilistic_sac_solve(one_bad, rounds=3, seed=seed)
        picks = [record.chosen for record in outcome.trace]
        if outcome.ok:
            assert not set(picks) & set(one_bad.family.plants)
            continue
        failures += 1
        assert outcome.reason is FailReason.BAD_CHOICE_COLLAPSE
        assert outcome.round == len(picks) - 1
        assert picks[-1] in one_bad.family.plants
        assert not set(picks[:-1]) & set(one_bad.family.plants)
    assert 0 < failures < 40


def test_probabilistic_solve_is_seeded(one_bad: BranchingSet) -> None:
    """
    Test that equal seeds give equal runs.

    Args:
        one_bad: The certified branching set.
    """
    assert probabilistic_sac_solve(one_bad, rounds=2, seed=5) == probabilistic_sac_solve(one_bad, rounds=2, seed=5)


def test_write_trace(tmp_path: Path) -> None:
    """
    Test that the trace has one JSON record per round.

    Args:
        tmp_path: Temporary directory.
    """
    outcome = advised_sac_solve(one_bad_element_family(rounds=3), rounds=2)
    path = write_trace(tmp_path / "solve.trace.jsonl", outcome)
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert [record["k"] for record in records] == [0, 1]
    assert records[0]["chosen"] is not None
    assert records[0]["outcome"] == "continue"
