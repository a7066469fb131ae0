import json

import pytest

from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import Antichain, HomogeneousSet
from arbor.core.model.trees import StagedTree
from arbor.core.reductions.base import Reduction
from arbor.core.reductions.registry import CLASS_MAP, get_reduction, list_reductions
from arbor.core.utils.sampling import make_rng

INSTANCES_PER_REDUCTION = 500


def test_registry_lists_every_reduction() -> None:
    """
    Test that the registry holds the twelve reductions under their names.
    """
    assert len(list_reductions()) == 12
    assert set(CLASS_MAP) == {
        "path-to-antichain",
        "tac-to-tcac-ce",
        "tcac-ce-to-tcac",
        "rt1k",
        "sac-to-tac",
        "ads",
        "em",
        "sher-instance",
        "tcac-to-sher",
        "delta2",
        "semi-ancestry",
        "order-to-coloring",
    }
    for name, cls in CLASS_MAP.items():
        assert cls.name == name
        assert cls.source_kind and cls.target_kind


def test_unknown_reduction() -> None:
    """
    Test that an unknown reduction name is BAD_PARAMS and names the known ones.
    """
    with pytest.raises(WorkbenchError) as excinfo:
        get_reduction("no-such-reduction")
    assert excinfo.value.code == ErrorCode.BAD_PARAMS
    assert "ads" in str(excinfo.value)


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(CLASS_MAP))
def test_soundness_on_random_instances(name: str) -> None:
    """
    Test that every brute-force target solution maps back to a valid source solution.

    Args:
        name: The registered reduction name.
    """
    reduction = get_reduction(name)
    rng = make_rng(sorted(CLASS_MAP).index(name))
    checked = 0
    for _ in range(INSTANCES_PER_REDUCTION):
        run = reduction.map_instance(reduction.random_source(rng))
        for target_solution in reduction.target_solutions(run):
            report = reduction.check_soundness(run, target_solution)
            assert report.passed, report.to_json()
            checked += 1
    assert checked > 0


def test_wrong_source_type() -> None:
    """
    Test that a source of the wrong problem is TYPE_MISMATCH.
    """
    with pytest.raises(WorkbenchError) as excinfo:
        get_reduction("ads").map_instance(HomogeneousSet(0, ()))
    assert excinfo.value.code == ErrorCode.TYPE_MISMATCH


def test_invalid_target_solution_is_rejected() -> None:
    """
    Test that the solution map refuses target solutions that fail validation.
    """
    reduction = get_reduction("tcac-ce-to-tcac")
    run = reduction.map_instance(StagedTree.from_stages([[()], [(0,)], [(0, 1)]]))
    with pytest.raises(WorkbenchError) as excinfo:
        reduction.map_solution(run, Antichain.of([(2,), (2, 8)]))
    assert excinfo.value.code == ErrorCode.INVALID_SOLUTION


def test_report_serialization() -> None:
    """
    Test the fields of a soundness report.
    """
    reduction = get_reduction("tcac-ce-to-tcac")
    source = StagedTree.from_stages([[()], [(0,)], [(0, 1)]])
    run = reduction.map_instance(source)
    report = reduction.check_soundness(run, Antichain.of([(2, 8)]))
    data = json.loads(report.to_json())
    assert data["reduction"] == "tcac-ce-to-tcac"
    assert data["soundness"] == "pass"
    assert data["horizon"] == 3
    assert data["solution"] == {"kind": "antichain", "nodes": ["0 1"]}
    assert len(data["instance_digest"]) == 64


def test_unsound_error() -> None:
    """
    Test that the unsoundness error carries its code and counterexample.
    """
    error = Reduction.UnsoundError("ads", ((0,), (0, 1)))
    assert error.code == ErrorCode.UNSOUND
    assert error.code.exit_code == 1
    assert error.counterexample == ((0,), (0, 1))
