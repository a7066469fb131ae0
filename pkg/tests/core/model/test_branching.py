import pytest

from arbor.core.model.branching import (
    BranchingSet,
    Certificate,
    CombFamily,
    ExplicitFamily,
    KPathFamily,
    OneBadFamily,
    PerfectBinaryFamily,
    is_completely_branching,
)
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.strings import EPSILON, phi_code


@pytest.fixture
def perfect() -> BranchingSet:
    """
    The perfect binary tree represented to depth 4.

    Returns:
        The branching set.
    """
    return BranchingSet(PerfectBinaryFamily(), 4)


def test_perfect_binary_listing(perfect: BranchingSet) -> None:
    """
    Test the members of the perfect binary tree, listed by code.

    Args:
        perfect: The perfect binary branching set.
    """
    assert len(perfect.tree_nodes()) == 31
    assert BranchingSet(PerfectBinaryFamily(), 2).members() == [(0,), (1,), (0, 0), (1, 0), (0, 1), (1, 1)]
    codes = [phi_code(sigma) for sigma in perfect.members()]
    assert codes == sorted(codes)
    assert (0, 1, 1, 0) in perfect
    assert (0, 1, 1, 0, 1) not in perfect
    assert EPSILON not in perfect


def test_stream_avoids_chosen_cones(perfect: BranchingSet) -> None:
    """
    Test that the stream skips everything comparable to or shorter than a chosen string.

    Args:
        perfect: The perfect binary branching set.
    """
    restricted = list(perfect.stream([(0,)], max_depth=2))
    assert restricted == [(1, 0), (1, 1)]
    assert all(sigma[0] == 1 and len(sigma) > 1 for sigma in perfect.stream([(0,)]))


def test_k_path_family() -> None:
    """
    Test that the k-path family lives exactly on `1^i 0*` for `i < k`.
    """
    family = KPathFamily(2)
    assert family.live(EPSILON)
    assert family.live((1, 0, 0))
    assert not family.live((1, 1))
    assert not family.live((0, 1))
    assert family.member((1, 1))
    assert not family.cone_infinite((1, 1))
    with pytest.raises(WorkbenchError) as excinfo:
        KPathFamily(0)
    assert excinfo.value.code == ErrorCode.BAD_PARAMS


def test_comb_family() -> None:
    """
    Test that comb teeth are finite and the spine infinite.
    """
    family = CombFamily(tooth=2)
    assert family.live((0, 1, 0))
    assert not family.live((0, 1, 0, 0))
    assert family.cone_infinite((0, 0))
    assert not family.cone_infinite((0, 1))


def test_one_bad_family_plants() -> None:
    """
    Test the toothed spine of the one-bad family and that a plant leaves finitely many incomparable members.
    """
    family = OneBadFamily(1)
    assert family.spine_length == 4
    assert family.plants == ((0,), (0, 0), (0, 0, 0), (0, 0, 0, 0))
    assert family.member((0, 1, 1, 1, 0))
    assert not family.member((0, 1, 1, 1, 0, 0))
    assert family.member((0, 0, 0, 0, 1, 1, 1, 1))
    branching = BranchingSet(family, 8)
    assert not branching.is_infinite_restriction([(0, 0, 0)])
    assert branching.is_infinite_restriction([(0, 0, 1)])
    assert branching.incomparable_infinite((1,))
    assert OneBadFamily(0).live((1, 0, 1))
    assert OneBadFamily(2, shift=2).spine_length == 24
    assert OneBadFamily(2, shift=2).params == {"rounds": 2, "shift": 2}
    assert OneBadFamily(2).params == {"rounds": 2}


def test_restriction_inside_the_cone() -> None:
    """
    Test the traversal answer for strings above the spine, where the family leaves the question open.
    """
    branching = BranchingSet(OneBadFamily(1), 8)
    assert branching.is_infinite_restriction([(0, 0, 0, 0, 0)])
    assert not branching.is_infinite_restriction([(0, 0, 0, 0, 0), (0, 0, 0, 0, 1)])
    assert not branching.is_infinite_restriction([(1,), (0, 0, 0, 0, 0), (0, 0, 0, 0, 1)])
    long_spine = BranchingSet(OneBadFamily(6, shift=3), 8)
    tip = (0,) * long_spine.family.spine_length
    assert long_spine.is_infinite_restriction([(*tip, 0)])
    assert not long_spine.is_infinite_restriction([(*tip, 0), (*tip, 1)])


def test_perfect_binary_restrictions(perfect: BranchingSet) -> None:
    """
    Test infinitude of restrictions on the perfect binary tree.

    Args:
        perfect: The perfect binary branching set.
    """
    assert perfect.is_infinite_restriction([(0,)])
    assert perfect.is_infinite_restriction([(0,), (1, 0)])
    assert not perfect.is_infinite_restriction([(0,), (1,)])
    assert not perfect.is_infinite_restriction([EPSILON])


def test_explicit_sets_have_no_certificate() -> None:
    """
    Test that explicit sets answer membership but refuse infinitude queries.
    """
    branching = BranchingSet.explicit([(0,), (1,), (1, 0), (1, 1)])
    assert branching.depth == 2
    assert not branching.certified
    assert (1, 0) in branching
    assert (0, 0) not in branching
    with pytest.raises(WorkbenchError) as excinfo:
        branching.is_infinite_restriction([(0,)])
    assert excinfo.value.code == ErrorCode.NO_CERTIFICATE
    with pytest.raises(WorkbenchError) as excinfo:
        _ = branching.certificate
    assert excinfo.value.code == ErrorCode.NO_CERTIFICATE


def test_explicit_sets_must_be_completely_branching() -> None:
    """
    Test that a missing sibling is rejected with the offending member.
    """
    assert is_completely_branching([(0,), (1,)])
    assert is_completely_branching([(0,)]).counterexample == ((0,), (1,))
    assert is_completely_branching([(2,)]).counterexample == ((2,),)
    with pytest.raises(WorkbenchError) as excinfo:
        ExplicitFamily([(0,), (1,), (0, 0)])
    assert excinfo.value.code == ErrorCode.NOT_COMPLETELY_BRANCHING


def test_certificate_round_trip() -> None:
    """
    Test that certificates rebuild their family and reject unknown ones.
    """
    certificate = BranchingSet(KPathFamily(3)).certificate
    assert certificate.to_dict() == {"family": "k-path", "params": {"k": 3}}
    assert Certificate.from_dict(certificate.to_dict()).build() == KPathFamily(3)
    assert BranchingSet.from_certificate(certificate, depth=5) == BranchingSet(KPathFamily(3), 5)

    with pytest.raises(WorkbenchError) as excinfo:
        Certificate("no-such-family").build()
    assert excinfo.value.code == ErrorCode.UNKNOWN_FAMILY
    with pytest.raises(WorkbenchError) as excinfo:
        Certificate("k-path", {"z": 1}).build()
    assert excinfo.value.code == ErrorCode.BAD_PARAMS
    with pytest.raises(WorkbenchError) as excinfo:
        Certificate.from_dict({"params": {}})
    assert excinfo.value.code == ErrorCode.PARSE_ERROR
