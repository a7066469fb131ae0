"""
Arbor Instance Families.

The catalog of instances `arbor gen` can produce. A family is named `name` or `name:arg`, where the argument sets the
family's main parameter (the colors of `rt1k`, the rounds of `one-bad`, the table file of `marker`). Certified
branching families are written as TREE files with a certificate sidecar; the marker construction is written as CETREE
with its trace.

Classes:
    - GenOptions: Parameters shared by the generators.
    - Generated: A generated instance, with the marker trace when there is one.

Functions:
    - one_bad_element_family: The certified family with one planted bad element per round.
    - random_marker_table: Approximation tables against which every marker requirement resolves.
    - parse_family: Split a family name from its argument.
    - generate: Build an instance of a catalog family.
"""

from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from arbor.core.adversary.marker import ConstructionTrace, movable_marker_tree
from arbor.core.model.branching import (
    BranchingSet,
    Certificate,
    CombFamily,
    KPathFamily,
    OneBadFamily,
    PerfectBinaryFamily,
)
from arbor.core.model.colorings import Approx2Sequence, Delta2Instance, UnaryColoring
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.strings import phi_code
from arbor.core.reductions.tac import rt1k_instance
from arbor.core.utils.constants import DEFAULT_FAMILY_DEPTH, DEFAULT_ROUNDS
from arbor.core.utils.formats import Instance, read_instance
from arbor.core.utils.sampling import (
    make_rng,
    random_approx,
    random_branching_tree,
    random_linear_order,
    random_pair_coloring,
    random_staged_tree,
    random_unary_coloring,
)

ALWAYS_OUTSIDE = phi_code((2,))


def one_bad_element_family(depth: int | None = None, rounds: int = DEFAULT_ROUNDS, shift: int = 1) -> BranchingSet:
    """
    A certified set where the antichain of each of `rounds` rounds holds exactly one bad element, a spine plant.

    Choosing a plant leaves finitely many incomparable members, so a solver that picks it fails; every other element
    of the antichain leaves an infinite set. The spine is as long as the antichains of the schedule with shift
    `shift` add up to over `rounds` rounds, which is also the depth those rounds search to. With `rounds=0` the set
    is the perfect binary tree.

    Args:
        depth: Depth to which the set is represented; the spine length, and at least the family default, when None.
        rounds: Number of rounds with a plant in their antichain.
        shift: Shift of the antichain size schedule `2^(shift+k+1)`; 1 is the default schedule.

    Returns:
        The certified branching set; `family.plants` names the plants.

    Raises:
        WorkbenchError: BAD_PARAMS if `depth` is shorter than the spine.
    """
    family = OneBadFamily(rounds, shift)
    if depth is None:
        depth = max(family.spine_length, DEFAULT_FAMILY_DEPTH)
    elif depth < family.spine_length:
        raise WorkbenchError(
            ErrorCode.BAD_PARAMS,
            f"{rounds} rounds of one-bad with shift {shift} search to depth {family.spine_length}, got depth {depth}",
        )
    return BranchingSet(family, depth)


def random_marker_table(rng: np.random.Generator, count: int = 2, horizon: int = 16) -> Approx2Sequence:
    """
    Random sets of string codes, constant from half the horizon on.

    Every set keeps the code of `⟨2⟩` from then on, a string outside every binary tree, so each marker has a
    candidate at every late step.

    Raises:
        WorkbenchError: BAD_PARAMS if the horizon is too short to hold that code.
    """
    if horizon <= ALWAYS_OUTSIDE:
        raise WorkbenchError(ErrorCode.BAD_PARAMS, f"marker tables need a horizon above {ALWAYS_OUTSIDE}")
    half = horizon // 2
    noise = rng.random((count, horizon, horizon)) < 0.5
    limits = rng.random((count, horizon)) < 0.5

    def member(e: int, s: int, x: int) -> bool:
        if s < half:
            return bool(noise[e, s, x])
        return x == ALWAYS_OUTSIDE or bool(limits[e, x])

    return Approx2Sequence.from_function(count, horizon, member)


@dataclass
class GenOptions:
    """
    Attributes:
        depth: Depth of trees and branching sets.
        rounds: Rounds of the one-bad family.
        shift: Schedule shift the one-bad family is built for.
        colors: Number of colors.
        values: Explicit colors of an `rt1k` coloring; random when None.
        horizon: Horizon of random instances and marker tables.
        count: Number of sets of approximation tables.
        stages: Steps of the marker construction; four times the table horizon when None.
        tooth: Length of the comb spine.
        seed: Seed of random instances.
    """

    depth: int = DEFAULT_FAMILY_DEPTH
    rounds: int = DEFAULT_ROUNDS
    shift: int = 1
    colors: int = 2
    values: tuple[int, ...] | None = None
    horizon: int = 8
    count: int = 1
    stages: int | None = None
    tooth: int = 0
    seed: int = 0


@dataclass(frozen=True)
class Generated:
    instance: Instance
    trace: ConstructionTrace | None = None


Generator = Callable[[str | None, GenOptions], Generated]


def parse_family(family: str) -> tuple[str, str | None]:
    name, _, arg = family.partition(":")
    return name, arg or None


def _int_arg(name: str, arg: str | None, default: int) -> int:
    if arg is None:
        return default
    try:
        return int(arg)
    except ValueError as e:
        raise WorkbenchError(ErrorCode.BAD_PARAMS, f"{name} takes an integer argument, got {arg!r}") from e


def _rt1k(arg: str | None, options: GenOptions) -> Generated:
    colors = _int_arg("rt1k", arg, options.colors)
    if options.values is not None:
        coloring = UnaryColoring(colors, tuple(options.values))
    else:
        coloring = random_unary_coloring(make_rng(options.seed), colors, options.horizon)
    return Generated(rt1k_instance(coloring))


def _marker(arg: str | None, options: GenOptions) -> Generated:
    if arg is None:
        approx = random_marker_table(make_rng(options.seed), options.count, options.horizon)
    else:
        loaded = read_instance(Path(arg))
        approx = loaded.approx if isinstance(loaded, Delta2Instance) else loaded
        if not isinstance(approx, Approx2Sequence):
            raise WorkbenchError(ErrorCode.TYPE_MISMATCH, f"{arg} does not hold an APPROX table")
    stages = options.stages if options.stages is not None else 4 * approx.horizon
    tree, trace = movable_marker_tree(approx, stages)
    return Generated(tree, trace)


def _certified(certificate: Callable[[str | None, GenOptions], Certificate]) -> Generator:
    def build(arg: str | None, options: GenOptions) -> Generated:
        return Generated(BranchingSet.from_certificate(certificate(arg, options), options.depth))

    return build


def _random(build: Callable[[np.random.Generator, GenOptions], Instance]) -> Generator:
    def generate_random(_: str | None, options: GenOptions) -> Generated:
        return Generated(build(make_rng(options.seed), options))

    return generate_random


def _perfect_binary(_: str | None, options: GenOptions) -> Certificate:
    return Certificate(PerfectBinaryFamily.family_id)


def _k_path(arg: str | None, options: GenOptions) -> Certificate:
    return Certificate(KPathFamily.family_id, {"k": _int_arg("k-path", arg, options.colors)})


def _comb(arg: str | None, options: GenOptions) -> Certificate:
    return Certificate(CombFamily.family_id, {"tooth": _int_arg("comb", arg, options.tooth)})


def _one_bad(arg: str | None, options: GenOptions) -> Certificate:
    family = OneBadFamily(_int_arg("one-bad", arg, options.rounds), options.shift)
    return Certificate(OneBadFamily.family_id, family.params)


CATALOG: dict[str, Generator] = {
    PerfectBinaryFamily.family_id: _certified(_perfect_binary),
    KPathFamily.family_id: _certified(_k_path),
    CombFamily.family_id: _certified(_comb),
    OneBadFamily.family_id: _certified(_one_bad),
    "rt1k": _rt1k,
    "marker": _marker,
    "random-tree": _random(lambda rng, o: random_branching_tree(rng, o.depth)),
    "random-cetree": _random(lambda rng, o: random_staged_tree(rng, o.horizon)),
    "random-coloring": _random(lambda rng, o: random_pair_coloring(rng, o.horizon, o.colors)),
    "random-ucolor": _random(lambda rng, o: random_unary_coloring(rng, o.colors, o.horizon)),
    "random-order": _random(lambda rng, o: random_linear_order(rng, o.horizon)),
    "random-approx": _random(lambda rng, o: random_approx(rng, o.count, o.horizon)),
}


def generate(family: str, options: GenOptions | None = None) -> Generated:
    """
    Build an instance of a catalog family.

    Args:
        family: The family, as `name` or `name:arg`.
        options: Generator parameters; an argument in `family` overrides the matching option.

    Returns:
        The instance, and the construction trace for `marker`.

    Raises:
        WorkbenchError: UNKNOWN_FAMILY for names outside the catalog, BAD_PARAMS for bad parameters.
    """
    name, arg = parse_family(family)
    generator = CATALOG.get(name)
    if generator is None:
        raise WorkbenchError(ErrorCode.UNKNOWN_FAMILY, f"unknown family {name!r}; known: {', '.join(CATALOG)}")
    return generator(arg, options or GenOptions())
