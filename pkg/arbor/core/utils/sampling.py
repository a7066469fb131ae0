"""
Arbor Sampling.

Seeded random instances for the soundness sweeps, the bench and `arbor gen`. Every draw goes through a numpy
`Generator` over the documented bit generator, so the same seed gives the same instance on every platform.

Imports:
    - numpy: The seeded generator.

Functions:
    - make_rng: The generator for a seed.
    - random_branching_tree: A small completely branching binary tree.
    - random_staged_tree: A small c.e. tree with a declared branching bound.
    - random_unary_coloring: A coloring of naturals.
    - random_pair_coloring: A coloring of pairs.
    - random_linear_order: A random linear order.
    - random_approx: Stage approximations that settle in the second half of the horizon.
"""

import numpy as np

from arbor.core.model.colorings import Approx2Sequence, LinearOrderInstance, PairColoring, UnaryColoring
from arbor.core.model.strings import EPSILON, Str
from arbor.core.model.trees import FiniteTreeSnapshot, StagedTree
from arbor.core.utils.constants import RNG_ALGORITHM


def make_rng(seed: int) -> np.random.Generator:
    """
    A generator over the repository's bit generator.
    """
    bit_generator = getattr(np.random, RNG_ALGORITHM)(seed)
    return np.random.Generator(bit_generator)


def random_branching_tree(rng: np.random.Generator, depth: int = 4, expand: float = 0.6) -> FiniteTreeSnapshot:
    """
    A completely branching binary tree: each node up to `depth` gets both children with probability `expand`.

    The root always expands.
    """
    nodes = {EPSILON}
    frontier: list[Str] = [EPSILON]
    while frontier:
        sigma = frontier.pop()
        if len(sigma) >= depth or (sigma and rng.random() >= expand):
            continue
        for item in (0, 1):
            nodes.add((*sigma, item))
            frontier.append((*sigma, item))
    return FiniteTreeSnapshot(frozenset(nodes))


def random_staged_tree(
    rng: np.random.Generator,
    horizon: int = 8,
    arity: int = 3,
    per_stage: int = 2,
    branching_bound: int | None = None,
) -> StagedTree:
    """
    A c.e. tree: the root at stage 0, then up to `per_stage` new children of existing nodes at every stage.

    Entries are drawn below `arity`; with no bound given, the declared bound is `arity`.
    """
    first: dict[Str, int] = {EPSILON: 0}
    for stage in range(1, horizon):
        for _ in range(int(rng.integers(0, per_stage + 1))):
            nodes = sorted(first)
            parent = nodes[int(rng.integers(len(nodes)))]
            child = (*parent, int(rng.integers(arity)))
            first.setdefault(child, stage)
    return StagedTree(horizon, first, arity if branching_bound is None else branching_bound)


def random_unary_coloring(rng: np.random.Generator, num_colors: int = 2, horizon: int = 8) -> UnaryColoring:
    return UnaryColoring(num_colors, tuple(int(c) for c in rng.integers(num_colors, size=horizon)))


def random_pair_coloring(rng: np.random.Generator, horizon: int = 8, num_colors: int = 2) -> PairColoring:
    table = rng.integers(num_colors, size=(horizon, horizon))
    return PairColoring.from_function(num_colors, horizon, lambda x, y: int(table[x, y]))


def random_linear_order(rng: np.random.Generator, horizon: int = 8) -> LinearOrderInstance:
    """
    A linear order given by a random ranking of the naturals below the horizon.
    """
    return LinearOrderInstance.from_ranking([int(r) for r in rng.permutation(horizon)])


def random_approx(rng: np.random.Generator, count: int = 1, horizon: int = 8, density: float = 0.5) -> Approx2Sequence:
    """
    Random approximations whose membership of each `x < horizon / 2` is fixed from stage `horizon / 2` on.
    """
    half = horizon // 2
    noise = rng.random((count, horizon, horizon)) < density
    limits = rng.random((count, horizon)) < density

    def member(e: int, s: int, x: int) -> bool:
        if x < half and s >= half:
            return bool(limits[e, x])
        return bool(noise[e, s, x])

    return Approx2Sequence.from_function(count, horizon, member)
