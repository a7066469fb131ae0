"""
Arbor Forbidden-Pattern Reductions.

Ramsey-type problems solved from sets avoiding a three-element forbidden pattern. A set with semi-ancestry for a
color yields a homogeneous set, which in turn yields a subset contained in, or disjoint from, a Δ2 set; a set on which
the agreement coloring of a linear order is semi-hereditary yields a monotone sequence of the order.

Classes:
    - Delta2: Subsets of a Δ2 set or its complement from sets with semi-ancestry.
    - SemiAncestry: Homogeneous sets from sets with semi-ancestry.
    - OrderToColoring: Monotone sequences from sets on which the agreement coloring is semi-hereditary.

Functions:
    - delta2_coloring: `f(x, y) = 1` iff `x` is in the stage-`y` approximation.
    - semi_ancestry_extract: A homogeneous subset of a set with semi-ancestry.
    - d22_extract: A subset of the limit set or of its complement from a homogeneous set.
    - order_to_coloring: The agreement coloring of a linear order.
    - semi_hereditary_set_to_ads: A monotone sequence from a set on which the agreement coloring is semi-hereditary.
"""

import numpy as np

from arbor.core.model.colorings import (
    ColoringCertificate,
    Delta2Instance,
    LinearOrderInstance,
    PairColoring,
    check_homogeneous,
    check_semi_ancestry,
    check_semi_hereditary,
)
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import (
    AscendingSeq,
    DescendingSeq,
    HomogeneousSet,
    SemiAncestralSet,
    SemiHereditarySet,
    Solution,
)
from arbor.core.reductions.base import Reduction, ReductionRun
from arbor.core.reductions.orders import Assume, eventual_start, skip_assumption
from arbor.core.solvers.brute import greedy_subset, max_homogeneous_set
from arbor.core.utils import sampling


def delta2_coloring(instance: Delta2Instance) -> PairColoring:
    """
    Color `{x, y}` with `x < y` by 1 iff `x` belongs to the stage-`y` approximation of the set.

    Columns of naturals below the settled bound are constant from the second half of the horizon on, and the
    coloring carries their limits as a certificate.

    Args:
        instance: The stagewise approximation of a Δ2 set.

    Returns:
        The certified 2-coloring.
    """
    approx, e = instance.approx, instance.index
    limit = instance.limit()
    certificate = ColoringCertificate("limit-table", {"limits": [int(x in limit) for x in range(approx.settled)]})
    return PairColoring.from_function(2, approx.horizon, lambda x, y: int(approx(e, y, x)), certificate)


def semi_ancestry_extract(
    ancestral: SemiAncestralSet,
    f: PairColoring,
    assume: Assume = skip_assumption,
) -> HomogeneousSet:
    """
    Extract a homogeneous subset of a set with semi-ancestry for `i`.

    The later partners `b` of any `a` with `f(a, b) = i` are pairwise `i`. If some `a` has partners in the final third
    of the set, its partners are taken to be infinitely many and returned. Otherwise the elements with no partner at
    all are pairwise `1-i`, and the report flags that their columns are taken to have settled on `1-i`.

    Args:
        ancestral: A set with semi-ancestry for its color.
        f: The coloring.
        assume: Receives the assumptions the extraction relies on.

    Returns:
        The homogeneous subset.

    Raises:
        WorkbenchError: NOT_SEMI_ANCESTRAL with a violating triple.
    """
    color = ancestral.color
    points = sorted(ancestral.points)
    check = check_semi_ancestry(f, color, points)
    if not check:
        message = f"set has no semi-ancestry for {color}"
        raise WorkbenchError(ErrorCode.NOT_SEMI_ANCESTRAL, message, check.counterexample)
    tail = eventual_start(len(points))
    partners = {a: [k for k in range(j + 1, len(points)) if f(a, points[k]) == color] for j, a in enumerate(points)}
    recurring = [a for a in points if partners[a] and partners[a][-1] >= tail]
    if recurring:
        best = max(recurring, key=lambda a: len(partners[a]))
        assume(f"partners of {best} in the final third recur")
        return HomogeneousSet.of(color, (points[k] for k in partners[best]))
    assume(f"columns with no {color} partner within the horizon settle on {1 - color}")
    return HomogeneousSet.of(1 - color, (a for a in points if not partners[a]))


def d22_extract(homogeneous: HomogeneousSet, instance: Delta2Instance) -> HomogeneousSet:
    """
    A subset of the limit set (color 1) or of its complement (color 0) from a set homogeneous for its Δ2 coloring.

    Keeps the settled elements `x` of the set that have a later element `y` in the second half of the horizon, where
    membership of `x` in the stage-`y` approximation is its membership in the limit.

    Args:
        homogeneous: A homogeneous set of the Δ2 coloring.
        instance: The approximation the coloring was built from.

    Returns:
        The subset, colored 1 inside the limit set and 0 outside it.

    Raises:
        WorkbenchError: NOT_HOMOGENEOUS with a violating pair.
    """
    f = delta2_coloring(instance)
    check = check_homogeneous(f, homogeneous.points, homogeneous.color)
    if not check:
        raise WorkbenchError(ErrorCode.NOT_HOMOGENEOUS, "set is not homogeneous", check.counterexample)
    settled = instance.approx.settled
    points = sorted(homogeneous.points)
    late = [y for y in points if y >= settled]
    kept = [x for x in points if x < settled and any(y > x for y in late)]
    return HomogeneousSet.of(homogeneous.color, kept)


def _semi_ancestral_targets(f: PairColoring) -> list[Solution]:
    targets: list[Solution] = []
    points = range(f.horizon)
    for color in (0, 1):
        targets.append(SemiAncestralSet(color, max_homogeneous_set(f, color).points))
        targets.append(SemiAncestralSet(color, greedy_subset(points, lambda c, i=color: check_semi_ancestry(f, i, c))))
    return targets


class SemiAncestry(Reduction):
    """
    Homogeneous sets of a coloring from sets on which it has semi-ancestry.
    """

    name = "semi-ancestry"
    source_kind = "homogeneous set problem on a coloring of pairs"
    target_kind = "semi-ancestral set problem on the same coloring"
    source_types = (PairColoring,)

    def _map_instance(self, source: PairColoring) -> ReductionRun:
        return ReductionRun(source, source)

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if not isinstance(target_solution, SemiAncestralSet):
            raise self._wrong_variant(target_solution)
        return semi_ancestry_extract(target_solution, run.target, run.assume)

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        return _semi_ancestral_targets(run.target)

    def random_source(self, rng: np.random.Generator) -> PairColoring:
        return sampling.random_pair_coloring(rng)


class Delta2(Reduction):
    """
    Subsets of a Δ2 set or of its complement from sets with semi-ancestry for its coloring.
    """

    name = "delta2"
    source_kind = "Δ2 subset-or-disjoint problem"
    target_kind = "semi-ancestral set problem on a coloring of pairs"
    source_types = (Delta2Instance,)

    def _map_instance(self, source: Delta2Instance) -> ReductionRun:
        return ReductionRun(source, delta2_coloring(source))

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if not isinstance(target_solution, SemiAncestralSet):
            raise self._wrong_variant(target_solution)
        homogeneous = semi_ancestry_extract(target_solution, run.target, run.assume)
        return d22_extract(homogeneous, run.source)

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        return _semi_ancestral_targets(run.target)

    def random_source(self, rng: np.random.Generator) -> Delta2Instance:
        return Delta2Instance(sampling.random_approx(rng), 0)


def order_to_coloring(order: LinearOrderInstance) -> PairColoring:
    """
    Color `{x, y}` with `x < y` by 1 iff `x <_L y`, that is, iff the order agrees with the natural order.

    Args:
        order: The linear order on `[0, N)`.

    Returns:
        The agreement coloring.
    """
    return PairColoring.from_function(2, order.horizon, lambda x, y: int(order(x, y)))


def semi_hereditary_set_to_ads(
    hereditary: SemiHereditarySet,
    f: PairColoring,
    assume: Assume = skip_assumption,
) -> AscendingSeq | DescendingSeq:
    """
    Build a monotone sequence of a linear order from a set on which its agreement coloring is semi-hereditary for `i`.

    On such a set, `f(x, y) = 1-i` forces `f(x, z) = 1-i` for every later `z`. If elements with a later `1-i` partner
    occur in the final third, they are taken to recur and a sequence moving in the direction of `1-i` is built: from
    each pick, the next is the first such element past the pick's first partner. Otherwise the elements after the
    last such element are pairwise `i` and are returned. Color 1 is the ascending direction.

    Args:
        hereditary: A set on which the coloring is semi-hereditary for its color.
        f: The agreement coloring of the order.
        assume: Receives the assumptions the construction relies on.

    Returns:
        The ascending or descending sequence.

    Raises:
        WorkbenchError: NOT_SEMI_HEREDITARY_ON_H with a violating triple.
    """
    color = hereditary.color
    points = sorted(hereditary.points)
    check = check_semi_hereditary(f, color, points)
    if not check:
        message = f"coloring is not semi-hereditary for {color} on the set"
        raise WorkbenchError(ErrorCode.NOT_SEMI_HEREDITARY_ON_H, message, check.counterexample)
    partner: dict[int, int] = {}
    for j, x in enumerate(points):
        later = [y for y in points[j + 1 :] if f(x, y) != color]
        if later:
            partner[x] = later[0]
    starts = [j for j, x in enumerate(points) if x in partner]

    if starts and starts[-1] >= eventual_start(len(points)):
        assume(f"elements with a later {1 - color} partner in the final third recur")
        picks = [points[starts[0]]]
        while True:
            following = [points[j] for j in starts if points[j] > partner[picks[-1]]]
            if not following:
                picks.append(partner[picks[-1]])
                break
            picks.append(following[0])
        direction = 1 - color
    else:
        assume(f"no element past the final third has a {1 - color} partner")
        picks = points[starts[-1] + 1 :] if starts else points
        direction = color
    return AscendingSeq(tuple(picks)) if direction == 1 else DescendingSeq(tuple(picks))


class OrderToColoring(Reduction):
    """
    Monotone sequences of linear orders from sets on which their agreement coloring is semi-hereditary.
    """

    name = "order-to-coloring"
    source_kind = "ascending-descending sequence problem on a linear order"
    target_kind = "semi-hereditary set problem on a coloring of pairs"
    source_types = (LinearOrderInstance,)

    def _map_instance(self, source: LinearOrderInstance) -> ReductionRun:
        return ReductionRun(source, order_to_coloring(source))

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if not isinstance(target_solution, SemiHereditarySet):
            raise self._wrong_variant(target_solution)
        return semi_hereditary_set_to_ads(target_solution, run.target, run.assume)

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        f: PairColoring = run.target
        points = range(f.horizon)
        targets: list[Solution] = []
        for color in (0, 1):
            targets.append(SemiHereditarySet(color, max_homogeneous_set(f, color).points))
            accept = lambda c, i=color: check_semi_hereditary(f, i, c)  # noqa: E731
            targets.append(SemiHereditarySet(color, greedy_subset(points, accept)))
        return targets

    def random_source(self, rng: np.random.Generator) -> LinearOrderInstance:
        return sampling.random_linear_order(rng)
