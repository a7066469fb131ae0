"""
Arbor Tree Reductions.

Reductions between the chain-antichain problems on trees: from paths to antichains in binary trees, from trees with
split triples to c.e. completely branching trees (the split-triple construction), from c.e. trees to computable trees
(pair coding with enumeration stages), from one-dimensional Ramsey to c.e. binary trees, and from completely branching
sets to trees (immediate-successor coding).

Imports:
    - arbor.core.model: Strings, trees, branching sets and solutions.
    - arbor.core.solvers.brute: Target solutions for soundness checks.
    - arbor.core.utils.sampling: Random source instances.

Classes:
    - SplitTriplePartition: One step of the split-triple construction.
    - SplitTripleConstruction: The result of the construction.
    - BranchingBoundExceeded: Raised when a node has more children than the declared bound.
    - PathToAntichain, TacToTcacCe, TcacCeToTcac, Rt1k, SacToTac: The reductions.

Functions:
    - path_to_antichain_binary: Sibling flips along a path.
    - reduce_tac_to_tcac_ce: The split-triple construction.
    - map_antichain_through_image: Apply the image map to an antichain.
    - reduce_tcac_ce_to_tcac: Pair each node with its enumeration stage.
    - rt1k_instance: The c.e. binary tree of a coloring of naturals.
    - sac_to_tac_tree: Code chains of immediate successors of a branching set.
"""

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from itertools import islice
from types import MappingProxyType

import numpy as np

from arbor.core.model.branching import BranchingSet
from arbor.core.model.colorings import UnaryColoring
from arbor.core.model.errors import CheckResult, ErrorCode, WorkbenchError
from arbor.core.model.solutions import Antichain, Chain, HomogeneousSet, Path, Solution
from arbor.core.model.strings import (
    EPSILON,
    Str,
    comparable,
    flip_last,
    incomparable,
    is_prefix_eq,
    pair,
    phi_code,
    phi_decode,
    pretty,
    unpair,
)
from arbor.core.model.trees import FiniteTreeSnapshot, SplitTriple, StagedTree, canonical_order, find_split_triples
from arbor.core.reductions.base import Reduction, ReductionRun
from arbor.core.solvers.brute import brute_force_longest_chain, brute_force_max_antichain, maximal_paths
from arbor.core.utils import sampling
from arbor.core.utils.constants import EVENTUALLY_FRACTION


def flip_chain(nodes: Iterable[Str], contains: Callable[[Str], bool]) -> Antichain:
    """
    Replace every nonempty node of a chain by its sibling.

    The siblings of the nodes of a chain are pairwise incomparable, so a chain of a completely branching tree yields
    an antichain of the same tree.

    Args:
        nodes: The nodes of a chain.
        contains: Membership in the tree.

    Returns:
        The siblings, in the order of the chain.

    Raises:
        WorkbenchError: NOT_COMPLETELY_BRANCHING if a sibling is missing.
    """
    flipped = []
    for sigma in nodes:
        if not sigma:
            continue
        sibling = flip_last(sigma)
        if not contains(sibling):
            raise WorkbenchError(
                ErrorCode.NOT_COMPLETELY_BRANCHING,
                f"{pretty(sigma)} has no sibling {pretty(sibling)}",
                (sigma, sibling),
            )
        flipped.append(sibling)
    return Antichain.of(flipped)


def path_to_antichain_binary(
    tree: FiniteTreeSnapshot | BranchingSet,
    path: Path,
    side: int | None = None,
) -> Antichain:
    """
    Turn a path of a completely branching binary tree into an antichain.

    Every edge `σ → σ·i` of the path contributes the sibling `σ·(1−i)`. With `side` set, only the edges turning to
    that side contribute.

    Args:
        tree: The completely branching binary tree.
        path: A path of the tree.
        side: Restrict to edges `σ → σ·side`.

    Returns:
        One string per contributing edge, in path order.

    Raises:
        WorkbenchError: NOT_COMPLETELY_BRANCHING if a sibling is absent.
    """
    nodes = [sigma for sigma in path.nodes[1:] if side is None or sigma[-1] == side]
    return flip_chain(nodes, tree.__contains__)


class PathToAntichain(Reduction):
    """
    Antichains of completely branching binary trees from paths of the same tree.
    """

    name = "path-to-antichain"
    source_kind = "antichain problem on a completely branching binary tree"
    target_kind = "path problem on the same tree"
    source_types = (FiniteTreeSnapshot,)

    def _map_instance(self, source: FiniteTreeSnapshot) -> ReductionRun:
        return ReductionRun(source, source)

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if isinstance(target_solution, Path):
            return path_to_antichain_binary(run.target, target_solution)
        if isinstance(target_solution, Antichain):
            return target_solution
        raise self._wrong_variant(target_solution)

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        return [*maximal_paths(run.target), brute_force_max_antichain(run.target, exact=False)]

    def random_source(self, rng: np.random.Generator) -> FiniteTreeSnapshot:
        return sampling.random_branching_tree(rng)


@dataclass(frozen=True)
class SplitTriplePartition:
    """
    The state of the split-triple construction after one step.

    Attributes:
        stage: The enumeration stage of the step.
        triple: The split triple used, None for the end-of-run record.
        leaf: The leaf of `tree` that received two children.
        tree: The completely branching binary tree built so far.
        image: The image map from `tree` into the source tree.
        regions: For each node of `tree`, the region of source nodes assigned to it.
        excluded: Source nodes removed from every region.
        covered: Every source node enumerated so far.
    """

    stage: int
    triple: SplitTriple | None
    leaf: Str | None
    tree: frozenset[Str]
    image: Mapping[Str, Str]
    regions: Mapping[Str, frozenset[Str]]
    excluded: frozenset[Str]
    covered: frozenset[Str]

    def check_partition(self) -> CheckResult:
        """
        Check that the regions are disjoint and, with the excluded nodes, cover the enumerated source nodes.
        """
        seen: dict[Str, Str] = {}
        for key, region in self.regions.items():
            if key not in self.tree:
                return CheckResult.failed(key)
            for rho in region:
                if rho in seen or rho in self.excluded:
                    return CheckResult.failed(rho, seen.get(rho, key))
                seen[rho] = key
        missing = canonical_order(self.covered - self.excluded - seen.keys())
        return CheckResult.failed(missing[0]) if missing else CheckResult.passed()

    def check_cross_incomparable(self) -> CheckResult:
        """
        Check that nodes of distinct regions are incomparable.
        """
        keys = canonical_order(self.regions)
        for a, key in enumerate(keys):
            for other in keys[a + 1 :]:
                for mu in self.regions[key]:
                    for rho in self.regions[other]:
                        if comparable(mu, rho):
                            return CheckResult.failed(mu, rho)
        return CheckResult.passed()


@dataclass(frozen=True)
class SplitTripleConstruction:
    """
    The outcome of the split-triple construction.

    Attributes:
        tree: The completely branching binary tree, as a snapshot.
        stages: The same tree, staged by the source stage that produced each node.
        image: The injective image map into the source tree.
        trace: One partition record per split step, then one for the end of the run.
        last_split_stage: The stage of the last split, None if there was none.
        finitely_many_paths: Leaves of the source's final snapshot, reported when splits stopped before the final
            third of the horizon.
    """

    tree: FiniteTreeSnapshot
    stages: StagedTree
    image: Mapping[Str, Str]
    trace: tuple[SplitTriplePartition, ...]
    last_split_stage: int | None
    finitely_many_paths: tuple[Str, ...] = ()

    @property
    def finitely_many_splits(self) -> bool:
        return bool(self.finitely_many_paths)

    def check_image_incomparability(self) -> CheckResult:
        """
        Check that incomparable nodes of the tree have incomparable images, and that the image map is injective.
        """
        nodes = canonical_order(self.tree.nodes)
        images: dict[Str, Str] = {}
        for sigma in nodes:
            rho = self.image[sigma]
            if rho in images:
                return CheckResult.failed(images[rho], sigma)
            images[rho] = sigma
        for a, sigma in enumerate(nodes):
            for nu in nodes[a + 1 :]:
                if incomparable(sigma, nu) and comparable(self.image[sigma], self.image[nu]):
                    return CheckResult.failed(sigma, nu)
        return CheckResult.passed()


class BranchingBoundExceeded(WorkbenchError):
    """
    A node has more immediate successors than the declared bound; its children are a computable antichain.
    """

    def __init__(self, node: Str, children: tuple[Str, ...]) -> None:
        super().__init__(
            ErrorCode.INFINITE_BRANCHING,
            f"{pretty(node)} has {len(children)} children, above the declared bound",
            (node, children),
        )
        self.node = node
        self.antichain = Antichain.of(children)


def _split_target(rho: Str, key: Str, triple: SplitTriple, leaf: Str) -> Str | None:
    for side in (0, 1):
        if is_prefix_eq(triple.branch(side), rho):
            return (*leaf, side)
    if is_prefix_eq(rho, triple.mu):
        return None
    return key


def _route(rho: Str, history: list[tuple[Str, SplitTriple, Str]]) -> Str | None:
    """
    Replay the splits made so far to find the region holding a node of the source tree.

    Args:
        rho: A node of the source tree.
        history: The splits in stage order, each as the split region's key, its triple and the target leaf.

    Returns:
        The key of the region, or None once `rho` falls below a split triple's stem.
    """
    key: Str | None = EPSILON
    for split_key, triple, leaf in history:
        if key == split_key:
            key = _split_target(rho, key, triple, leaf)
            if key is None:
                break
    return key


def _regions(region_of: Mapping[Str, Str | None]) -> dict[Str, frozenset[Str]]:
    grouped: dict[Str, set[Str]] = {}
    for rho, key in region_of.items():
        if key is not None:
            grouped.setdefault(key, set()).add(rho)
    return {key: frozenset(region) for key, region in grouped.items()}


def _next_split(regions: Mapping[Str, frozenset[Str]]) -> tuple[Str, SplitTriple] | None:
    best: tuple[tuple[int, int, int], Str, SplitTriple] | None = None
    for key, region in regions.items():
        triples = find_split_triples(region, within=region)
        if triples:
            triple = triples[0]
            rank = (phi_code(triple.mu), triple.n0, triple.n1)
            if best is None or rank < best[0]:
                best = (rank, key, triple)
    return None if best is None else (best[1], best[2])


def _leftmost_leaf(tree: set[Str], sigma: Str) -> Str:
    tau = sigma
    while (*tau, 0) in tree:
        tau = (*tau, 0)
    return tau


def reduce_tac_to_tcac_ce(tree: StagedTree) -> SplitTripleConstruction:
    """
    Build a c.e. completely branching binary tree from a tree with infinitely many split triples.

    Every source node is assigned to the region of a node of the binary tree, starting with the root's region. Stage
    by stage, while some region holds a split triple `(μ, n0, n1)`, the least one by the code of `μ` is taken, the
    left-most leaf `τ` above the region's key receives the children `τ·0` and `τ·1` mapped to `μ·n0` and `μ·n1`, and
    the region is split three ways: extensions of `μ·ni` move to the region of `τ·i`, prefixes of `μ` are excluded,
    and the rest stay.

    Args:
        tree: The source tree, finitely branching up to its declared bound.

    Returns:
        The construction, with the partition trace.

    Raises:
        BranchingBoundExceeded: INFINITE_BRANCHING if some node has more children than the declared bound.
    """
    check = tree.check_branching()
    if not check:
        node, children = check.counterexample  # type: ignore[misc]
        raise BranchingBoundExceeded(node, tuple(canonical_order(children)))

    built: dict[Str, int] = {EPSILON: 0}
    image: dict[Str, Str] = {EPSILON: EPSILON}
    region_of: dict[Str, Str | None] = {}
    history: list[tuple[Str, SplitTriple, Str]] = []
    trace: list[SplitTriplePartition] = []
    last_split: int | None = None

    def record(stage: int, triple: SplitTriple | None, leaf: Str | None) -> None:
        trace.append(
            SplitTriplePartition(
                stage=stage,
                triple=triple,
                leaf=leaf,
                tree=frozenset(built),
                image=MappingProxyType(dict(image)),
                regions=MappingProxyType(_regions(region_of)),
                excluded=frozenset(rho for rho, key in region_of.items() if key is None),
                covered=frozenset(region_of),
            )
        )

    order = tree.apparition_order()
    position = 0
    for stage in range(tree.horizon):
        while position < len(order) and tree.first_stage[order[position]] == stage:
            rho = order[position]
            region_of[rho] = _route(rho, history)
            position += 1
        while (found := _next_split(_regions(region_of))) is not None:
            key, triple = found
            leaf = _leftmost_leaf(set(built), key)
            for side in (0, 1):
                built[(*leaf, side)] = stage
                image[(*leaf, side)] = triple.branch(side)
            history.append((key, triple, leaf))
            for rho, current in region_of.items():
                if current == key:
                    region_of[rho] = _split_target(rho, key, triple, leaf)
            last_split = stage
            record(stage, triple, leaf)
    record(tree.horizon - 1, None, None)

    quiet_from = tree.horizon - max(1, int(tree.horizon * EVENTUALLY_FRACTION))
    paths: tuple[Str, ...] = ()
    if last_split is None or last_split < quiet_from:
        paths = tuple(canonical_order(tree.final().leaves()))

    return SplitTripleConstruction(
        tree=FiniteTreeSnapshot(frozenset(built)),
        stages=StagedTree(tree.horizon, built),
        image=MappingProxyType(image),
        trace=tuple(trace),
        last_split_stage=last_split,
        finitely_many_paths=paths,
    )


def map_antichain_through_image(image: Mapping[Str, Str], antichain: Antichain) -> Antichain:
    """
    The image `f(A)` of an antichain, in the order of `A`.

    Args:
        image: The node map of a reduction.
        antichain: An antichain of its domain.

    Returns:
        The mapped antichain.

    Raises:
        WorkbenchError: UNMAPPED_NODE if a node is outside the domain of the image map.
    """
    mapped = []
    for sigma in antichain.nodes:
        if sigma not in image:
            raise WorkbenchError(ErrorCode.UNMAPPED_NODE, f"{pretty(sigma)} has no image", (sigma,))
        mapped.append(image[sigma])
    return Antichain.of(mapped)


class TacToTcacCe(Reduction):
    """
    Antichains of trees with infinitely many split triples from solutions of c.e. completely branching trees.
    """

    name = "tac-to-tcac-ce"
    source_kind = "antichain problem on a tree with infinitely many split triples"
    target_kind = "chain-antichain problem on a c.e. completely branching binary tree"
    source_types = (StagedTree,)

    def _map_instance(self, source: StagedTree) -> ReductionRun:
        try:
            construction = reduce_tac_to_tcac_ce(source)
        except BranchingBoundExceeded as e:
            run = ReductionRun(source, StagedTree(1, {EPSILON: 0}), {"children": e.antichain})
            run.assume(f"{pretty(e.node)} exceeds the branching bound; its children answer the instance")
            return run
        run = ReductionRun(source, construction.stages, {"construction": construction})
        if construction.finitely_many_splits:
            run.assume("no split triple in the final third of the horizon")
        return run

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if "children" in run.context:
            return run.context["children"]
        construction: SplitTripleConstruction = run.context["construction"]
        if isinstance(target_solution, Antichain):
            return map_antichain_through_image(construction.image, target_solution)
        if isinstance(target_solution, (Chain, Path)):
            flipped = flip_chain(target_solution.nodes, construction.tree.__contains__)
            return map_antichain_through_image(construction.image, flipped)
        raise self._wrong_variant(target_solution)

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        tree = run.target.final()
        return [
            brute_force_max_antichain(tree, exact=False),
            brute_force_longest_chain(tree),
            *maximal_paths(tree),
        ]

    def random_source(self, rng: np.random.Generator) -> StagedTree:
        return sampling.random_staged_tree(rng)


def reduce_tcac_ce_to_tcac(tree: StagedTree) -> FiniteTreeSnapshot:
    """
    Pair every entry of every node with the stage at which that prefix was enumerated.

    The string `⟨n0,s0⟩·…·⟨nk,sk⟩` is in the output iff `n0…nj` is in the source with least enumeration stage `sj`
    for every `j`, so the output is computable even though the source is only c.e.

    Args:
        tree: The staged c.e. tree.

    Returns:
        The coded tree; it always contains the root.
    """
    coded = {EPSILON}
    for sigma in tree.first_stage:
        coded.add(tuple(pair(sigma[j], tree.first_stage[sigma[: j + 1]]) for j in range(len(sigma))))
    return FiniteTreeSnapshot(frozenset(coded))


def forget_stages(sigma: Str) -> Str:
    """
    Strip the stages from a stage-coded node.

    Args:
        sigma: A node of the stage-coded tree.

    Returns:
        The node of the source tree it codes.
    """
    return tuple(unpair(code)[0] for code in sigma)


class TcacCeToTcac(Reduction):
    """
    Solutions of c.e. trees from solutions of their stage-coded computable copies.
    """

    name = "tcac-ce-to-tcac"
    source_kind = "chain-antichain problem on a c.e. tree"
    target_kind = "chain-antichain problem on a computable tree"
    source_types = (StagedTree,)

    def _map_instance(self, source: StagedTree) -> ReductionRun:
        return ReductionRun(source, reduce_tcac_ce_to_tcac(source))

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if isinstance(target_solution, (Chain, Antichain, Path)):
            return type(target_solution).of(forget_stages(sigma) for sigma in target_solution.nodes)
        raise self._wrong_variant(target_solution)

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        return [
            brute_force_max_antichain(run.target, exact=False),
            brute_force_longest_chain(run.target),
            *maximal_paths(run.target),
        ]

    def random_source(self, rng: np.random.Generator) -> StagedTree:
        return sampling.random_staged_tree(rng)


def rt1k_instance(f: UnaryColoring) -> StagedTree:
    """
    The c.e. binary tree of a coloring of naturals with `k` colors.

    Stage 0 holds `0^i` for `i < k`. Stage `s+1` adds `0^f(s)·1^(m+1)`, where `m` counts the `x < s` with
    `f(x) = f(s)`. Every antichain has at most `k` elements, and the nodes of the branch `0^c·1*` come from the color
    class of `c`.

    Args:
        f: A coloring of the naturals with `k` colors.

    Returns:
        The staged tree, with horizon one past the coloring's.
    """
    first: dict[Str, int] = {(0,) * i: 0 for i in range(f.num_colors)}
    counts = [0] * f.num_colors
    for s in range(f.horizon):
        color = f(s)
        counts[color] += 1
        first[(0,) * color + (1,) * counts[color]] = s + 1
    return StagedTree(f.horizon + 1, first, branching_bound=2)


class Rt1k(Reduction):
    """
    Color classes of a coloring of naturals from chains of its c.e. binary tree.
    """

    name = "rt1k"
    source_kind = "RT1k instance (coloring of naturals)"
    target_kind = "chain problem on a c.e. binary tree"
    source_types = (UnaryColoring,)

    def _map_instance(self, source: UnaryColoring) -> ReductionRun:
        return ReductionRun(source, rt1k_instance(source))

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if not isinstance(target_solution, (Chain, Path)):
            raise self._wrong_variant(target_solution)
        tree: StagedTree = run.target
        branch = [sigma for sigma in target_solution.nodes if sigma and sigma[-1] == 1]
        if not branch:
            return HomogeneousSet(0, ())
        color = branch[0].index(1)
        return HomogeneousSet.of(color, (tree.first_stage[sigma] - 1 for sigma in branch))

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        tree = run.target.final()
        return [brute_force_longest_chain(tree), *maximal_paths(tree)]

    def random_source(self, rng: np.random.Generator) -> UnaryColoring:
        return sampling.random_unary_coloring(rng)


def _immediate_successors(members: frozenset[Str]) -> dict[Str | None, list[Str]]:
    successors: dict[Str | None, list[Str]] = {}
    for rho in canonical_order(members):
        below = [rho[:length] for length in range(len(rho) - 1, -1, -1) if rho[:length] in members]
        successors.setdefault(below[0] if below else None, []).append(rho)
    return successors


def sac_to_tac_tree(branching: BranchingSet, depth: int | None = None) -> FiniteTreeSnapshot:
    """
    Code the chains of immediate successors of a branching set as a tree of naturals.

    A string `σ` is in the tree iff `σ(0)` codes a minimal member `τ0` and every `σ(n+1)` codes a member `τ(n+1)`
    extending `τn` with no member strictly between them. Chains of the tree then code chains of the set and
    antichains code antichains.

    Args:
        branching: The branching set.
        depth: Longest member coded; defaults to the set's represented depth.

    Returns:
        The coded tree.
    """
    members = frozenset(branching.stream(max_depth=depth))
    successors = _immediate_successors(members)
    nodes = {EPSILON}
    frontier: list[tuple[Str, Str | None]] = [(EPSILON, None)]
    while frontier:
        node, last = frontier.pop()
        for tau in successors.get(last, []):
            child = (*node, phi_code(tau))
            nodes.add(child)
            frontier.append((child, tau))
    return FiniteTreeSnapshot(frozenset(nodes))


def sac_decode(branching: BranchingSet, sigma: Str) -> tuple[Str, ...]:
    """
    The members coded by a node of the coded tree.

    Args:
        branching: The branching set the coded tree was built from.
        sigma: A node of the coded tree.

    Returns:
        The members, one per entry of `sigma`.

    Raises:
        WorkbenchError: BAD_CODE if an entry does not code a member.
    """
    decoded = []
    for code in sigma:
        try:
            tau = phi_decode(code)
        except WorkbenchError as e:
            raise WorkbenchError(ErrorCode.BAD_CODE, f"{code} does not code a string", (code,)) from e
        if tau not in branching:
            raise WorkbenchError(ErrorCode.BAD_CODE, f"{code} codes {pretty(tau)}, not a member", (code,))
        decoded.append(tau)
    return tuple(decoded)


class SacToTac(Reduction):
    """
    Antichains of completely branching sets from solutions of their immediate-successor trees.
    """

    name = "sac-to-tac"
    source_kind = "chain-antichain problem on a completely branching set"
    target_kind = "chain-antichain problem on a tree of naturals"
    source_types = (BranchingSet,)

    def _map_instance(self, source: BranchingSet) -> ReductionRun:
        return ReductionRun(source, sac_to_tac_tree(source))

    def _map_solution(self, run: ReductionRun, target_solution: Solution) -> Solution:
        if not isinstance(target_solution, (Chain, Antichain, Path)):
            raise self._wrong_variant(target_solution)
        lasts = [sac_decode(run.source, sigma)[-1] for sigma in target_solution.nodes if sigma]
        if isinstance(target_solution, Antichain):
            return Antichain.of(lasts)
        return Chain.of(lasts)

    def target_solutions(self, run: ReductionRun) -> list[Solution]:
        paths: list[Solution] = list(islice(maximal_paths(run.target), 8))
        return [brute_force_max_antichain(run.target, exact=False), brute_force_longest_chain(run.target), *paths]

    def random_source(self, rng: np.random.Generator) -> BranchingSet:
        return BranchingSet.explicit(sigma for sigma in sampling.random_branching_tree(rng).nodes if sigma)

