"""
Arbor Trees.

Finite trees of strings and their staged enumerations. A `FiniteTreeSnapshot` is a downward-closed finite set of
strings; a `StagedTree` models a c.e. tree up to an explicit horizon by recording the first stage at which each node
is enumerated, so that `T[s]` grows monotonically with `s` by construction.

Imports:
    - dataclasses: Immutable record types.
    - arbor.core.model.strings: String operations and codes.

Classes:
    - FiniteTreeSnapshot: A finite downward-closed set of strings.
    - StagedTree: A stage-indexed enumeration of a tree up to a horizon.
    - SplitTriple: A node together with two distinct immediate successors.

Functions:
    - find_split_triples: All split triples of a tree rooted inside a given node set.
    - psi_enumeration: The code-increasing injection used by the coloring reductions.
"""

from collections.abc import Collection, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType

from arbor.core.model.errors import CheckResult, ErrorCode, WorkbenchError
from arbor.core.model.strings import EPSILON, Str, is_prefix, phi_code, pretty


def canonical_order(nodes: Iterable[Str]) -> list[Str]:
    """
    Nodes sorted by length, then lexicographically. This is the order of every serialized node list.

    Args:
        nodes: The nodes.

    Returns:
        The sorted list.
    """
    return sorted(nodes, key=lambda sigma: (len(sigma), sigma))


def check_downward_closed(nodes: Collection[Str]) -> CheckResult:
    """
    Check that every nonempty node has its parent in the set.

    Args:
        nodes: The node set.

    Returns:
        The result, with a node whose parent is missing on failure.
    """
    node_set = nodes if isinstance(nodes, (set, frozenset)) else set(nodes)
    for sigma in canonical_order(node_set):
        if sigma and sigma[:-1] not in node_set:
            return CheckResult.failed(sigma, sigma[:-1])
    return CheckResult.passed()


@dataclass(frozen=True)
class FiniteTreeSnapshot:
    """
    A finite, downward-closed set of strings.

    Raises:
        WorkbenchError: NOT_A_TREE if some node's parent is missing.
    """

    nodes: frozenset[Str]

    def __post_init__(self) -> None:
        check_downward_closed(self.nodes).raise_for(ErrorCode.NOT_A_TREE, "node set is not downward closed")

    @classmethod
    def of(cls, nodes: Iterable[Str], *, close: bool = False) -> "FiniteTreeSnapshot":
        """
        Build a snapshot from any iterable of strings, optionally adding every missing prefix.
        """
        node_set = set(nodes)
        if close:
            for sigma in list(node_set):
                node_set.update(sigma[:length] for length in range(len(sigma)))
        return cls(frozenset(node_set))

    def __contains__(self, sigma: object) -> bool:
        return sigma in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[Str]:
        return iter(canonical_order(self.nodes))

    def children(self, sigma: Str) -> list[Str]:
        return sorted(tau for tau in self.nodes if len(tau) == len(sigma) + 1 and tau[:-1] == sigma)

    def leaves(self) -> frozenset[Str]:
        parents = {sigma[:-1] for sigma in self.nodes if sigma}
        return frozenset(self.nodes - parents)

    @property
    def depth(self) -> int:
        return max((len(sigma) for sigma in self.nodes), default=0)

    def max_branching(self) -> int:
        counts: dict[Str, int] = {}
        for sigma in self.nodes:
            if sigma:
                counts[sigma[:-1]] = counts.get(sigma[:-1], 0) + 1
        return max(counts.values(), default=0)


@dataclass(frozen=True)
class StagedTree:
    """
    A c.e. tree enumerated stage by stage up to a horizon.

    `first_stage[sigma]` is the least stage `s < horizon` with `sigma` in `T[s]`; hence `T[s] ⊆ T[s+1]`. The union of
    all stages must be downward closed. `branching_bound`, when declared, is the largest number of immediate
    successors any node may have.

    Raises:
        WorkbenchError: BAD_PARAMS for a stage outside the horizon, NOT_A_TREE if the union is not downward closed.
    """

    horizon: int
    first_stage: Mapping[Str, int]
    branching_bound: int | None = None
    _order: tuple[Str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"horizon must be at least 1, got {self.horizon}")
        stages = dict(self.first_stage)
        for sigma, stage in stages.items():
            if not 0 <= stage < self.horizon:
                raise WorkbenchError(ErrorCode.BAD_PARAMS, f"{pretty(sigma)} enumerated at stage {stage}", (sigma,))
        check_downward_closed(stages.keys()).raise_for(ErrorCode.NOT_A_TREE, "enumerated nodes are not a tree")
        object.__setattr__(self, "first_stage", MappingProxyType(stages))
        order = sorted(stages, key=lambda sigma: (stages[sigma], phi_code(sigma)))
        object.__setattr__(self, "_order", tuple(order))

    @classmethod
    def from_stages(
        cls,
        stages: Iterable[Iterable[Str]],
        branching_bound: int | None = None,
    ) -> "StagedTree":
        """
        Build from the list of nodes newly enumerated at each stage (or cumulative sets; repeats are ignored).
        """
        first: dict[Str, int] = {}
        horizon = 0
        for stage, nodes in enumerate(stages):
            horizon = stage + 1
            for sigma in nodes:
                first.setdefault(tuple(sigma), stage)
        return cls(max(horizon, 1), first, branching_bound)

    @classmethod
    def from_snapshots(
        cls,
        snapshots: Iterable[Collection[Str]],
        branching_bound: int | None = None,
    ) -> "StagedTree":
        """
        Build from the cumulative node sets `T[0], T[1], ...`.

        Raises:
            WorkbenchError: NOT_MONOTONE if a node disappears from a later stage.
        """
        previous: frozenset[Str] = frozenset()
        stages = []
        for stage, nodes in enumerate(snapshots):
            current = frozenset(tuple(sigma) for sigma in nodes)
            lost = canonical_order(previous - current)
            if lost:
                raise WorkbenchError(ErrorCode.NOT_MONOTONE, f"{pretty(lost[0])} vanishes at stage {stage}", (lost[0],))
            stages.append(current - previous)
            previous = current
        return cls.from_stages(stages, branching_bound)

    @classmethod
    def constant(cls, tree: FiniteTreeSnapshot, branching_bound: int | None = None) -> "StagedTree":
        """
        A staged tree enumerating the whole snapshot at stage 0.
        """
        return cls(1, {sigma: 0 for sigma in tree.nodes}, branching_bound)

    def at(self, stage: int) -> frozenset[Str]:
        """
        The nodes enumerated by `stage`.

        Raises:
            WorkbenchError: HORIZON_TOO_SMALL for stages at or past the horizon.
        """
        if stage >= self.horizon:
            raise WorkbenchError(ErrorCode.HORIZON_TOO_SMALL, f"stage {stage} is past the horizon {self.horizon}")
        return frozenset(sigma for sigma, s in self.first_stage.items() if s <= stage)

    def final(self) -> FiniteTreeSnapshot:
        return FiniteTreeSnapshot(frozenset(self.first_stage))

    def stage_of(self, sigma: Str) -> int | None:
        return self.first_stage.get(sigma)

    def apparition_order(self) -> tuple[Str, ...]:
        """
        Nodes in order of apparition; nodes of the same stage are ordered by increasing code.
        """
        return self._order

    def __len__(self) -> int:
        return len(self.first_stage)

    def check_branching(self) -> CheckResult:
        """
        Check the declared branching bound; the counterexample is the node and its children.
        """
        if self.branching_bound is None:
            return CheckResult.passed()
        children: dict[Str, list[Str]] = {}
        for sigma in self._order:
            if sigma:
                children.setdefault(sigma[:-1], []).append(sigma)
        for parent, kids in children.items():
            if len(kids) > self.branching_bound:
                return CheckResult.failed(parent, tuple(kids))
        return CheckResult.passed()


@dataclass(frozen=True, order=True)
class SplitTriple:
    """
    A node `mu` with two distinct immediate successors `mu·n0` and `mu·n1`, where `n0 < n1`.
    """

    mu: Str
    n0: int
    n1: int

    def __post_init__(self) -> None:
        if self.n0 == self.n1:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, "split triple needs two distinct successors")

    def branch(self, side: int) -> Str:
        return (*self.mu, self.n1 if side else self.n0)


def find_split_triples(
    tree: FiniteTreeSnapshot | Collection[Str],
    within: Collection[Str] | None = None,
) -> list[SplitTriple]:
    """
    All split triples `(mu, n0, n1)` of the tree with `mu` in `within`.

    Args:
        tree: The tree, as a snapshot or a set of nodes.
        within: Candidate roots; defaults to every node.

    Returns:
        The triples, ordered by the code of `mu` and then by `(n0, n1)`.
    """
    nodes = tree.nodes if isinstance(tree, FiniteTreeSnapshot) else frozenset(tree)
    roots = nodes if within is None else frozenset(within) & nodes
    successors: dict[Str, list[int]] = {}
    for sigma in nodes:
        if sigma and sigma[:-1] in roots:
            successors.setdefault(sigma[:-1], []).append(sigma[-1])
    triples = [
        SplitTriple(mu, n0, n1)
        for mu, items in successors.items()
        for n0, n1 in combinations(sorted(items), 2)
    ]
    return sorted(triples, key=lambda t: (phi_code(t.mu), t.n0, t.n1))


def psi_enumeration(tree: StagedTree) -> list[Str]:
    """
    Enumerate the injection psi of a staged tree.

    psi(0) is the first node to appear; psi(n+1) is the next node, in order of apparition, whose code exceeds that of
    psi(n). Codes therefore increase strictly along the output, and since a strict prefix has a smaller code,
    `psi(x) ≺ psi(y)` implies `x < y`.

    Args:
        tree: The staged tree.

    Returns:
        psi(0), psi(1), ... as far as the horizon permits.
    """
    output: list[Str] = []
    running = -1
    for sigma in tree.apparition_order():
        code = phi_code(sigma)
        if code > running:
            output.append(sigma)
            running = code
    return output


def psi_index(psi: list[Str]) -> dict[Str, int]:
    return {sigma: index for index, sigma in enumerate(psi)}


def root_only() -> FiniteTreeSnapshot:
    return FiniteTreeSnapshot(frozenset({EPSILON}))


def chain_below(sigma: Str, nodes: Collection[Str]) -> list[Str]:
    """
    Members of `nodes` that are strict prefixes of `sigma`, shortest first.

    Args:
        sigma: The string.
        nodes: The candidate prefixes.

    Returns:
        The prefixes found.
    """
    return [tau for tau in (sigma[:length] for length in range(len(sigma))) if tau in nodes and is_prefix(tau, sigma)]
