"""
Arbor Brute-Force Oracles.

Exhaustive solvers used as independent oracles by the tests, by the reduction soundness sweeps and by `arbor verify`.
Trees are turned into networkx graphs: the Hasse diagram of the prefix order is a DAG whose longest path is a longest
chain, and an antichain is a clique of the incomparability graph. Colorings and linear orders are handled the same
way, with one graph per color or direction.

Imports:
    - networkx: Clique search, longest paths and transitive closure.
    - numpy: Random orderings for the greedy constructions.

Functions:
    - brute_force_max_antichain: A maximum antichain of a finite tree.
    - brute_force_longest_chain: A longest chain of a finite tree.
    - maximal_paths: Every root-to-leaf path of a finite tree.
    - max_homogeneous_set: A largest set homogeneous for one color.
    - longest_monotone: A longest ascending or descending sequence of a linear order.
    - greedy_subset: A maximal subset with a hereditary property, built greedily.
"""

from collections.abc import Callable, Collection, Iterable, Sequence
from itertools import combinations

import networkx as nx
import numpy as np

from arbor.core.model.colorings import LinearOrderInstance, PairColoring
from arbor.core.model.errors import CheckResult, ErrorCode, WorkbenchError
from arbor.core.model.solutions import Antichain, AscendingSeq, Chain, DescendingSeq, HomogeneousSet, Path
from arbor.core.model.strings import Str, comparable
from arbor.core.model.trees import FiniteTreeSnapshot, canonical_order
from arbor.core.utils.constants import EXACT_ANTICHAIN_LIMIT
from arbor.core.utils.log import get_logger

logger = get_logger(__name__)


def _nodes(tree: FiniteTreeSnapshot | Collection[Str]) -> frozenset[Str]:
    return tree.nodes if isinstance(tree, FiniteTreeSnapshot) else frozenset(tree)


def hasse_graph(tree: FiniteTreeSnapshot | Collection[Str]) -> nx.DiGraph:
    """
    The Hasse diagram of the prefix order: an edge from every node to each of its immediate successors in the set.

    Nodes whose parent is absent are attached to their longest present prefix, so any set of strings works.
    """
    nodes = _nodes(tree)
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    for sigma in nodes:
        for length in range(len(sigma) - 1, -1, -1):
            if sigma[:length] in nodes:
                graph.add_edge(sigma[:length], sigma)
                break
    return graph


def incomparability_graph(nodes: Iterable[Str]) -> nx.Graph:
    graph = nx.Graph()
    node_list = list(nodes)
    graph.add_nodes_from(node_list)
    graph.add_edges_from((sigma, tau) for sigma, tau in combinations(node_list, 2) if not comparable(sigma, tau))
    return graph


def brute_force_max_antichain(
    tree: FiniteTreeSnapshot | Collection[Str],
    *,
    exact: bool = True,
    limit: int = EXACT_ANTICHAIN_LIMIT,
) -> Antichain:
    """
    Find a maximum antichain of a finite set of strings.

    In exact mode the incomparability graph is searched for a maximum clique, which is exponential and therefore
    capped at `limit` nodes. Otherwise sets above the cap get the top layer of the height layering, the maximal
    elements, which is a maximal antichain but not necessarily a maximum one.

    Args:
        tree: The tree or set of strings.
        exact: Refuse sets above the cap instead of falling back to layering.
        limit: The node cap for the exact search.

    Returns:
        The antichain, in canonical order.

    Raises:
        WorkbenchError: SIZE_LIMIT in exact mode above the cap.
    """
    nodes = _nodes(tree)
    if len(nodes) > limit:
        if exact:
            raise WorkbenchError(ErrorCode.SIZE_LIMIT, f"{len(nodes)} nodes exceed the exact limit {limit}")
        logger.warning(f"{len(nodes)} nodes exceed the exact limit {limit}; returning a maximal antichain")
        graph = hasse_graph(nodes)
        return Antichain.of(canonical_order(sigma for sigma in nodes if graph.out_degree(sigma) == 0))
    if not nodes:
        return Antichain(())
    clique, _ = nx.max_weight_clique(incomparability_graph(canonical_order(nodes)), weight=None)
    return Antichain.of(canonical_order(clique))


def brute_force_longest_chain(tree: FiniteTreeSnapshot | Collection[Str]) -> Chain:
    """
    A longest chain, read off the longest path of the Hasse diagram.
    """
    nodes = _nodes(tree)
    if not nodes:
        return Chain(())
    return Chain.of(nx.dag_longest_path(hasse_graph(nodes)))


def maximal_paths(tree: FiniteTreeSnapshot) -> list[Path]:
    """
    Every path from the root to a leaf, ordered by leaf.
    """
    paths = []
    for leaf in canonical_order(tree.leaves()):
        paths.append(Path.of(leaf[:length] for length in range(len(leaf) + 1)))
    return paths


def max_homogeneous_set(f: PairColoring, color: int, on: Iterable[int] | None = None) -> HomogeneousSet:
    """
    A largest set homogeneous for `color`, as a maximum clique of the graph of pairs with that color.
    """
    points = sorted(set(range(f.horizon) if on is None else on))
    graph = nx.Graph()
    graph.add_nodes_from(points)
    graph.add_edges_from((x, y) for x, y in combinations(points, 2) if f(x, y) == color)
    if not points:
        return HomogeneousSet(color, ())
    clique, _ = nx.max_weight_clique(graph, weight=None)
    return HomogeneousSet.of(color, clique)


def longest_monotone(order: LinearOrderInstance, *, ascending: bool) -> AscendingSeq | DescendingSeq:
    """
    A longest sequence increasing in the natural order and monotone in the instance order.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(order.horizon))
    graph.add_edges_from(
        (x, y) for x, y in combinations(range(order.horizon), 2) if order(x, y) == ascending
    )
    points = tuple(nx.dag_longest_path(graph)) if order.horizon else ()
    return AscendingSeq(points) if ascending else DescendingSeq(points)


def greedy_subset(
    points: Sequence[int],
    accept: Callable[[tuple[int, ...]], CheckResult],
    rng: np.random.Generator | None = None,
) -> tuple[int, ...]:
    """
    Add points one at a time, keeping each whose addition still passes `accept`.

    Args:
        points: Candidates.
        accept: A check on an increasing tuple of points.
        rng: Shuffle the candidates first; the natural order is used without one.

    Returns:
        The accepted points in increasing order.
    """
    order = list(points)
    if rng is not None:
        order = [order[i] for i in rng.permutation(len(order))]
    chosen: list[int] = []
    for x in order:
        candidate = tuple(sorted((*chosen, x)))
        if accept(candidate):
            chosen.append(x)
    return tuple(sorted(chosen))
