"""
Arbor Witness Functions.

The two functions read off an enumerated antichain `(σ_n)` of a c.e. tree: the stage `t(n)` at which `σ_n` is first
enumerated, and the length `ℓ(n)` of `σ_n`. Antichains built from a path by taking one sibling per edge have
`ℓ(n) = n + 1`, which is dominated by the identity plus one.

Classes:
    - WitnessTables: The tables of `t` and `ℓ`.

Functions:
    - hyperimmunity_witnesses: Both tables for an antichain of a staged tree.
    - path_antichain: The sibling antichain of a path, in path order.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import Antichain
from arbor.core.model.strings import Str, is_prefix, phi_code, pretty
from arbor.core.model.trees import StagedTree


@dataclass(frozen=True)
class WitnessTables:
    """
    Attributes:
        stages: `t(n)`, the first stage containing `σ_n`.
        lengths: `ℓ(n)`, the length of `σ_n`.
    """

    stages: tuple[int, ...]
    lengths: tuple[int, ...]

    def dominated_by(self, bound: int = 1) -> bool:
        """
        Whether `ℓ(n) <= n + bound` for every `n`.
        """
        return all(length <= n + bound for n, length in enumerate(self.lengths))

    def to_dict(self) -> dict[str, list[int]]:
        return {"t": list(self.stages), "l": list(self.lengths)}


def hyperimmunity_witnesses(tree: StagedTree, antichain: Antichain | Sequence[Str]) -> WitnessTables:
    """
    Tabulate `t(n) = min{s : σ_n ∈ T[s]}` and `ℓ(n) = |σ_n|`.

    Args:
        tree: The staged tree.
        antichain: The antichain, in its enumeration order.

    Returns:
        The two tables.

    Raises:
        WorkbenchError: NOT_ENUMERATED if some `σ_n` is not enumerated within the horizon.
    """
    nodes = antichain.nodes if isinstance(antichain, Antichain) else tuple(tuple(sigma) for sigma in antichain)
    stages = []
    for n, sigma in enumerate(nodes):
        stage = tree.stage_of(sigma)
        if stage is None:
            raise WorkbenchError(
                ErrorCode.NOT_ENUMERATED,
                f"σ_{n} = {pretty(sigma)} is not enumerated by stage {tree.horizon - 1}",
                (n, sigma),
            )
        stages.append(stage)
    return WitnessTables(tuple(stages), tuple(len(sigma) for sigma in nodes))


def path_antichain(tree: StagedTree, path: Iterable[Str]) -> Antichain:
    """
    Replace every nonempty node of a path by a sibling in the tree.

    The sibling taken is the one of smallest code among the other children of the node's parent. Siblings of the
    nodes of a path are pairwise incomparable, and the `n`-th has length `n + 1`.

    Args:
        tree: The staged tree; its final snapshot supplies the siblings.
        path: Nodes of a path from the root, each a child of the previous one.

    Returns:
        The antichain, ordered along the path.

    Raises:
        WorkbenchError: NOT_A_TREE if the nodes are not a path of the tree, NOT_COMPLETELY_BRANCHING if some node
            has no sibling.
    """
    nodes = [tuple(sigma) for sigma in path]
    final = tree.final()
    siblings = []
    for parent, sigma in zip(nodes, nodes[1:], strict=False):
        if sigma not in final or len(sigma) != len(parent) + 1 or not is_prefix(parent, sigma):
            raise WorkbenchError(ErrorCode.NOT_A_TREE, f"{pretty(sigma)} does not continue the path", (sigma,))
        others = [tau for tau in final.children(parent) if tau != sigma]
        if not others:
            raise WorkbenchError(
                ErrorCode.NOT_COMPLETELY_BRANCHING, f"{pretty(sigma)} has no sibling in the tree", (sigma,)
            )
        siblings.append(min(others, key=phi_code))
    return Antichain.of(siblings)
