"""
Arbor Stable Instances.

Stability checks attached to the semi-hereditary constructions. Certified colorings are checked exactly; uncertified
ones only through an explicitly requested tail heuristic. The prefix coloring of a certified stable branching family is
shown stable through the certificate it inherits, and the `<0` order of a stable tree is split into the ascending
block and the descending block of its order type `ω + ω*`.

Classes:
    - OrderTypeResult: The two monotone blocks of a `<0` order and the nodes fitting neither.

Functions:
    - stable_rt1k_tree: The stable tree of color-class chains of a coloring of naturals.
    - check_stability_of_coloring: Exact or heuristic stability of a coloring of pairs.
    - check_stable_coloring_preserved: Stability of the prefix coloring of a stable branching family.
    - lt0_order_type: The ascending and descending blocks of the `<0` order of a tree.
"""

from dataclasses import dataclass
from functools import cmp_to_key
from itertools import islice

from arbor.core.model.branching import BranchingSet
from arbor.core.model.colorings import PairColoring, UnaryColoring
from arbor.core.model.errors import CheckResult, ErrorCode, WorkbenchError
from arbor.core.model.stability import check_coloring_stable, check_stable_tree
from arbor.core.model.strings import EPSILON, Str, order_lt0
from arbor.core.model.trees import FiniteTreeSnapshot, StagedTree, psi_enumeration
from arbor.core.reductions.orders import eventual_start
from arbor.core.reductions.sher import sher_instance
from arbor.core.utils.log import get_logger

logger = get_logger(__name__)


def stable_rt1k_tree(f: UnaryColoring) -> FiniteTreeSnapshot:
    """
    The tree of increasing strings listing a color class of `f` up to their last entry.

    For each `x` the string `σx` lists every `y <= x` with `f(y) = f(x)`. The prefixes of `σx` are the strings `σy`
    of its entries, so the strings and the root form a tree made of one chain per color, and every antichain has at
    most `k` elements.

    Args:
        f: A coloring of the naturals with `k` colors.

    Returns:
        The tree, truncated at the coloring's horizon.
    """
    nodes: set[Str] = {EPSILON}
    for x in range(f.horizon):
        nodes.add(tuple(y for y in range(x + 1) if f(y) == f(x)))
    return FiniteTreeSnapshot(frozenset(nodes))


def check_stability_of_coloring(f: PairColoring, *, heuristic: bool = False) -> CheckResult:
    """
    Check that every column `f(x, ·)` of a coloring has a limit.

    Args:
        f: The coloring.
        heuristic: Without a certificate, accept a coloring whose columns below half the horizon are constant over
            the tail window `[H/2, H)`.

    Returns:
        The check result, with an unstable column as counterexample.

    Raises:
        WorkbenchError: NO_CERTIFICATE in exact mode for a coloring without certificate.
    """
    if not heuristic or f.certificate is not None:
        return check_coloring_stable(f)
    half = f.horizon // 2
    logger.warning(f"stability checked within the tail window [{half}, {f.horizon}) only")
    for x in range(half):
        if len({f(x, y) for y in range(half, f.horizon)}) > 1:
            return CheckResult.failed(x)
    return CheckResult.passed()


def check_stable_coloring_preserved(branching: BranchingSet, horizon: int | None = None) -> CheckResult:
    """
    Check that the prefix coloring of a stable branching family is stable.

    The coloring inherits the family's certificate, and its column at `x` settles on 1 when the `x`-th string is
    eventually comparable to later strings and on 0 when it is eventually incomparable to them.

    Args:
        branching: A certified branching set of a stable family.
        horizon: Number of strings enumerated.

    Returns:
        The result of the stability check on the prefix coloring.

    Raises:
        WorkbenchError: NO_CERTIFICATE for uncertified sets, BAD_PARAMS if the family is not stable.
    """
    check = check_stable_tree(branching)
    if not check:
        raise WorkbenchError(ErrorCode.BAD_PARAMS, "the branching family is not stable", check.counterexample)
    f, _ = sher_instance(branching, horizon)
    return check_coloring_stable(f)


@dataclass(frozen=True)
class OrderTypeResult:
    """
    The enumerated nodes of a tree outside its tail window, split by how they compare with the window under `<0`.

    Attributes:
        ascending: Nodes below every node of the window, in `<0` order.
        descending: Nodes above every node of the window, in `<0` order.
        unclassified: Nodes below some and above other nodes of the window.
        window: The nodes of the tail window.
    """

    ascending: tuple[Str, ...]
    descending: tuple[Str, ...]
    unclassified: tuple[Str, ...]
    window: tuple[Str, ...]

    @property
    def ok(self) -> bool:
        return not self.unclassified


def _lt0_sorted(nodes: list[Str]) -> tuple[Str, ...]:
    return tuple(sorted(nodes, key=cmp_to_key(lambda a, b: -1 if order_lt0(a, b) else 1)))


def lt0_order_type(tree: StagedTree | BranchingSet, horizon: int | None = None) -> OrderTypeResult:
    """
    Split the `<0` order of a tree into an ascending block followed by a descending block.

    On a stable tree `<0` has order type `ω + ω*`: each node is eventually below or eventually above all later nodes.
    The final third of the enumeration is the tail window; every earlier node must be below all of it or above all
    of it.

    Args:
        tree: A c.e. tree, enumerated through `psi`, or a branching set, enumerated root first by increasing code.
        horizon: Number of strings drawn from a branching set.

    Returns:
        The blocks; `ok` is False when some node fits neither.
    """
    if isinstance(tree, StagedTree):
        psi = psi_enumeration(tree)
    else:
        size = horizon if horizon is not None else len(tree.members()) + 1
        psi = [EPSILON, *islice(tree.stream(), size - 1)]
    start = eventual_start(len(psi))
    window = psi[start:]
    ascending, descending, unclassified = [], [], []
    for sigma in psi[:start]:
        below = [order_lt0(sigma, tau) for tau in window]
        if all(below):
            ascending.append(sigma)
        elif not any(below):
            descending.append(sigma)
        else:
            unclassified.append(sigma)
    if unclassified:
        logger.warning(f"{len(unclassified)} nodes fit neither block of the order type")
    return OrderTypeResult(_lt0_sorted(ascending), _lt0_sorted(descending), tuple(unclassified), tuple(window))
