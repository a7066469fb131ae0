"""
Arbor Stability.

Stability of trees and colorings. A tree is stable when each node is eventually comparable to, or eventually
incomparable to, all later nodes; a coloring of pairs is stable when every column `f(x, ·)` has a limit. Neither is
visible in a finite truncation, so both checks read the instance's certificate and raise NO_CERTIFICATE without one.

Imports:
    - itertools: Lazy slicing of member streams.

Classes:
    - SigmaTree: The tree of backward-greedy sequences of a semi-hereditary coloring.

Functions:
    - check_stable_tree: Certified stability of a branching set or a sigma tree.
    - limit_color: The certified limit of a column of a coloring.
    - check_coloring_stable: Certified stability of a coloring.
"""

from dataclasses import dataclass
from itertools import islice

from arbor.core.model.branching import BranchingSet, Certificate
from arbor.core.model.colorings import PairColoring
from arbor.core.model.errors import CheckResult, ErrorCode, WorkbenchError
from arbor.core.model.strings import EPSILON, Str
from arbor.core.model.trees import FiniteTreeSnapshot


@dataclass(frozen=True)
class SigmaTree:
    """
    The tree built from a coloring semi-hereditary for `color`: `labels[n]` is the sequence `σ_n` and `snapshot` is
    the set of all their prefixes.
    """

    snapshot: FiniteTreeSnapshot
    labels: tuple[Str, ...]
    coloring: PairColoring
    color: int

    def node_label(self, sigma: Str) -> int | None:
        """
        The natural `n` with `σ_n = sigma`, if any.
        """
        if sigma and sigma[-1] < len(self.labels) and self.labels[sigma[-1]] == sigma:
            return sigma[-1]
        return None


def psi_of_family(branching: BranchingSet, x: int) -> Str:
    """
    The x-th string of a branching family in code order, the root first.

    Args:
        branching: The branching set.
        x: The index.

    Returns:
        The string.
    """
    if x == 0:
        return EPSILON
    found = list(islice(branching.stream(), x - 1, x))
    if not found:
        raise WorkbenchError(ErrorCode.HORIZON_TOO_SMALL, f"the family has fewer than {x} members at its depth")
    return found[0]


def _node_verdict(branching: BranchingSet, sigma: Str) -> tuple[bool, bool]:
    return branching.family.cone_infinite(sigma), branching.incomparable_infinite(sigma)


def check_stable_tree(tree: BranchingSet | SigmaTree) -> CheckResult:
    """
    Check that every node of a certified tree is eventually comparable or eventually incomparable to later nodes.

    For a branching family, the nodes up to one level past the family's decisive depth are checked; deeper nodes
    repeat one of those patterns. A sigma tree is stable exactly when its coloring is, since `σ_p` extends `σ_n` for
    almost every `p` when the column of `n` settles on the tree's color and is incomparable to it otherwise.

    Args:
        tree: A certified branching set or a sigma tree.

    Returns:
        The check result, with an unstable node as counterexample.

    Raises:
        WorkbenchError: NO_CERTIFICATE if the instance cannot answer infinitude queries.
    """
    if isinstance(tree, SigmaTree):
        check = check_coloring_stable(tree.coloring)
        if check:
            return check
        (n,) = check.counterexample or (0,)
        label = tree.labels[n] if n < len(tree.labels) else (n,)
        return CheckResult.failed(label)
    if not isinstance(tree, BranchingSet) or not tree.certified:
        raise WorkbenchError(ErrorCode.NO_CERTIFICATE, "stability needs a certified instance")
    for sigma in (EPSILON, *tree.stream(max_depth=tree.family.decisive_depth + 1)):
        comparable_many, incomparable_many = _node_verdict(tree, sigma)
        if comparable_many and incomparable_many:
            return CheckResult.failed(sigma)
    return CheckResult.passed()


def limit_color(f: PairColoring, x: int) -> int | None:
    """
    The certified limit of `f(x, y)` as `y` grows, or None if the column does not settle.

    Args:
        f: A certified coloring.
        x: The column.

    Raises:
        WorkbenchError: NO_CERTIFICATE if the coloring carries no certificate.
    """
    certificate = f.certificate
    if certificate is None:
        raise WorkbenchError(ErrorCode.NO_CERTIFICATE, "coloring carries no limit certificate")
    if certificate.family == "constant":
        return int(certificate.params["color"])
    if certificate.family == "parity":
        return None
    if certificate.family == "limit-table":
        limits = certificate.params["limits"]
        if x >= len(limits):
            raise WorkbenchError(ErrorCode.HORIZON_TOO_SMALL, f"no certified limit for {x}")
        return None if limits[x] is None else int(limits[x])
    if certificate.family == "sher":
        branching = BranchingSet.from_certificate(Certificate.from_dict(certificate.params))
        sigma = psi_of_family(branching, x)
        comparable_many, incomparable_many = _node_verdict(branching, sigma)
        if not incomparable_many:
            return 1
        if not comparable_many:
            return 0
        return None
    raise WorkbenchError(ErrorCode.NO_CERTIFICATE, f"unknown coloring certificate {certificate.family!r}")


def check_coloring_stable(f: PairColoring) -> CheckResult:
    """
    Exact stability of a certified coloring over all naturals.

    Args:
        f: A certified coloring.

    Returns:
        The result, with a column that does not settle on failure.

    Raises:
        WorkbenchError: NO_CERTIFICATE if the coloring carries no certificate.
    """
    certificate = f.certificate
    if certificate is None:
        raise WorkbenchError(ErrorCode.NO_CERTIFICATE, "coloring carries no limit certificate")
    if certificate.family == "sher":
        branching = BranchingSet.from_certificate(Certificate.from_dict(certificate.params))
        check = check_stable_tree(branching)
        if check:
            return check
        (sigma,) = check.counterexample  # type: ignore[misc]
        for x, tau in enumerate((EPSILON, *branching.stream())):
            if tau == sigma:
                return CheckResult.failed(x)
        return CheckResult.failed(sigma)
    if certificate.family == "limit-table":
        limits = certificate.params["limits"]
        unsettled = [x for x, limit in enumerate(limits) if limit is None]
        return CheckResult.failed(unsettled[0]) if unsettled else CheckResult.passed()
    if certificate.family == "parity":
        return CheckResult.failed(0)
    limit_color(f, 0)
    return CheckResult.passed()
