"""
Arbor Branching Sets.

Completely branching sets of binary strings and the certified families they are drawn from. A family describes an
infinite set by its "live" nodes: the members are exactly the two children of every live node. Because every family
in the catalog is rule-based, questions about infinitely many members ("is the cone above this node infinite?", "are
there infinitely many members incomparable to all of these strings?") are answered exactly, without truncation.

A `BranchingSet` pairs a family with a represented depth. Membership and streaming never materialise the whole set, so
the depth may be far larger than anything that could be listed.

Imports:
    - heapq: Best-first traversal in code order.
    - arbor.core.model.strings: String operations and codes.

Classes:
    - BranchingFamily: Abstract rule-based family of completely branching sets.
    - PerfectBinaryFamily: All nonempty binary strings.
    - KPathFamily: Siblings along k infinite paths.
    - CombFamily: An infinite spine with finite teeth.
    - OneBadFamily: A toothed spine of planted bad elements below a perfect binary cone.
    - ExplicitFamily: A finite, uncertified set.
    - Certificate: Serializable family id and parameters.
    - BranchingSet: A family at a represented depth.

Functions:
    - is_completely_branching: Check the sibling biconditional on a finite set.
"""

import heapq
from abc import ABC, abstractmethod
from collections.abc import Collection, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any, ClassVar

from arbor.core.model.errors import CheckResult, ErrorCode, WorkbenchError
from arbor.core.model.strings import (
    EPSILON,
    Str,
    child_code,
    is_binary,
    pretty,
)
from arbor.core.utils.constants import DEFAULT_STREAM_DEPTH


def is_completely_branching(members: Collection[Str]) -> CheckResult:
    """
    Check that `σ·0` is a member iff `σ·1` is, for every binary `σ`.

    Args:
        members: A finite set of binary strings.

    Returns:
        The check result; on failure, the member whose sibling is missing.
    """
    member_set = frozenset(members)
    for sigma in sorted(member_set, key=lambda s: (len(s), s)):
        if not sigma:
            continue
        if not is_binary(sigma):
            return CheckResult.failed(sigma)
        sibling = (*sigma[:-1], 1 - sigma[-1])
        if sibling not in member_set:
            return CheckResult.failed(sigma, sibling)
    return CheckResult.passed()


class BranchingFamily(ABC):
    """
    A completely branching set of binary strings, given by its live nodes.

    Members are the children of live nodes. `cone_infinite` answers whether infinitely many members extend a node;
    `decisive_depth` is a depth past which every node behaves like one of its ancestors, so finitely many node checks
    certify a property of the whole family.
    """

    family_id: ClassVar[str]
    certified: ClassVar[bool] = True

    @abstractmethod
    def live(self, nu: Str) -> bool:
        raise NotImplementedError

    @abstractmethod
    def cone_infinite(self, nu: Str) -> bool:
        raise NotImplementedError

    @property
    @abstractmethod
    def params(self) -> dict[str, int]:
        raise NotImplementedError

    @property
    def decisive_depth(self) -> int:
        return 0

    @property
    def plants(self) -> tuple[Str, ...]:
        """
        Members whose choice collapses the randomized solver, when the family plants any.
        """
        return ()

    def restriction_infinite(self, constraints: tuple[Str, ...]) -> bool | None:
        """
        Answer `BranchingSet.is_infinite_restriction` from the family's shape, or None to leave it to the traversal.
        """
        return None

    def member(self, sigma: Str) -> bool:
        return bool(sigma) and is_binary(sigma) and self.live(sigma[:-1])

    def expands(self, nu: Str) -> bool:
        """
        Whether some member strictly extends `nu`.
        """
        return self.live(nu)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BranchingFamily) and (self.family_id, self.params) == (other.family_id, other.params)

    def __hash__(self) -> int:
        return hash((self.family_id, tuple(sorted(self.params.items()))))

    def __repr__(self) -> str:
        args = ", ".join(f"{key}={value}" for key, value in sorted(self.params.items()))
        return f"{type(self).__name__}({args})"


class PerfectBinaryFamily(BranchingFamily):
    """
    Every nonempty binary string.
    """

    family_id = "perfect-binary"

    def live(self, nu: Str) -> bool:
        return is_binary(nu)

    def cone_infinite(self, nu: Str) -> bool:
        return is_binary(nu)

    @property
    def params(self) -> dict[str, int]:
        return {}


class KPathFamily(BranchingFamily):
    """
    The siblings along the k paths `1^i·0^ω` for `i < k`.
    """

    family_id = "k-path"

    def __init__(self, k: int) -> None:
        if k < 1:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"k-path needs k >= 1, got {k}")
        self.k = k

    def live(self, nu: Str) -> bool:
        ones = 0
        while ones < len(nu) and nu[ones] == 1:
            ones += 1
        return ones < self.k and all(item == 0 for item in nu[ones:])

    def cone_infinite(self, nu: Str) -> bool:
        return self.live(nu)

    @property
    def params(self) -> dict[str, int]:
        return {"k": self.k}

    @property
    def decisive_depth(self) -> int:
        return self.k


class CombFamily(BranchingFamily):
    """
    The spine `0^ω` with a tooth `0^j·1·0^m` (`m < tooth`) hanging off every spine node.

    With `tooth=0` this is a single path decorated with siblings.
    """

    family_id = "comb"

    def __init__(self, tooth: int = 0) -> None:
        if tooth < 0:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"comb needs tooth >= 0, got {tooth}")
        self.tooth = tooth

    def live(self, nu: Str) -> bool:
        if not is_binary(nu):
            return False
        ones = [position for position, item in enumerate(nu) if item == 1]
        if not ones:
            return True
        return len(ones) == 1 and len(nu) - ones[0] - 1 < self.tooth

    def cone_infinite(self, nu: Str) -> bool:
        return is_binary(nu) and all(item == 0 for item in nu)

    @property
    def params(self) -> dict[str, int]:
        return {"tooth": self.tooth}

    @property
    def decisive_depth(self) -> int:
        return self.tooth + 1


class OneBadFamily(BranchingFamily):
    """
    A spine `0^j` with a perfect binary tooth on every spine sibling, below a perfect binary cone.

    The live nodes are the spine `0^j` for `j < spine_length`, the tooth nodes `0^j·1·ρ` with `|ρ| < TOOTH_HEIGHT`,
    and every binary string extending `0^spine_length`. A spine member leaves only finitely many members incomparable
    to it, so choosing it collapses the randomized solver; every tooth member leaves the cone. The spine is as long
    as the antichains of `rounds` rounds of the schedule `2^(shift+k+1)` add up to, and a search in code order always
    stops with exactly one spine member among the maximal elements it collected, so each of those rounds offers
    exactly one bad element. With `rounds=0` the family is the perfect binary tree.
    """

    family_id = "one-bad"
    TOOTH_HEIGHT: ClassVar[int] = 3

    def __init__(self, rounds: int, shift: int = 1) -> None:
        if rounds < 0:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"one-bad needs rounds >= 0, got {rounds}")
        if shift < 1:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"one-bad needs shift >= 1, got {shift}")
        self.rounds = rounds
        self.shift = shift
        self.spine_length = sum(2 ** (shift + k + 1) for k in range(rounds))

    def live(self, nu: Str) -> bool:
        if not is_binary(nu):
            return False
        head = nu[: self.spine_length]
        if 1 not in head:
            return True
        return len(nu) - head.index(1) - 1 < self.TOOTH_HEIGHT

    def cone_infinite(self, nu: Str) -> bool:
        return is_binary(nu) and 1 not in nu[: self.spine_length]

    def restriction_infinite(self, constraints: tuple[Str, ...]) -> bool | None:
        if any(len(sigma) <= self.spine_length and not any(sigma) for sigma in constraints):
            return False
        if all(any(sigma[: self.spine_length]) for sigma in constraints):
            return True
        return None

    @property
    def params(self) -> dict[str, int]:
        return {"rounds": self.rounds} if self.shift == 1 else {"rounds": self.rounds, "shift": self.shift}

    @property
    def decisive_depth(self) -> int:
        return self.spine_length + self.TOOTH_HEIGHT

    @property
    def plants(self) -> tuple[Str, ...]:
        return tuple((0,) * j for j in range(1, self.spine_length + 1))


class ExplicitFamily(BranchingFamily):
    """
    A finite completely branching set given by its members. It carries no certificate.

    Raises:
        WorkbenchError: NOT_COMPLETELY_BRANCHING if a sibling is missing.
    """

    family_id = "explicit"
    certified = False

    def __init__(self, members: Iterable[Str]) -> None:
        self.members = frozenset(tuple(sigma) for sigma in members if sigma)
        is_completely_branching(self.members).raise_for(
            ErrorCode.NOT_COMPLETELY_BRANCHING,
            "explicit set is not completely branching",
        )
        self._parents = frozenset(sigma[:-1] for sigma in self.members)
        self._above = frozenset(sigma[:length] for sigma in self.members for length in range(len(sigma)))

    def live(self, nu: Str) -> bool:
        return nu in self._parents

    def member(self, sigma: Str) -> bool:
        return sigma in self.members

    def expands(self, nu: Str) -> bool:
        return nu in self._above

    def cone_infinite(self, nu: Str) -> bool:
        raise WorkbenchError(ErrorCode.NO_CERTIFICATE, "an explicit finite set cannot answer infinitude queries")

    @property
    def params(self) -> dict[str, int]:
        return {"size": len(self.members)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExplicitFamily) and self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)


FAMILIES: dict[str, type[BranchingFamily]] = {
    PerfectBinaryFamily.family_id: PerfectBinaryFamily,
    KPathFamily.family_id: KPathFamily,
    CombFamily.family_id: CombFamily,
    OneBadFamily.family_id: OneBadFamily,
}


@dataclass(frozen=True)
class Certificate:
    """
    Family id and parameters, enough to rebuild a certified family.
    """

    family: str
    params: Mapping[str, int] = field(default_factory=dict)

    def build(self) -> BranchingFamily:
        """
        Rebuild the family.

        Raises:
            WorkbenchError: UNKNOWN_FAMILY or BAD_PARAMS.
        """
        family_cls = FAMILIES.get(self.family)
        if family_cls is None:
            raise WorkbenchError(ErrorCode.UNKNOWN_FAMILY, f"unknown branching family {self.family!r}")
        try:
            return family_cls(**dict(self.params))  # type: ignore[call-arg]
        except TypeError as e:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"bad parameters for {self.family}: {dict(self.params)}") from e

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "params": dict(sorted(self.params.items()))}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Certificate":
        if "family" not in data:
            raise WorkbenchError(ErrorCode.PARSE_ERROR, "certificate has no family")
        return cls(str(data["family"]), {str(k): int(v) for k, v in dict(data.get("params", {})).items()})


@dataclass(frozen=True)
class BranchingSet:
    """
    A completely branching set of binary strings, represented to a depth.

    Attributes:
        family: The rule describing the (possibly infinite) set.
        depth: Longest member represented; streams and listings stop there.
    """

    family: BranchingFamily
    depth: int = DEFAULT_STREAM_DEPTH

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"depth must be non-negative, got {self.depth}")

    @classmethod
    def from_certificate(cls, certificate: Certificate, depth: int = DEFAULT_STREAM_DEPTH) -> "BranchingSet":
        return cls(certificate.build(), depth)

    @classmethod
    def explicit(cls, members: Iterable[Str]) -> "BranchingSet":
        family = ExplicitFamily(members)
        return cls(family, max((len(sigma) for sigma in family.members), default=0))

    @property
    def certified(self) -> bool:
        return self.family.certified

    @property
    def certificate(self) -> Certificate:
        """
        The serializable certificate.

        Raises:
            WorkbenchError: NO_CERTIFICATE for explicit sets.
        """
        if not self.certified:
            raise WorkbenchError(ErrorCode.NO_CERTIFICATE, "explicit branching sets carry no certificate")
        return Certificate(self.family.family_id, self.family.params)

    def __contains__(self, sigma: object) -> bool:
        return isinstance(sigma, tuple) and len(sigma) <= self.depth and self.family.member(sigma)

    def members(self) -> list[Str]:
        """
        Every member up to the represented depth, in order of increasing code.
        """
        return list(self.stream())

    def tree_nodes(self) -> frozenset[Str]:
        """
        The members together with the root, which is the tree written for this set.
        """
        return frozenset({EPSILON, *self.stream()})

    def stream(self, chosen: Iterable[Str] = (), max_depth: int | None = None) -> Iterator[Str]:
        """
        Lazily enumerate the members that are incomparable to, and longer than, every chosen string.

        The traversal is best-first on the string code, so members come out in increasing code order, and the cone
        above each chosen string is never entered.

        Args:
            chosen: Strings already picked.
            max_depth: Overrides the represented depth.

        Yields:
            Members of the restricted set, by increasing code.
        """
        constraints = frozenset(chosen)
        if EPSILON in constraints:
            return
        longest = max((len(sigma) for sigma in constraints), default=-1)
        limit = self.depth if max_depth is None else max_depth
        heap: list[tuple[int, Str]] = [(0, EPSILON)]
        while heap:
            code, nu = heapq.heappop(heap)
            if nu and len(nu) > longest and self.family.member(nu):
                yield nu
            if len(nu) >= limit or not self.family.expands(nu):
                continue
            for item in (0, 1):
                child = (*nu, item)
                # no ancestor of a pushed node is chosen, so only the child itself can be
                if child in constraints:
                    continue
                heapq.heappush(heap, (child_code(code, len(nu), item), child))

    def is_infinite_restriction(self, chosen: Iterable[Str]) -> bool:
        """
        Decide whether infinitely many members are incomparable to every chosen string.

        Members shorter than the chosen strings are finitely many, so this is also the infinitude of the restricted
        set `{τ : τ ⊥ σ for every chosen σ, and τ longer than all of them}`.

        Raises:
            WorkbenchError: NO_CERTIFICATE for explicit sets.
        """
        constraints = tuple(chosen)
        if not self.certified:
            raise WorkbenchError(ErrorCode.NO_CERTIFICATE, "infinitude needs a certified family")
        answer = self.family.restriction_infinite(constraints)
        return self._infinite_above(constraints) if answer is None else answer

    def _infinite_above(self, constraints: tuple[Str, ...]) -> bool:
        # each entry pairs a node with the constraints on its path that extend or equal it
        stack: list[tuple[Str, tuple[Str, ...]]] = [(EPSILON, constraints)]
        while stack:
            nu, active = stack.pop()
            if any(len(sigma) <= len(nu) for sigma in active):
                continue
            if not active:
                if self.family.cone_infinite(nu):
                    return True
                continue
            if not self.family.expands(nu):
                continue
            children = [((*nu, item), tuple(sigma for sigma in active if sigma[len(nu)] == item)) for item in (0, 1)]
            # unconstrained children go on top and settle the answer without descending
            stack.extend(sorted(children, key=lambda entry: not entry[1]))
        return False

    def incomparable_infinite(self, sigma: Str) -> bool:
        return self.is_infinite_restriction([sigma])

    def check_member(self, sigma: Str) -> None:
        if sigma not in self:
            raise WorkbenchError(ErrorCode.DOMAIN_MISMATCH, f"{pretty(sigma)} is not a member", (sigma,))
