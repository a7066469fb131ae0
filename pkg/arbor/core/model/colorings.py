"""
Arbor Colorings.

Finite renditions of the Ramsey-type instances: colorings of pairs and of naturals, linear orders, and stage-wise
approximations of sequences of sets, each evaluated up to an explicit horizon. Pair colorings are stored as a numpy
grid whose upper triangle holds the colors, which keeps every validity check a plain scan over `x < y < z`.

Imports:
    - numpy: Color and order grids.

Classes:
    - ColoringCertificate: Generator metadata answering limit queries.
    - PairColoring: A k-coloring of pairs below a horizon.
    - UnaryColoring: A k-coloring of naturals below a horizon.
    - LinearOrderInstance: A strict linear order on the naturals below a horizon.
    - Approx2Sequence: Stage approximations of finitely many sets.
    - Delta2Instance: One set of an approximation sequence, as an instance of the extraction problem.

Functions:
    - check_semi_hereditary: `f(x,z) = f(y,z) = i` forces `f(x,y) = i`.
    - check_semi_ancestry: `f(x,y) = f(x,z) = i` forces `f(y,z) = i`.
    - check_transitive: `f(x,y) = f(y,z) = c` forces `f(x,z) = c`.
    - check_homogeneous: Every pair of a set has one color.
    - check_weakly_homogeneous: Every consecutive pair of a sequence has one color.
"""

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

import numpy as np

from arbor.core.model.errors import CheckResult, ErrorCode, WorkbenchError


@dataclass(frozen=True)
class ColoringCertificate:
    """
    Generator metadata for a pair coloring.

    Families: `constant` (`color`), `parity` (`f(x,y) = y mod 2`), `sher` (the coloring of a certified branching
    family; params are that family's certificate), and `limit-table` (`limits`, one limit color per natural).
    """

    family: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "params": dict(self.params)}


@dataclass(frozen=True, eq=False)
class PairColoring:
    """
    A coloring of the pairs `x < y < horizon` with colors below `num_colors`.

    Attributes:
        num_colors: Number of colors, at least 2.
        horizon: Every evaluated natural is below it.
        table: `horizon x horizon` grid; `table[x, y]` is the color of `{x, y}` for `x < y`, -1 elsewhere.
        certificate: Generator metadata for limit queries, when known.
    """

    num_colors: int
    horizon: int
    table: np.ndarray
    certificate: ColoringCertificate | None = None

    def __post_init__(self) -> None:
        if self.num_colors < 2:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"need at least 2 colors, got {self.num_colors}")
        if self.table.shape != (self.horizon, self.horizon):
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"table shape {self.table.shape} does not match horizon")
        upper = self.table[np.triu_indices(self.horizon, k=1)]
        if upper.size and (upper.min() < 0 or upper.max() >= self.num_colors):
            raise WorkbenchError(ErrorCode.BAD_PARAMS, "colors out of range or pairs left uncolored")
        table = self.table.copy()
        table[np.tril_indices(self.horizon)] = -1
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_function(
        cls,
        num_colors: int,
        horizon: int,
        color: Callable[[int, int], int],
        certificate: ColoringCertificate | None = None,
    ) -> "PairColoring":
        table = np.full((horizon, horizon), -1, dtype=np.int64)
        for x, y in combinations(range(horizon), 2):
            table[x, y] = color(x, y)
        return cls(num_colors, horizon, table, certificate)

    @classmethod
    def constant(cls, horizon: int, color: int, num_colors: int = 2) -> "PairColoring":
        return cls.from_function(
            num_colors,
            horizon,
            lambda x, y: color,
            ColoringCertificate("constant", {"color": color}),
        )

    @classmethod
    def parity(cls, horizon: int) -> "PairColoring":
        """
        `f(x, y) = y mod 2`; every column alternates, so the coloring is unstable.
        """
        return cls.from_function(2, horizon, lambda x, y: y % 2, ColoringCertificate("parity"))

    def __call__(self, x: int, y: int) -> int:
        """
        The color of `{x, y}`; the arguments may come in either order.

        Raises:
            WorkbenchError: DOMAIN_MISMATCH for equal arguments or arguments past the horizon.
        """
        if x == y or not (0 <= x < self.horizon and 0 <= y < self.horizon):
            raise WorkbenchError(ErrorCode.DOMAIN_MISMATCH, f"pair ({x}, {y}) outside the coloring", (x, y))
        low, high = (x, y) if x < y else (y, x)
        return int(self.table[low, high])

    def pairs(self) -> Iterable[tuple[int, int, int]]:
        for x, y in combinations(range(self.horizon), 2):
            yield x, y, int(self.table[x, y])

    def restrict(self, horizon: int) -> "PairColoring":
        return PairColoring(self.num_colors, horizon, self.table[:horizon, :horizon], self.certificate)

    def column(self, x: int) -> list[int]:
        """
        The colors `f(x, y)` for `x < y < horizon`.
        """
        return [int(c) for c in self.table[x, x + 1 :]]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PairColoring)
            and (self.num_colors, self.horizon) == (other.num_colors, other.horizon)
            and bool(np.array_equal(self.table, other.table))
        )

    def __hash__(self) -> int:
        return hash((self.num_colors, self.horizon, self.table.tobytes()))


def _domain(f: PairColoring, on: Iterable[int] | None) -> list[int]:
    if on is None:
        return list(range(f.horizon))
    points = sorted(set(on))
    if points and (points[0] < 0 or points[-1] >= f.horizon):
        raise WorkbenchError(ErrorCode.DOMAIN_MISMATCH, "set reaches past the coloring's horizon", tuple(points))
    return points


def check_semi_hereditary(f: PairColoring, color: int, on: Iterable[int] | None = None) -> CheckResult:
    """
    Check that `f(x,z) = f(y,z) = color` implies `f(x,y) = color` for all `x < y < z`.

    Args:
        f: The coloring.
        color: The color `i`.
        on: Restrict the check to this set; defaults to the whole horizon.

    Returns:
        The check result, with a violating triple `(x, y, z)`.
    """
    t = f.table
    for x, y, z in combinations(_domain(f, on), 3):
        if t[x, z] == color and t[y, z] == color and t[x, y] != color:
            return CheckResult.failed(x, y, z)
    return CheckResult.passed()


def check_semi_ancestry(f: PairColoring, color: int, on: Iterable[int] | None = None) -> CheckResult:
    """
    Check that `f(x,y) = f(x,z) = color` implies `f(y,z) = color` for all `x < y < z`.

    Args:
        f: The coloring.
        color: The color checked.
        on: Restrict to these naturals; all of the horizon by default.

    Returns:
        The result, with a violating triple on failure.
    """
    t = f.table
    for x, y, z in combinations(_domain(f, on), 3):
        if t[x, y] == color and t[x, z] == color and t[y, z] != color:
            return CheckResult.failed(x, y, z)
    return CheckResult.passed()


def check_transitive(
    f: PairColoring,
    on: Iterable[int] | None = None,
    colors: Iterable[int] | None = None,
) -> CheckResult:
    """
    Check that `f(x,y) = f(y,z) = c` implies `f(x,z) = c` for all `x < y < z` and every color `c` requested.

    Args:
        f: The coloring.
        on: Restrict to these naturals; all of the horizon by default.
        colors: The colors checked; all of them by default.

    Returns:
        The result, with a violating triple on failure.
    """
    wanted = set(range(f.num_colors) if colors is None else colors)
    t = f.table
    for x, y, z in combinations(_domain(f, on), 3):
        if t[x, y] == t[y, z] and t[x, y] in wanted and t[x, z] != t[x, y]:
            return CheckResult.failed(x, y, z)
    return CheckResult.passed()


def check_homogeneous(f: PairColoring, points: Iterable[int], color: int) -> CheckResult:
    """
    Check that every pair of the given naturals has the given color.

    Args:
        f: The coloring.
        points: The naturals.
        color: The color.

    Returns:
        The result, with a violating pair on failure.
    """
    t = f.table
    for x, y in combinations(_domain(f, points), 2):
        if t[x, y] != color:
            return CheckResult.failed(x, y)
    return CheckResult.passed()


def check_weakly_homogeneous(f: PairColoring, sequence: Sequence[int], color: int) -> CheckResult:
    """
    Check that the sequence increases and every consecutive pair has the given color.

    Args:
        f: The coloring.
        sequence: The sequence of naturals.
        color: The color of consecutive pairs.

    Returns:
        The result, with a violating pair on failure.
    """
    _domain(f, sequence)
    for a, b in zip(sequence, sequence[1:]):
        if a >= b or f(a, b) != color:
            return CheckResult.failed(a, b)
    return CheckResult.passed()


@dataclass(frozen=True)
class UnaryColoring:
    """
    A coloring of the naturals below `len(values)` with `num_colors` colors.
    """

    num_colors: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.num_colors < 1:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"need at least 1 color, got {self.num_colors}")
        bad = [value for value in self.values if not 0 <= value < self.num_colors]
        if bad:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"colors {bad} out of range for k={self.num_colors}")

    @property
    def horizon(self) -> int:
        return len(self.values)

    def __call__(self, x: int) -> int:
        if not 0 <= x < self.horizon:
            raise WorkbenchError(ErrorCode.DOMAIN_MISMATCH, f"{x} is past the horizon {self.horizon}", (x,))
        return self.values[x]

    def color_class(self, color: int) -> list[int]:
        return [x for x, value in enumerate(self.values) if value == color]


@dataclass(frozen=True, eq=False)
class LinearOrderInstance:
    """
    A strict linear order on `[0, horizon)`; `lt[x, y]` holds iff `x <_L y`.

    Raises:
        WorkbenchError: NOT_TOTAL if the relation is reflexive, not antisymmetric or not total; NOT_TRANSITIVE if it
            is not transitive.
    """

    horizon: int
    lt: np.ndarray

    def __post_init__(self) -> None:
        lt = np.asarray(self.lt, dtype=bool).copy()
        if lt.shape != (self.horizon, self.horizon):
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"order shape {lt.shape} does not match horizon")
        check_linear_order(lt).raise_for(ErrorCode.NOT_TOTAL, "relation is not a strict total order")
        lt.setflags(write=False)
        object.__setattr__(self, "lt", lt)

    @classmethod
    def from_ranking(cls, ranking: Sequence[int]) -> "LinearOrderInstance":
        """
        The order listing `ranking` from least to greatest.
        """
        horizon = len(ranking)
        if sorted(ranking) != list(range(horizon)):
            raise WorkbenchError(ErrorCode.BAD_PARAMS, "ranking must be a permutation of the horizon")
        rank = np.empty(horizon, dtype=np.int64)
        rank[np.asarray(ranking, dtype=np.int64)] = np.arange(horizon)
        return cls(horizon, rank[:, None] < rank[None, :])

    @classmethod
    def standard(cls, horizon: int) -> "LinearOrderInstance":
        return cls.from_ranking(list(range(horizon)))

    @classmethod
    def reverse(cls, horizon: int) -> "LinearOrderInstance":
        return cls.from_ranking(list(reversed(range(horizon))))

    def __call__(self, x: int, y: int) -> bool:
        return bool(self.lt[x, y])

    def ranking(self) -> list[int]:
        """
        The naturals from least to greatest under the order.
        """
        below = self.lt.sum(axis=0)
        return [int(x) for x in np.argsort(below, kind="stable")]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearOrderInstance) and bool(np.array_equal(self.lt, other.lt))

    def __hash__(self) -> int:
        return hash(self.lt.tobytes())


def check_linear_order(lt: np.ndarray) -> CheckResult:
    """
    Exhaustively check irreflexivity, antisymmetry, totality and transitivity.

    Args:
        lt: Square boolean matrix, `lt[x, y]` iff `x <_L y`.

    Returns:
        The result, with a violating pair or triple on failure.
    """
    horizon = lt.shape[0]
    for x in range(horizon):
        if lt[x, x]:
            return CheckResult.failed(x, x)
    for x, y in combinations(range(horizon), 2):
        if lt[x, y] == lt[y, x]:
            return CheckResult.failed(x, y)
    for x in range(horizon):
        for y in np.flatnonzero(lt[x]):
            above = np.flatnonzero(lt[y] & ~lt[x])
            above = above[above != x]
            if above.size:
                return CheckResult.failed(x, int(y), int(above[0]))
    return CheckResult.passed()


@dataclass(frozen=True)
class Approx2Sequence:
    """
    Stage approximations `A_e[s]` of `count` sets of naturals.

    `members[e][s]` is the finite set `A_e[s]`. For every natural `x < horizon / 2` the membership of `x` is constant
    over the stages of the second half of the horizon, so the limit set is read off the last stage.

    Raises:
        WorkbenchError: BAD_PARAMS if the table shape is wrong, HORIZON_TOO_SMALL if some membership has not settled.
    """

    count: int
    horizon: int
    members: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self) -> None:
        if len(self.members) != self.count or any(len(row) != self.horizon for row in self.members):
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"table must be {self.count} rows of {self.horizon} stages")
        check = self.check_stabilization()
        check.raise_for(ErrorCode.HORIZON_TOO_SMALL, "approximation has not settled in the second half")

    @classmethod
    def from_function(cls, count: int, horizon: int, member: Callable[[int, int, int], bool]) -> "Approx2Sequence":
        """
        Tabulate `member(e, s, x)` for `x < horizon`.
        """
        rows = tuple(
            tuple(frozenset(x for x in range(horizon) if member(e, s, x)) for s in range(horizon)) for e in range(count)
        )
        return cls(count, horizon, rows)

    @property
    def settled(self) -> int:
        """
        Naturals below this bound have settled membership.
        """
        return self.horizon // 2

    def __call__(self, e: int, s: int, x: int) -> bool:
        if not (0 <= e < self.count and 0 <= s < self.horizon):
            raise WorkbenchError(ErrorCode.DOMAIN_MISMATCH, f"no stage {s} of set {e}", (e, s))
        return x in self.members[e][s]

    def limit(self, e: int) -> frozenset[int]:
        """
        The limit set `A_e` below the settled bound.
        """
        return frozenset(x for x in self.members[e][-1] if x < self.settled)

    def check_stabilization(self) -> CheckResult:
        half = self.horizon // 2
        for e, row in enumerate(self.members):
            for s in range(half + 1, self.horizon):
                changed = sorted(x for x in row[s] ^ row[s - 1] if x < half)
                if changed:
                    return CheckResult.failed(e, s, changed[0])
        return CheckResult.passed()

    def to_mapping(self) -> Mapping[int, Mapping[int, list[int]]]:
        return {e: {s: sorted(row[s]) for s in range(self.horizon)} for e, row in enumerate(self.members)}


@dataclass(frozen=True)
class Delta2Instance:
    """
    The set `A_e` of an approximation sequence, posed as: find a set contained in it or disjoint from it.
    """

    approx: Approx2Sequence
    index: int

    def __post_init__(self) -> None:
        if not 0 <= self.index < self.approx.count:
            raise WorkbenchError(ErrorCode.BAD_PARAMS, f"no set {self.index} among {self.approx.count}")

    @property
    def horizon(self) -> int:
        return self.approx.horizon

    def limit(self) -> frozenset[int]:
        return self.approx.limit(self.index)
