"""
Arbor Instance and Solution Formats.

Line-oriented UTF-8 text formats for every instance and solution type, with byte-stable output: a canonical header
line, then sorted body lines. Certified instances (branching families, colorings carrying limit certificates) keep
their certificate in a JSON sidecar `<file>.cert.json`, written and read alongside the instance.

    TREE v1                         one string per line, `-` for the empty string
    CETREE v1 horizon=H [bound=B]   lines `<stage> <string>`, each node at its first stage
    COLORING v1 k=K horizon=H       lines `<x> <y> <color>` covering all pairs
    UCOLOR v1 k=K horizon=H         one color per line
    ORDER v1 horizon=H              lines `<x> <y>` for `x <_L y`; a transitive reduction suffices on input
    APPROX v1 count=N horizon=H [index=E]   lines `<e> <s> <x>` for each `x` in `A_e[s]`
    SOLUTION v1 kind=K [color=I]    one string or natural per line, in solution order

Imports:
    - hashlib: Instance digests.
    - json: Certificate sidecars.
    - networkx: Transitive closure of order files.
    - numpy: Order and coloring grids.

Classes:
    - FormatError: Raised when a file cannot be parsed.

Functions:
    - dumps_instance / loads_instance: Instance text.
    - write_instance / read_instance: Instance files with sidecars.
    - dumps_solution / loads_solution: Solution text.
    - write_solution / read_solution: Solution files.
    - solution_to_dict: A JSON-ready solution.
    - instance_digest: The sha256 of the canonical serialization.
    - instance_horizon: The horizon an instance declares.
    - instance_extension: The file extension matching the format of an instance.
"""

import hashlib
import json
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np

from arbor.core.model.branching import BranchingSet, Certificate
from arbor.core.model.colorings import (
    Approx2Sequence,
    ColoringCertificate,
    Delta2Instance,
    LinearOrderInstance,
    PairColoring,
    UnaryColoring,
)
from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.model.solutions import SOLUTION_KINDS, STRING_SOLUTIONS, Solution
from arbor.core.model.strings import format_str, parse_str
from arbor.core.model.trees import FiniteTreeSnapshot, StagedTree, canonical_order

Instance = (
    FiniteTreeSnapshot
    | StagedTree
    | BranchingSet
    | PairColoring
    | UnaryColoring
    | LinearOrderInstance
    | Approx2Sequence
    | Delta2Instance
)

SIDECAR_SUFFIX = ".cert.json"


class FormatError(WorkbenchError):
    """
    Raised when instance or solution text cannot be parsed.
    """

    def __init__(self, message: str, line: int | None = None) -> None:
        where = f" (line {line})" if line is not None else ""
        super().__init__(ErrorCode.PARSE_ERROR, f"{message}{where}")


def _header(kind: str, /, **fields: int | str | None) -> str:
    parts = [kind, "v1", *(f"{key}={value}" for key, value in fields.items() if value is not None)]
    return " ".join(parts)


def _parse_header(line: str) -> tuple[str, dict[str, str]]:
    tokens = line.split()
    if len(tokens) < 2 or tokens[1] != "v1":
        raise FormatError(f"bad header {line!r}", 1)
    fields: dict[str, str] = {}
    for token in tokens[2:]:
        key, sep, value = token.partition("=")
        if not sep:
            raise FormatError(f"bad header field {token!r}", 1)
        fields[key] = value
    return tokens[0], fields


def _int_field(fields: Mapping[str, str], key: str, default: int | None = None) -> int:
    if key not in fields:
        if default is None:
            raise FormatError(f"header lacks {key}=", 1)
        return default
    try:
        return int(fields[key])
    except ValueError as e:
        raise FormatError(f"header field {key}={fields[key]!r} is not a natural", 1) from e


def _int_rows(lines: Iterable[tuple[int, str]], width: int) -> list[tuple[int, ...]]:
    rows = []
    for number, line in lines:
        try:
            row = tuple(int(token) for token in line.split())
        except ValueError as e:
            raise FormatError(f"expected {width} naturals, got {line!r}", number) from e
        if len(row) != width:
            raise FormatError(f"expected {width} naturals, got {line!r}", number)
        rows.append(row)
    return rows


def _body(text: str) -> tuple[str, list[tuple[int, str]]]:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty file")
    body = [(number, line) for number, line in enumerate(lines[1:], start=2) if line.strip()]
    return lines[0], body


def _dumps_tree(nodes: Iterable[Any]) -> str:
    return "\n".join([_header("TREE"), *(format_str(sigma) for sigma in canonical_order(nodes))]) + "\n"


def dumps_instance(instance: Instance) -> str:  # noqa: C901
    """
    Serialize an instance in its text format; certificates are not part of the text.

    Raises:
        WorkbenchError: TYPE_MISMATCH for objects with no format.
    """
    if isinstance(instance, FiniteTreeSnapshot):
        return _dumps_tree(instance.nodes)
    if isinstance(instance, BranchingSet):
        return _dumps_tree(instance.tree_nodes())
    if isinstance(instance, StagedTree):
        header = _header("CETREE", horizon=instance.horizon, bound=instance.branching_bound)
        rows = [f"{instance.first_stage[sigma]} {format_str(sigma)}" for sigma in instance.apparition_order()]
        return "\n".join([header, *rows]) + "\n"
    if isinstance(instance, PairColoring):
        header = _header("COLORING", k=instance.num_colors, horizon=instance.horizon)
        return "\n".join([header, *(f"{x} {y} {color}" for x, y, color in instance.pairs())]) + "\n"
    if isinstance(instance, UnaryColoring):
        header = _header("UCOLOR", k=instance.num_colors, horizon=instance.horizon)
        return "\n".join([header, *(str(value) for value in instance.values)]) + "\n"
    if isinstance(instance, LinearOrderInstance):
        ranking = instance.ranking()
        rows = [f"{x} {y}" for x, y in zip(ranking, ranking[1:])]
        return "\n".join([_header("ORDER", horizon=instance.horizon), *rows]) + "\n"
    if isinstance(instance, (Approx2Sequence, Delta2Instance)):
        approx = instance.approx if isinstance(instance, Delta2Instance) else instance
        index = instance.index if isinstance(instance, Delta2Instance) else None
        header = _header("APPROX", count=approx.count, horizon=approx.horizon, index=index)
        rows = [
            f"{e} {s} {x}"
            for e, row in enumerate(approx.members)
            for s, members in enumerate(row)
            for x in sorted(members)
        ]
        return "\n".join([header, *rows]) + "\n"
    raise WorkbenchError(ErrorCode.TYPE_MISMATCH, f"no text format for {type(instance).__name__}")


def _loads_tree(body: list[tuple[int, str]]) -> FiniteTreeSnapshot:
    nodes = []
    for number, line in body:
        try:
            nodes.append(parse_str(line))
        except WorkbenchError as e:
            raise FormatError(str(e), number) from e
    return FiniteTreeSnapshot(frozenset(nodes))


def _loads_cetree(fields: Mapping[str, str], body: list[tuple[int, str]]) -> StagedTree:
    first: dict[Any, int] = {}
    for number, line in body:
        stage, _, rest = line.strip().partition(" ")
        try:
            first[parse_str(rest)] = int(stage)
        except (ValueError, WorkbenchError) as e:
            raise FormatError(f"expected `<stage> <string>`, got {line!r}", number) from e
    bound = _int_field(fields, "bound") if "bound" in fields else None
    return StagedTree(_int_field(fields, "horizon"), first, bound)


def _loads_coloring(fields: Mapping[str, str], body: list[tuple[int, str]]) -> PairColoring:
    horizon = _int_field(fields, "horizon")
    table = np.full((horizon, horizon), -1, dtype=np.int64)
    for (number, _), (x, y, color) in zip(body, _int_rows(body, 3)):
        if not 0 <= x < y < horizon:
            raise FormatError(f"pair ({x}, {y}) outside the horizon", number)
        table[x, y] = color
    return PairColoring(_int_field(fields, "k"), horizon, table)


def _loads_order(fields: Mapping[str, str], body: list[tuple[int, str]]) -> LinearOrderInstance:
    horizon = _int_field(fields, "horizon")
    graph = nx.DiGraph()
    graph.add_nodes_from(range(horizon))
    for (number, _), (x, y) in zip(body, _int_rows(body, 2)):
        if not (0 <= x < horizon and 0 <= y < horizon):
            raise FormatError(f"pair ({x}, {y}) outside the horizon", number)
        graph.add_edge(x, y)
    closure = nx.transitive_closure(graph, reflexive=False)
    lt = np.zeros((horizon, horizon), dtype=bool)
    for x, y in closure.edges:
        lt[x, y] = True
    return LinearOrderInstance(horizon, lt)


def _loads_approx(fields: Mapping[str, str], body: list[tuple[int, str]]) -> Approx2Sequence | Delta2Instance:
    count, horizon = _int_field(fields, "count"), _int_field(fields, "horizon")
    members: list[list[set[int]]] = [[set() for _ in range(horizon)] for _ in range(count)]
    for (number, _), (e, s, x) in zip(body, _int_rows(body, 3)):
        if not (0 <= e < count and 0 <= s < horizon):
            raise FormatError(f"no stage {s} of set {e}", number)
        members[e][s].add(x)
    approx = Approx2Sequence(count, horizon, tuple(tuple(frozenset(m) for m in row) for row in members))
    if "index" in fields:
        return Delta2Instance(approx, _int_field(fields, "index"))
    return approx


def loads_instance(text: str, certificate: Mapping[str, Any] | None = None) -> Instance:
    """
    Parse instance text.

    Args:
        text: The file contents.
        certificate: Sidecar contents; turns a tree into a certified branching set, and attaches a limit
            certificate to a coloring.

    Raises:
        FormatError: On malformed text.
    """
    header, body = _body(text)
    kind, fields = _parse_header(header)
    if kind == "TREE":
        tree = _loads_tree(body)
        if certificate is None:
            return tree
        return BranchingSet.from_certificate(Certificate.from_dict(certificate), tree.depth)
    if kind == "CETREE":
        return _loads_cetree(fields, body)
    if kind == "COLORING":
        coloring = _loads_coloring(fields, body)
        if certificate is None:
            return coloring
        attached = ColoringCertificate(str(certificate["family"]), dict(certificate.get("params", {})))
        return PairColoring(coloring.num_colors, coloring.horizon, coloring.table, attached)
    if kind == "UCOLOR":
        values = tuple(row[0] for row in _int_rows(body, 1))
        if len(values) != _int_field(fields, "horizon"):
            raise FormatError(f"expected {fields['horizon']} colors, got {len(values)}")
        return UnaryColoring(_int_field(fields, "k"), values)
    if kind == "ORDER":
        return _loads_order(fields, body)
    if kind == "APPROX":
        return _loads_approx(fields, body)
    raise FormatError(f"unknown instance format {kind!r}", 1)


def _certificate_of(instance: Instance) -> dict[str, Any] | None:
    if isinstance(instance, BranchingSet) and instance.certified:
        return instance.certificate.to_dict()
    if isinstance(instance, PairColoring) and instance.certificate is not None:
        return instance.certificate.to_dict()
    return None


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + SIDECAR_SUFFIX)


def write_instance(path: str | Path, instance: Instance) -> Path:
    """
    Write an instance file, and its certificate sidecar when the instance carries one.

    Returns:
        The instance path.
    """
    path = Path(path)
    path.write_text(dumps_instance(instance), encoding="utf-8")
    certificate = _certificate_of(instance)
    if certificate is not None:
        sidecar_path(path).write_text(json.dumps(certificate, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def read_instance(path: str | Path) -> Instance:
    """
    Read an instance file, together with its certificate sidecar if present.

    Raises:
        FormatError: On malformed files or sidecars.
        FileNotFoundError: If the file does not exist.
    """
    path = Path(path)
    certificate = None
    sidecar = sidecar_path(path)
    if sidecar.exists():
        try:
            certificate = json.loads(sidecar.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise FormatError(f"bad certificate sidecar {sidecar}: {e.msg}", e.lineno) from e
    return loads_instance(path.read_text(encoding="utf-8"), certificate)


def dumps_solution(solution: Solution) -> str:
    color = getattr(solution, "color", None)
    header = _header("SOLUTION", kind=solution.kind, color=color)
    if isinstance(solution, STRING_SOLUTIONS):
        rows = [format_str(sigma) for sigma in solution.nodes]
    else:
        rows = [str(x) for x in solution.points]
    return "\n".join([header, *rows]) + "\n"


def loads_solution(text: str) -> Solution:
    """
    Parse solution text.

    Raises:
        FormatError: On malformed text or unknown variants.
    """
    header, body = _body(text)
    kind, fields = _parse_header(header)
    if kind != "SOLUTION":
        raise FormatError(f"expected a SOLUTION header, got {kind!r}", 1)
    variant = SOLUTION_KINDS.get(fields.get("kind", ""))
    if variant is None:
        raise FormatError(f"unknown solution kind {fields.get('kind')!r}", 1)
    if variant in STRING_SOLUTIONS:
        return variant.of(parse_str(line) for _, line in body)  # type: ignore[attr-defined, no-any-return]
    points = tuple(row[0] for row in _int_rows(body, 1))
    if "color" in fields:
        return variant(_int_field(fields, "color"), points)  # type: ignore[no-any-return]
    return variant(points)  # type: ignore[no-any-return]


def write_solution(path: str | Path, solution: Solution) -> Path:
    path = Path(path)
    path.write_text(dumps_solution(solution), encoding="utf-8")
    return path


def read_solution(path: str | Path) -> Solution:
    return loads_solution(Path(path).read_text(encoding="utf-8"))


def solution_to_dict(solution: Solution) -> dict[str, Any]:
    data: dict[str, Any] = {"kind": solution.kind}
    if hasattr(solution, "color"):
        data["color"] = solution.color
    if isinstance(solution, STRING_SOLUTIONS):
        data["nodes"] = [format_str(sigma) for sigma in solution.nodes]
    else:
        data["points"] = list(solution.points)
    return data


def instance_digest(instance: Instance) -> str:
    """
    The sha256 hex digest of the canonical serialization, certificate included.
    """
    digest = hashlib.sha256(dumps_instance(instance).encode("utf-8"))
    certificate = _certificate_of(instance)
    if certificate is not None:
        digest.update(json.dumps(certificate, sort_keys=True).encode("utf-8"))
    return digest.hexdigest()


def instance_horizon(instance: Instance) -> int:
    """
    The declared horizon of an instance; trees and branching sets report their depth.
    """
    if isinstance(instance, (FiniteTreeSnapshot, BranchingSet)):
        return instance.depth
    return int(instance.horizon)


def instance_extension(instance: Instance) -> str:
    """
    The file extension of an instance, after its format: `tree`, `cetree`, `coloring`, `ucolor`, `order`, `approx`.
    """
    for types, extension in _EXTENSIONS:
        if isinstance(instance, types):
            return extension
    raise WorkbenchError(ErrorCode.TYPE_MISMATCH, f"no text format for {type(instance).__name__}")


_EXTENSIONS: tuple[tuple[type | tuple[type, ...], str], ...] = (
    ((FiniteTreeSnapshot, BranchingSet), "tree"),
    (StagedTree, "cetree"),
    (PairColoring, "coloring"),
    (UnaryColoring, "ucolor"),
    (LinearOrderInstance, "order"),
    ((Approx2Sequence, Delta2Instance), "approx"),
)
