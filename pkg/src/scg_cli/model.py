"""Semantic code graph data model.

Nodes are code entities (files, classes, methods, fields, ...), edges are
typed dependencies between them (declaration, call, reference, ...).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class NodeKind(str, Enum):
    FILE = "FILE"
    CLASS = "CLASS"
    INTERFACE = "INTERFACE"
    ENUM = "ENUM"
    METHOD = "METHOD"
    CONSTRUCTOR = "CONSTRUCTOR"
    FIELD = "FIELD"
    PARAMETER = "PARAMETER"
    LOCAL_VARIABLE = "LOCAL_VARIABLE"
    TYPE_PARAMETER = "TYPE_PARAMETER"


class EdgeKind(str, Enum):
    DECLARATION = "DECLARATION"
    CALL = "CALL"
    REFERENCE = "REFERENCE"
    EXTEND = "EXTEND"
    OVERRIDE = "OVERRIDE"
    TYPE = "TYPE"


@dataclass(frozen=True)
class Location:
    """Source range; 0-based lines and columns, end-exclusive columns."""

    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if self.start_line > self.end_line:
            raise ValueError(f"start_line {self.start_line} > end_line {self.end_line}")
        if self.start_line == self.end_line and self.start_col > self.end_col:
            raise ValueError(f"start_col {self.start_col} > end_col {self.end_col}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.start_line, self.start_col, self.end_line, self.end_col)


@dataclass(frozen=True)
class SemanticNode:
    """One code entity.

    ``kind`` is normally a :class:`NodeKind` value but unknown kinds read
    from disk are preserved verbatim as plain strings.
    """

    id: str
    kind: str
    display_name: str = ""
    package_name: str = ""
    file_uri: str = ""
    location: Location | None = None
    loc: int = 0
    properties: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if isinstance(self.kind, Enum):
            object.__setattr__(self, "kind", self.kind.value)
        if self.loc < 0:
            raise ValueError(f"negative loc for {self.id!r}")
        if self.location is not None:
            expected = self.location.end_line - self.location.start_line + 1
            if self.loc != expected:
                raise ValueError(
                    f"loc {self.loc} != line span {expected} for {self.id!r}"
                )

    @property
    def is_file(self) -> bool:
        return self.kind == NodeKind.FILE

    @property
    def is_stub(self) -> bool:
        """External symbols carry no location and zero loc."""
        return self.location is None and self.loc == 0 and not self.is_file

    def properties_dict(self) -> dict[str, str]:
        return dict(self.properties)


@dataclass(frozen=True)
class SemanticEdge:
    """One typed dependency between two entities."""

    from_id: str
    to_id: str
    type: str
    location: Location | None = None

    def __post_init__(self) -> None:
        if isinstance(self.type, Enum):
            object.__setattr__(self, "type", self.type.value)

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.from_id, self.to_id, self.type)


def stub_node(node_id: str, kind: str = NodeKind.CLASS) -> SemanticNode:
    """Materialize a location-less stand-in for an external symbol."""
    display = node_id.rstrip(".").split(".")[-1]
    return SemanticNode(id=node_id, kind=kind, display_name=display)


class GraphInvariantError(ValueError):
    pass


class SemanticCodeGraph:
    """Whole-project graph: id-keyed nodes plus a typed edge list.

    Immutable after construction; safe to share for concurrent reads.
    """

    def __init__(
        self,
        nodes: dict[str, SemanticNode] | list[SemanticNode],
        edges: list[SemanticEdge],
        project_name: str = "",
        materialize_stubs: bool = True,
    ) -> None:
        if isinstance(nodes, dict):
            node_map = dict(nodes)
        else:
            node_map = {}
            for n in nodes:
                if n.id in node_map:
                    raise GraphInvariantError(f"duplicate node id {n.id!r}")
                node_map[n.id] = n

        seen: set[tuple[str, str, str]] = set()
        edge_list: list[SemanticEdge] = []
        for e in edges:
            if e.key in seen:
                raise GraphInvariantError(f"duplicate edge {e.key}")
            seen.add(e.key)
            if e.type == EdgeKind.DECLARATION and e.from_id == e.to_id:
                raise GraphInvariantError(f"self-declaration on {e.from_id!r}")
            edge_list.append(e)

        if materialize_stubs:
            for e in edge_list:
                for endpoint in (e.from_id, e.to_id):
                    if endpoint not in node_map:
                        node_map[endpoint] = stub_node(endpoint)

        self.nodes: dict[str, SemanticNode] = node_map
        self.edges: list[SemanticEdge] = edge_list
        self.project_name = project_name

        self._out: dict[str, list[SemanticEdge]] = {nid: [] for nid in node_map}
        self._in: dict[str, list[SemanticEdge]] = {nid: [] for nid in node_map}
        for e in edge_list:
            self._out[e.from_id].append(e)
            self._in[e.to_id].append(e)

    # -- lookups -----------------------------------------------------------

    def out_edges(self, node_id: str) -> list[SemanticEdge]:
        return self._out[node_id]

    def in_edges(self, node_id: str) -> list[SemanticEdge]:
        return self._in[node_id]

    def node_ids(self) -> list[str]:
        return sorted(self.nodes)

    def non_file_nodes(self) -> list[SemanticNode]:
        return [n for n in self.nodes.values() if not n.is_file]

    def file_nodes(self) -> list[SemanticNode]:
        return [n for n in self.nodes.values() if n.is_file]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    # -- derived simple graphs --------------------------------------------

    def directed_simple_edges(self) -> set[tuple[str, str]]:
        """Parallel edges collapsed, self-loops dropped."""
        return {(e.from_id, e.to_id) for e in self.edges if e.from_id != e.to_id}

    def undirected_simple_edges(self) -> set[tuple[str, str]]:
        """Opposite and parallel edges collapsed, self-loops dropped."""
        out: set[tuple[str, str]] = set()
        for e in self.edges:
            if e.from_id == e.to_id:
                continue
            a, b = sorted((e.from_id, e.to_id))
            out.add((a, b))
        return out

    def undirected_adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {nid: set() for nid in self.nodes}
        for a, b in self.undirected_simple_edges():
            adj[a].add(b)
            adj[b].add(a)
        return adj

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        """Check whole-graph invariants; raises GraphInvariantError."""
        for n in self.nodes.values():
            if n.is_file and n.id != n.file_uri:
                raise GraphInvariantError(f"FILE node id {n.id!r} != fileUri {n.file_uri!r}")
            if not n.is_file and n.id == n.file_uri and n.file_uri:
                raise GraphInvariantError(f"non-FILE node {n.id!r} equals its fileUri")
            if n.location is None and n.loc != 0:
                raise GraphInvariantError(f"location-less node {n.id!r} has loc {n.loc}")
        for e in self.edges:
            for endpoint in (e.from_id, e.to_id):
                if endpoint not in self.nodes:
                    raise GraphInvariantError(f"dangling endpoint {endpoint!r}")
        decl_parents: dict[str, str] = {}
        for e in self.edges:
            if e.type != EdgeKind.DECLARATION:
                continue
            if e.to_id in decl_parents:
                raise GraphInvariantError(
                    f"{e.to_id!r} declared by both {decl_parents[e.to_id]!r} and {e.from_id!r}"
                )
            decl_parents[e.to_id] = e.from_id

    # -- equality (set semantics) -----------------------------------------

    def same_as(self, other: "SemanticCodeGraph") -> bool:
        return (
            self.nodes == other.nodes
            and {e.key: e for e in self.edges} == {e.key: e for e in other.edges}
        )

    def __repr__(self) -> str:
        return (
            f"SemanticCodeGraph({self.project_name!r}, "
            f"{self.node_count} nodes, {self.edge_count} edges)"
        )
