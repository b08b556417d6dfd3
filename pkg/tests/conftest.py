"""Shared graph-building helpers for the test suite."""
from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from scg_cli.model import (
    EdgeKind,
    Location,
    NodeKind,
    SemanticCodeGraph,
    SemanticEdge,
    SemanticNode,
)


def node_id(i: int) -> str:
    return f"v{i:03d}"


def graph_from_edges(
    n: int,
    edges: set[tuple[int, int]],
    edge_type: str = EdgeKind.CALL,
    project_name: str = "fixture",
) -> SemanticCodeGraph:
    """Integer-indexed digraph as a semantic code graph of CLASS stubs.

    ``node_id`` maps index i to id ``v00i``, which sorts in index order, so
    results indexed by id align positionally with array-based oracles.
    """
    nodes = [SemanticNode(id=node_id(i), kind=NodeKind.CLASS) for i in range(n)]
    edge_list = [SemanticEdge(node_id(u), node_id(v), edge_type) for u, v in sorted(edges)]
    return SemanticCodeGraph(nodes, edge_list, project_name=project_name)


def random_digraph(rng: random.Random, n: int | None = None) -> tuple[int, set[tuple[int, int]]]:
    """Strongly connected, aperiodic random digraph (cycle plus chords).

    The Hamiltonian cycle plus a chord closing an (n-1)-cycle guarantees
    strong connectivity and aperiodicity (gcd(n, n-1) = 1), so the spectral
    centralities have a unique principal eigenvector.
    """
    if n is None:
        n = rng.randint(5, 60)
    edges = {(i, (i + 1) % n) for i in range(n)}
    edges.add((0, 2 % n))
    extra = rng.randint(n // 2, 2 * n)
    for _ in range(extra):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.add((u, v))
    return n, edges


def random_sparse_digraph(rng: random.Random, n: int | None = None) -> tuple[int, set[tuple[int, int]]]:
    """Arbitrary digraph: may be disconnected, have sinks and sources."""
    if n is None:
        n = rng.randint(2, 40)
    edges = set()
    m = rng.randint(0, 3 * n)
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.add((u, v))
    return n, edges


def located_node(
    nid: str,
    kind: str,
    file_uri: str,
    package: str = "",
    start_line: int = 0,
    span: int = 1,
    display: str = "",
) -> SemanticNode:
    end_line = start_line + span - 1
    return SemanticNode(
        id=nid,
        kind=kind,
        display_name=display or nid.rstrip(".").split(".")[-1],
        package_name=package,
        file_uri=file_uri,
        location=Location(start_line, 0, end_line, 10),
        loc=span,
    )


@pytest.fixture
def two_file_graph() -> SemanticCodeGraph:
    """Small located graph spanning two source files and one external stub."""
    nodes = [
        located_node("a/One.java", NodeKind.FILE, "a/One.java", "pa", 0, 12),
        located_node("pa.One", NodeKind.CLASS, "a/One.java", "pa", 2, 9),
        located_node("pa.One.run().", NodeKind.METHOD, "a/One.java", "pa", 4, 3),
        located_node("a/Two.java", NodeKind.FILE, "a/Two.java", "pa", 0, 8),
        located_node("pa.Two", NodeKind.CLASS, "a/Two.java", "pa", 2, 5),
        located_node("pa.Two.go().", NodeKind.METHOD, "a/Two.java", "pa", 3, 2),
        SemanticNode(id="java.util.List", kind=NodeKind.CLASS, display_name="List"),
    ]
    edges = [
        SemanticEdge("a/One.java", "pa.One", EdgeKind.DECLARATION),
        SemanticEdge("pa.One", "pa.One.run().", EdgeKind.DECLARATION),
        SemanticEdge("a/Two.java", "pa.Two", EdgeKind.DECLARATION),
        SemanticEdge("pa.Two", "pa.Two.go().", EdgeKind.DECLARATION),
        SemanticEdge("pa.Two.go().", "pa.One.run().", EdgeKind.CALL),
        SemanticEdge("pa.One.run().", "java.util.List", EdgeKind.TYPE),
        SemanticEdge("pa.Two.go().", "java.util.List", EdgeKind.TYPE),
    ]
    return SemanticCodeGraph(nodes, edges, project_name="twofile")
