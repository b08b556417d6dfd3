"""Project-overview statistics.

Density and degrees are computed on the directed simple graph; clustering
and assortativity on the undirected simplification (parallel and opposite
edges collapsed, self-loops dropped).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import SemanticCodeGraph


@dataclass
class SummaryStats:
    node_count: int = 0
    edge_count: int = 0
    total_loc: int = 0
    node_kind_distribution: dict[str, int] = field(default_factory=dict)
    edge_kind_distribution: dict[str, int] = field(default_factory=dict)
    density: float = 0.0
    avg_in_degree: float = 0.0
    avg_out_degree: float = 0.0
    global_clustering_coefficient: float = 0.0
    degree_assortativity: float | None = None  # None rendered as "n/a"

    def as_dict(self) -> dict:
        return {
            "nodeCount": self.node_count,
            "edgeCount": self.edge_count,
            "totalLoc": self.total_loc,
            "nodeKindDistribution": dict(sorted(self.node_kind_distribution.items())),
            "edgeKindDistribution": dict(sorted(self.edge_kind_distribution.items())),
            "density": self.density,
            "avgInDegree": self.avg_in_degree,
            "avgOutDegree": self.avg_out_degree,
            "globalClusteringCoefficient": self.global_clustering_coefficient,
            "degreeAssortativity": self.degree_assortativity,
        }


def transitivity(adj: dict[str, set[str]]) -> float:
    """Global clustering coefficient: 3 * triangles / connected triples.

    Closed triangle corners already count each triangle three times, so the
    ratio is corner count over triple count.
    """
    triples = sum(len(s) * (len(s) - 1) // 2 for s in adj.values())
    if triples == 0:
        return 0.0
    return _count_corner_triangles(adj) / triples


def degree_assortativity(edges: set[tuple[str, str]], adj: dict[str, set[str]]) -> float | None:
    """Pearson correlation of endpoint total-degrees over undirected edges.

    Each edge contributes both (deg(u), deg(v)) and (deg(v), deg(u)).
    Returns None when the degree variance over edge endpoints is zero.
    """
    xs: list[int] = []
    ys: list[int] = []
    for a, b in edges:
        da, db = len(adj[a]), len(adj[b])
        xs.extend((da, db))
        ys.extend((db, da))
    if not xs:
        return None
    n = len(xs)
    mx = sum(xs) / n
    vx = sum((x - mx) ** 2 for x in xs) / n
    if vx == 0:
        return None
    cov = sum((x - mx) * (y - mx) for x, y in zip(xs, ys)) / n
    return cov / vx


def summarize(graph: SemanticCodeGraph) -> SummaryStats:
    stats = SummaryStats()
    stats.node_count = graph.node_count
    stats.edge_count = graph.edge_count
    stats.total_loc = sum(n.loc for n in graph.file_nodes())

    for n in graph.nodes.values():
        k = str(n.kind)
        stats.node_kind_distribution[k] = stats.node_kind_distribution.get(k, 0) + 1
    for e in graph.edges:
        k = str(e.type)
        stats.edge_kind_distribution[k] = stats.edge_kind_distribution.get(k, 0) + 1

    n = graph.node_count
    if n > 0:
        stats.avg_in_degree = stats.avg_out_degree = graph.edge_count / n
    simple = graph.directed_simple_edges()
    if n >= 2:
        stats.density = len(simple) / (n * (n - 1))

    adj = graph.undirected_adjacency()
    und = graph.undirected_simple_edges()
    stats.global_clustering_coefficient = transitivity(adj)
    stats.degree_assortativity = degree_assortativity(und, adj)

    if not math.isfinite(stats.density):
        raise AssertionError("density must be finite")
    return stats


def _count_corner_triangles(adj: dict[str, set[str]]) -> int:
    """Number of (corner, {u, w}) incidences: 3 per triangle."""
    count = 0
    for v, neigh in adj.items():
        for u in neigh:
            for w in neigh:
                if u < w and w in adj[u]:
                    count += 1
    return count
