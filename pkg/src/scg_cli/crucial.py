"""Importance ranking of code entities.

Nine metrics: LOC, out-degree, in-degree, PageRank, eigenvector centrality,
Katz centrality, betweenness centrality, harmonic centrality, and a combined
importance score counting top-n appearances across the eight base metrics.

Conventions (documented, CLI-overridable where noted):
  - all walks/degrees use the directed simple graph (parallel typed edges
    collapsed, self-loops dropped);
  - eigenvector and Katz aggregate over incoming edges;
  - harmonic centrality follows outgoing shortest paths;
  - betweenness is unnormalized;
  - FILE nodes are excluded from rankings (they are containers, not code
    entities) but still participate as graph structure.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .model import SemanticCodeGraph


class Metric(str, Enum):
    LOC = "LOC"
    OUT_DEGREE = "OUT_DEGREE"
    IN_DEGREE = "IN_DEGREE"
    PAGERANK = "PAGERANK"
    EIGENVECTOR = "EIGENVECTOR"
    KATZ = "KATZ"
    BETWEENNESS = "BETWEENNESS"
    HARMONIC = "HARMONIC"
    COMBINED = "COMBINED"


BASE_METRICS = [m for m in Metric if m is not Metric.COMBINED]


@dataclass
class CentralityResult:
    scores: dict[str, float]
    converged: bool = True
    alpha: float | None = None  # Katz only; set when divergence forced a halving


@dataclass
class MetricRanking:
    metric: Metric
    entries: list[tuple[str, float]]  # sorted by score desc, ties by id asc


@dataclass
class CrucialReport:
    rankings: dict[Metric, MetricRanking]
    n: int
    warnings: list[str] = field(default_factory=list)


# -- adjacency helpers -----------------------------------------------------

def _directed_adjacency(graph: SemanticCodeGraph) -> tuple[list[str], dict[str, list[str]], dict[str, list[str]]]:
    ids = graph.node_ids()
    succ: dict[str, list[str]] = {v: [] for v in ids}
    pred: dict[str, list[str]] = {v: [] for v in ids}
    for a, b in sorted(graph.directed_simple_edges()):
        succ[a].append(b)
        pred[b].append(a)
    return ids, succ, pred


# -- centralities ----------------------------------------------------------

def page_rank(
    graph: SemanticCodeGraph,
    damping: float = 0.85,
    tol: float = 1e-8,
    max_iter: int = 100,
) -> CentralityResult:
    """Power iteration with uniform teleport; dangling mass spread uniformly."""
    ids, succ, _ = _directed_adjacency(graph)
    n = len(ids)
    if n == 0:
        raise ValueError("page_rank requires a nonempty graph")
    x = {v: 1.0 / n for v in ids}
    for _ in range(max_iter):
        dangling = sum(x[v] for v in ids if not succ[v])
        base = (1.0 - damping) / n + damping * dangling / n
        nxt = {v: base for v in ids}
        for v in ids:
            out = succ[v]
            if out:
                share = damping * x[v] / len(out)
                for w in out:
                    nxt[w] += share
        delta = sum(abs(nxt[v] - x[v]) for v in ids)
        x = nxt
        if delta < tol:
            return CentralityResult(x, converged=True)
    return CentralityResult(x, converged=False)


def eigenvector_centrality(
    graph: SemanticCodeGraph,
    tol: float = 1e-8,
    max_iter: int = 1000,
) -> CentralityResult:
    """Power iteration over incoming edges, L2-normalized each step.

    A zero update on the first step means there are no edges: the uniform
    vector is returned.  A later zero update (nilpotent adjacency) keeps the
    last nonzero iterate, which is the invariant direction reached.
    """
    ids, _, pred = _directed_adjacency(graph)
    n = len(ids)
    if n == 0:
        raise ValueError("eigenvector_centrality requires a nonempty graph")
    uniform = 1.0 / math.sqrt(n)
    x = {v: uniform for v in ids}
    for it in range(max_iter):
        nxt = {v: sum(x[u] for u in pred[v]) for v in ids}
        norm = math.sqrt(sum(val * val for val in nxt.values()))
        if norm == 0.0:
            return CentralityResult(dict(x), converged=True)
        nxt = {v: val / norm for v, val in nxt.items()}
        delta = math.sqrt(sum((nxt[v] - x[v]) ** 2 for v in ids))
        x = nxt
        if delta < tol:
            return CentralityResult(x, converged=True)
    return CentralityResult(x, converged=False)


def katz_centrality(
    graph: SemanticCodeGraph,
    alpha: float = 0.1,
    beta: float = 1.0,
    tol: float = 1e-8,
    max_iter: int = 1000,
) -> CentralityResult:
    """Iterates x = alpha*A^T x + beta over incoming edges, L2-normalizes.

    If the iteration diverges (alpha >= 1/lambda_max), alpha is halved and
    the iteration restarts; the alpha actually used is recorded.
    """
    ids, _, pred = _directed_adjacency(graph)
    n = len(ids)
    if n == 0:
        raise ValueError("katz_centrality requires a nonempty graph")
    a = alpha
    halvings = 0
    while True:
        x = {v: beta for v in ids}
        converged = False
        diverged = False
        for _ in range(max_iter):
            nxt = {v: a * sum(x[u] for u in pred[v]) + beta for v in ids}
            if any(abs(val) > 1e12 for val in nxt.values()):
                diverged = True
                break
            delta = max(abs(nxt[v] - x[v]) for v in ids)
            x = nxt
            if delta < tol:
                converged = True
                break
        # alpha at or above 1/lambda_max never converges (it may grow only
        # polynomially, so the magnitude guard alone is not enough)
        if (diverged or not converged) and halvings < 60:
            a /= 2.0
            halvings += 1
            continue
        norm = math.sqrt(sum(val * val for val in x.values()))
        scores = {v: val / norm for v, val in x.items()}
        return CentralityResult(scores, converged=converged, alpha=a)


def betweenness_centrality(graph: SemanticCodeGraph) -> CentralityResult:
    """Brandes' algorithm: directed, unit weights, unnormalized."""
    ids, succ, _ = _directed_adjacency(graph)
    bc = {v: 0.0 for v in ids}
    for s in ids:
        stack: list[str] = []
        preds: dict[str, list[str]] = {v: [] for v in ids}
        sigma = {v: 0.0 for v in ids}
        sigma[s] = 1.0
        dist = {v: -1 for v in ids}
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in succ[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = {v: 0.0 for v in ids}
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return CentralityResult(bc)


def harmonic_centrality(graph: SemanticCodeGraph) -> CentralityResult:
    """Mean of inverse outgoing shortest-path distances to all other nodes."""
    ids, succ, _ = _directed_adjacency(graph)
    n = len(ids)
    scores: dict[str, float] = {}
    for s in ids:
        dist = {s: 0}
        queue = deque([s])
        total = 0.0
        while queue:
            v = queue.popleft()
            for w in succ[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    total += 1.0 / dist[w]
                    queue.append(w)
        scores[s] = total / (n - 1) if n > 1 else 0.0
    return CentralityResult(scores)


# -- rankings --------------------------------------------------------------

def _rank(metric: Metric, scores: dict[str, float], n: int) -> MetricRanking:
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return MetricRanking(metric, ordered[:n])


def degree_and_loc(graph: SemanticCodeGraph, n: int) -> dict[Metric, MetricRanking]:
    """LOC, IN_DEGREE and OUT_DEGREE rankings over non-FILE nodes."""
    indeg: dict[str, float] = {v: 0.0 for v in graph.nodes}
    outdeg: dict[str, float] = {v: 0.0 for v in graph.nodes}
    for a, b in graph.directed_simple_edges():
        outdeg[a] += 1
        indeg[b] += 1
    entities = [v for v in graph.nodes if not graph.nodes[v].is_file]
    loc = {v: float(graph.nodes[v].loc) for v in entities}
    return {
        Metric.LOC: _rank(Metric.LOC, loc, n),
        Metric.IN_DEGREE: _rank(Metric.IN_DEGREE, {v: indeg[v] for v in entities}, n),
        Metric.OUT_DEGREE: _rank(Metric.OUT_DEGREE, {v: outdeg[v] for v in entities}, n),
    }


def combined_importance(base: dict[Metric, MetricRanking], n: int) -> MetricRanking:
    """Count in how many base top-n lists each entity appears."""
    counts: dict[str, float] = {}
    for metric in BASE_METRICS:
        ranking = base[metric]
        for node_id, _ in ranking.entries[:n]:
            counts[node_id] = counts.get(node_id, 0.0) + 1.0
    return _rank(Metric.COMBINED, counts, n)


def crucial(
    graph: SemanticCodeGraph,
    n: int = 10,
    damping: float = 0.85,
    alpha: float = 0.1,
) -> CrucialReport:
    """Run all nine metrics and assemble the top-n report."""
    if graph.node_count == 0:
        return CrucialReport({m: MetricRanking(m, []) for m in Metric}, n)
    warnings: list[str] = []
    rankings = degree_and_loc(graph, n)
    entity = lambda scores: {
        v: s for v, s in scores.items() if not graph.nodes[v].is_file
    }

    pr = page_rank(graph, damping=damping)
    if not pr.converged:
        warnings.append("PageRank did not converge within the iteration budget")
    rankings[Metric.PAGERANK] = _rank(Metric.PAGERANK, entity(pr.scores), n)

    ev = eigenvector_centrality(graph)
    if not ev.converged:
        warnings.append("eigenvector centrality did not converge")
    rankings[Metric.EIGENVECTOR] = _rank(Metric.EIGENVECTOR, entity(ev.scores), n)

    kz = katz_centrality(graph, alpha=alpha)
    if kz.alpha != alpha:
        warnings.append(f"Katz alpha reduced to {kz.alpha} to ensure convergence")
    rankings[Metric.KATZ] = _rank(Metric.KATZ, entity(kz.scores), n)

    rankings[Metric.BETWEENNESS] = _rank(
        Metric.BETWEENNESS, entity(betweenness_centrality(graph).scores), n
    )
    rankings[Metric.HARMONIC] = _rank(
        Metric.HARMONIC, entity(harmonic_centrality(graph).scores), n
    )
    rankings[Metric.COMBINED] = combined_importance(rankings, n)
    return CrucialReport(rankings, n, warnings)
