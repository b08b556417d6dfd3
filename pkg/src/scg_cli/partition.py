"""Balanced k-way partitioning of the code graph plus quality scoring.

The partitioner is a multilevel heuristic on the undirected simplification
of the graph restricted to non-FILE nodes: heavy-edge-matching coarsening,
greedy graph growing for the initial partition, and optional boundary
move-based refinement while uncoarsening.  Two variants are shipped:

  - ``mlv-fm``     coarsen + grow + cut-objective FM-style refinement
  - ``mlv-greedy`` coarsen + grow only

Everything is deterministic under a fixed seed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .model import SemanticCodeGraph
from .summary import transitivity

ALGORITHMS = ("mlv-fm", "mlv-greedy")
DEFAULT_EPSILON = 0.30


@dataclass
class QualityScores:
    modularity_ratio: float  # inf when nothing crosses partitions
    avg_clustering_coefficient: float
    file_weighted_accuracy: float
    file_average_accuracy: float
    package_weighted_accuracy: float
    package_average_accuracy: float
    partition_variance: float
    distribution_percent: list[int]

    def as_dict(self) -> dict:
        return {
            "modularityRatio": self.modularity_ratio,
            "avgClusteringCoefficient": self.avg_clustering_coefficient,
            "fileWeightedAccuracy": self.file_weighted_accuracy,
            "fileAverageAccuracy": self.file_average_accuracy,
            "packageWeightedAccuracy": self.package_weighted_accuracy,
            "packageAverageAccuracy": self.package_average_accuracy,
            "partitionVariance": self.partition_variance,
            "distributionPercent": list(self.distribution_percent),
        }


@dataclass
class PartitionResult:
    algorithm: str
    k: int
    assignment: dict[str, int]
    quality: QualityScores
    cut: int = 0
    internal: int = 0


class PartitionError(ValueError):
    pass


# -- working graph ---------------------------------------------------------

def _working_graph(graph: SemanticCodeGraph) -> tuple[list[str], list[dict[int, int]]]:
    """Undirected simple graph over non-FILE nodes, integer-indexed."""
    ids = sorted(n.id for n in graph.non_file_nodes())
    index = {nid: i for i, nid in enumerate(ids)}
    adj: list[dict[int, int]] = [dict() for _ in ids]
    for a, b in graph.undirected_simple_edges():
        if a in index and b in index:
            ia, ib = index[a], index[b]
            adj[ia][ib] = adj[ia].get(ib, 0) + 1
            adj[ib][ia] = adj[ib].get(ia, 0) + 1
    return ids, adj


# -- multilevel machinery --------------------------------------------------

def _heavy_edge_matching(
    adj: list[dict[int, int]], weights: list[int], rng: random.Random
) -> tuple[list[int], int]:
    """Match each vertex with its heaviest unmatched neighbor."""
    n = len(adj)
    order = list(range(n))
    rng.shuffle(order)
    coarse_of = [-1] * n
    next_id = 0
    for v in order:
        if coarse_of[v] != -1:
            continue
        best = -1
        best_w = -1
        for u, w in adj[v].items():
            if coarse_of[u] == -1 and (w > best_w or (w == best_w and u < best)):
                best, best_w = u, w
        coarse_of[v] = next_id
        if best != -1:
            coarse_of[best] = next_id
        next_id += 1
    return coarse_of, next_id


def _contract(
    adj: list[dict[int, int]], weights: list[int], coarse_of: list[int], n_coarse: int
) -> tuple[list[dict[int, int]], list[int]]:
    cadj: list[dict[int, int]] = [dict() for _ in range(n_coarse)]
    cweights = [0] * n_coarse
    for v, cv in enumerate(coarse_of):
        cweights[cv] += weights[v]
        for u, w in adj[v].items():
            cu = coarse_of[u]
            if cu != cv:
                cadj[cv][cu] = cadj[cv].get(cu, 0) + w
    return cadj, cweights


def _grow_initial(
    adj: list[dict[int, int]], weights: list[int], k: int, rng: random.Random
) -> list[int]:
    """Greedy graph growing from k seeds, aiming at equal weight."""
    n = len(adj)
    total = sum(weights)
    target = total / k
    part = [-1] * n
    unassigned = set(range(n))
    for p in range(k):
        if not unassigned:
            break
        remaining_parts = k - p
        if remaining_parts == 1:
            for v in unassigned:
                part[v] = p
            unassigned.clear()
            break
        fewest = min(sum(1 for u in adj[v] if part[u] == -1) for v in unassigned)
        candidates = sorted(
            v for v in unassigned if sum(1 for u in adj[v] if part[u] == -1) == fewest
        )
        seed = rng.choice(candidates)
        part[seed] = p
        unassigned.discard(seed)
        size = weights[seed]
        conn: dict[int, int] = {}
        for u, w in adj[seed].items():
            if part[u] == -1:
                conn[u] = conn.get(u, 0) + w
        while size < target and unassigned:
            if conn:
                v = max(conn, key=lambda u: (conn[u], -u))
            else:
                v = min(unassigned)
            part[v] = p
            unassigned.discard(v)
            conn.pop(v, None)
            size += weights[v]
            for u, w in adj[v].items():
                if part[u] == -1:
                    conn[u] = conn.get(u, 0) + w
    return part


def _cut_of(adj: list[dict[int, int]], part: list[int]) -> int:
    cut = 0
    for v in range(len(adj)):
        for u, w in adj[v].items():
            if u > v and part[u] != part[v]:
                cut += w
    return cut


def _refine(
    adj: list[dict[int, int]],
    weights: list[int],
    part: list[int],
    k: int,
    epsilon: float,
    max_passes: int = 8,
) -> None:
    """Greedy boundary moves improving the cut under the balance bound."""
    n = len(adj)
    total = sum(weights)
    max_weight = (1.0 + epsilon) * total / k
    part_weight = [0.0] * k
    part_count = [0] * k
    for v in range(n):
        part_weight[part[v]] += weights[v]
        part_count[part[v]] += 1
    for _ in range(max_passes):
        improved = False
        for v in range(n):
            p = part[v]
            if part_count[p] <= 1:
                continue
            conn = [0] * k
            boundary = False
            for u, w in adj[v].items():
                conn[part[u]] += w
                if part[u] != p:
                    boundary = True
            if not boundary:
                continue
            best_q = -1
            best_gain = 0
            for q in range(k):
                if q == p:
                    continue
                if part_weight[q] + weights[v] > max_weight:
                    continue
                gain = conn[q] - conn[p]
                if gain > best_gain:
                    best_q, best_gain = q, gain
            if best_q >= 0 and best_gain > 0:
                part[v] = best_q
                part_weight[p] -= weights[v]
                part_weight[best_q] += weights[v]
                part_count[p] -= 1
                part_count[best_q] += 1
                improved = True
        if not improved and n <= 400:
            improved = _swap_pass(adj, weights, part, k, max_weight, part_weight)
        if not improved:
            break


def _swap_pass(
    adj: list[dict[int, int]],
    weights: list[int],
    part: list[int],
    k: int,
    max_weight: float,
    part_weight: list[float],
) -> bool:
    """One improving swap of two boundary vertices in different parts."""
    boundary = [v for v in range(len(adj)) if any(part[u] != part[v] for u in adj[v])]
    conns: dict[int, list[int]] = {}

    def conn(v: int) -> list[int]:
        if v not in conns:
            c = [0] * k
            for u, w in adj[v].items():
                c[part[u]] += w
            conns[v] = c
        return conns[v]

    for ai, v in enumerate(boundary):
        p = part[v]
        for u in boundary[ai + 1 :]:
            q = part[u]
            if q == p:
                continue
            if part_weight[p] - weights[v] + weights[u] > max_weight:
                continue
            if part_weight[q] - weights[u] + weights[v] > max_weight:
                continue
            gain = (
                conn(v)[q] + conn(u)[p] - conn(v)[p] - conn(u)[q] - 2 * adj[v].get(u, 0)
            )
            if gain > 0:
                part[v], part[u] = q, p
                part_weight[p] += weights[u] - weights[v]
                part_weight[q] += weights[v] - weights[u]
                return True
    return False


def _fill_empty_parts(
    adj: list[dict[int, int]], weights: list[int], part: list[int], k: int
) -> None:
    counts = [0] * k
    for p in part:
        counts[p] += 1
    for q in range(k):
        if counts[q] > 0:
            continue
        donor = max(range(k), key=lambda p: counts[p])
        # move the donor vertex with the fewest internal ties
        candidates = [v for v in range(len(part)) if part[v] == donor]
        v = min(
            candidates,
            key=lambda v: (sum(w for u, w in adj[v].items() if part[u] == donor), v),
        )
        part[v] = q
        counts[donor] -= 1
        counts[q] += 1


def _partition_indices(
    adj: list[dict[int, int]],
    k: int,
    algorithm: str,
    seed: int,
    epsilon: float,
) -> list[int]:
    n = len(adj)
    rng = random.Random(seed)
    weights = [1] * n

    # coarsening
    levels: list[tuple[list[dict[int, int]], list[int], list[int]]] = []
    cur_adj, cur_w = adj, weights
    limit = max(30 * k, 200)
    while len(cur_adj) > limit:
        coarse_of, n_coarse = _heavy_edge_matching(cur_adj, cur_w, rng)
        if n_coarse >= len(cur_adj) * 0.97:
            break
        levels.append((cur_adj, cur_w, coarse_of))
        cur_adj, cur_w = _contract(cur_adj, cur_w, coarse_of, n_coarse)

    # several initial growths at the coarsest level; keep the best cut
    part: list[int] | None = None
    best_cut = -1
    for _ in range(4):
        cand = _grow_initial(cur_adj, cur_w, k, rng)
        if algorithm == "mlv-fm":
            _refine(cur_adj, cur_w, cand, k, epsilon)
        cand_cut = _cut_of(cur_adj, cand)
        if part is None or cand_cut < best_cut:
            part, best_cut = cand, cand_cut
    assert part is not None

    # uncoarsen
    for fine_adj, fine_w, coarse_of in reversed(levels):
        part = [part[coarse_of[v]] for v in range(len(fine_adj))]
        if algorithm == "mlv-fm":
            _refine(fine_adj, fine_w, part, k, epsilon)

    _fill_empty_parts(adj, [1] * n, part, k)
    return part


def partition(
    graph: SemanticCodeGraph,
    k: int,
    algorithm: str = "mlv-fm",
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
) -> PartitionResult:
    """Balanced k-way cut-minimizing partition of the non-FILE nodes."""
    if algorithm not in ALGORITHMS:
        raise PartitionError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    if k < 2:
        raise PartitionError("k must be >= 2")
    ids, adj = _working_graph(graph)
    if k > len(ids):
        raise PartitionError(f"k={k} exceeds the {len(ids)} partitionable nodes")
    part = _partition_indices(adj, k, algorithm, seed, epsilon)
    assignment = {nid: part[i] for i, nid in enumerate(ids)}
    quality = score_partition(graph, assignment, k)
    internal, cut = _internal_and_cut(graph, assignment)
    return PartitionResult(algorithm, k, assignment, quality, cut=cut, internal=internal)


def partition_sweep(
    graph: SemanticCodeGraph,
    max_k: int,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
    algorithms: tuple[str, ...] = ALGORITHMS,
) -> list[PartitionResult]:
    """All (algorithm, k) results for k in [2, max_k]."""
    if max_k < 2:
        raise PartitionError("max_k must be >= 2")
    results = []
    for k in range(2, max_k + 1):
        for algorithm in algorithms:
            results.append(partition(graph, k, algorithm=algorithm, seed=seed, epsilon=epsilon))
    return results


# -- quality scoring -------------------------------------------------------

def _internal_and_cut(graph: SemanticCodeGraph, assignment: dict[str, int]) -> tuple[int, int]:
    internal = cut = 0
    for a, b in graph.undirected_simple_edges():
        if a in assignment and b in assignment:
            if assignment[a] == assignment[b]:
                internal += 1
            else:
                cut += 1
    return internal, cut


def _accuracy(units: dict[str, list[int]], k: int) -> tuple[float, float]:
    """(weighted, average) modal-partition accuracy over units, in percent."""
    if not units:
        return 100.0, 100.0
    accs: list[tuple[int, float]] = []
    for members in units.values():
        counts: dict[int, int] = {}
        for p in members:
            counts[p] = counts.get(p, 0) + 1
        modal = max(counts.values())
        accs.append((len(members), 100.0 * modal / len(members)))
    total = sum(size for size, _ in accs)
    weighted = sum(size * acc for size, acc in accs) / total
    average = sum(acc for _, acc in accs) / len(accs)
    return weighted, average


def distribution_percent(sizes: list[int]) -> list[int]:
    """Integer percentages by largest remainder; sums to exactly 100."""
    total = sum(sizes)
    if total == 0:
        return [0] * len(sizes)
    raw = [100.0 * s / total for s in sizes]
    floors = [math.floor(x) for x in raw]
    shortfall = 100 - sum(floors)
    order = sorted(range(len(sizes)), key=lambda i: (-(raw[i] - floors[i]), i))
    for i in order[:shortfall]:
        floors[i] += 1
    return floors


def partition_variance(sizes: list[int]) -> float:
    """Squared coefficient of variation of partition sizes."""
    k = len(sizes)
    mean = sum(sizes) / k
    if mean == 0:
        return 0.0
    var = sum((s - mean) ** 2 for s in sizes) / k
    return var / (mean * mean)


def score_partition(
    graph: SemanticCodeGraph, assignment: dict[str, int], k: int
) -> QualityScores:
    internal, cut = _internal_and_cut(graph, assignment)
    modularity = internal / cut if cut else math.inf

    # clustering per partition-induced subgraph, averaged over all k parts
    members: dict[int, set[str]] = {p: set() for p in range(k)}
    for nid, p in assignment.items():
        members[p].add(nid)
    und = graph.undirected_simple_edges()
    coeff_sum = 0.0
    for p in range(k):
        sub = members[p]
        adj: dict[str, set[str]] = {v: set() for v in sub}
        for a, b in und:
            if a in sub and b in sub:
                adj[a].add(b)
                adj[b].add(a)
        coeff_sum += transitivity(adj)
    avg_clustering = coeff_sum / k if k else 0.0

    # accuracy units over located, non-FILE nodes
    file_units: dict[str, list[int]] = {}
    package_units: dict[str, list[int]] = {}
    for nid, p in assignment.items():
        node = graph.nodes.get(nid)
        if node is None or node.is_stub:
            continue
        file_units.setdefault(node.file_uri, []).append(p)
        package_units.setdefault(node.package_name, []).append(p)
    fw, fa = _accuracy(file_units, k)
    pw, pa = _accuracy(package_units, k)

    sizes = [len(members[p]) for p in range(k)]
    return QualityScores(
        modularity_ratio=modularity,
        avg_clustering_coefficient=avg_clustering,
        file_weighted_accuracy=fw,
        file_average_accuracy=fa,
        package_weighted_accuracy=pw,
        package_average_accuracy=pa,
        partition_variance=partition_variance(sizes),
        distribution_percent=distribution_percent(sizes),
    )
