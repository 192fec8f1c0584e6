"""Whole-graph and per-node topology statistics on the simple projection.

Degrees keep edge direction; distance, clustering, betweenness and
eigenvector centrality treat the projection as undirected and unweighted.
Closeness follows the reachable-count / distance-sum convention by default
(``mode="reachable-over-distance"``); ``mode="mean-distance"`` gives the
per-node average distance instead.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

from .errors import EmptyGraph, NoConvergence
from .graph import EquityGraph

__all__ = [
    "DegreeCounts",
    "NodeMetrics",
    "GraphMetrics",
    "PathMetrics",
    "degrees",
    "average_degree",
    "local_clustering",
    "average_clustering",
    "shortest_path_metrics",
    "betweenness",
    "eigenvector_centrality",
    "degree_distribution",
    "graph_metrics",
    "compute_node_metrics",
]


@dataclass(frozen=True, slots=True)
class DegreeCounts:
    in_degree: int
    out_degree: int
    total: int


@dataclass(frozen=True, slots=True)
class NodeMetrics:
    firm_id: str
    in_degree: int
    out_degree: int
    degree: int
    clustering_coefficient: float
    betweenness: float
    closeness: float
    eigenvector: float
    eccentricity: int


@dataclass(frozen=True, slots=True)
class GraphMetrics:
    node_count: int
    edge_count: int
    average_degree: float
    diameter: int
    average_clustering: float
    average_path_length: float
    degree_histogram: dict  # {"in": {...}, "out": {...}, "total": {...}}


@dataclass(frozen=True, slots=True)
class PathMetrics:
    average_path_length: float
    diameter: int
    eccentricity: dict
    closeness: dict


def degrees(graph: EquityGraph) -> dict:
    """Per-node (in, out, total); total counts distinct undirected neighbors."""
    in_d = {n: 0 for n in graph.nodes}
    out_d = {n: 0 for n in graph.nodes}
    for (u, v) in graph.simple_edges:
        out_d[u] += 1
        in_d[v] += 1
    adjacency = graph.undirected_neighbors()
    return {
        n: DegreeCounts(in_d[n], out_d[n], len(adjacency[n]))
        for n in graph.sorted_nodes()
    }


def average_degree(graph: EquityGraph) -> float:
    """Directed simple edge count over node count."""
    if graph.node_count == 0:
        raise EmptyGraph("average degree of an empty graph")
    return len(graph.simple_edges) / graph.node_count


def local_clustering(graph: EquityGraph, node) -> float:
    """Fraction of neighbor pairs that are themselves connected (0 for k < 2)."""
    adjacency = {n: set(ns) for n, ns in graph.undirected_neighbors().items()}
    return _local_clustering(adjacency, node)


def _local_clustering(adjacency_sets, node) -> float:
    neighbors = sorted(adjacency_sets[node])
    k = len(neighbors)
    if k < 2:
        return 0.0
    links = 0
    for i, u in enumerate(neighbors):
        u_adj = adjacency_sets[u]
        links += sum(1 for v in neighbors[i + 1:] if v in u_adj)
    return links / (k * (k - 1) / 2)


def average_clustering(graph: EquityGraph) -> float:
    """Mean local clustering over all nodes, zeros included."""
    if graph.node_count == 0:
        raise EmptyGraph("average clustering of an empty graph")
    adjacency = {n: set(ns) for n, ns in graph.undirected_neighbors().items()}
    return sum(_local_clustering(adjacency, n) for n in sorted(adjacency)) / len(adjacency)


def _indexed_adjacency(graph: EquityGraph):
    """Sorted node labels plus integer adjacency lists (hot-path layout)."""
    nodes = graph.sorted_nodes()
    index = {n: i for i, n in enumerate(nodes)}
    adjacency = [[] for _ in nodes]
    seen = [set() for _ in nodes]
    for (u, v) in graph.simple_edges:
        iu, iv = index[u], index[v]
        if iv not in seen[iu]:
            seen[iu].add(iv)
            seen[iv].add(iu)
            adjacency[iu].append(iv)
            adjacency[iv].append(iu)
    for lst in adjacency:
        lst.sort()
    return nodes, adjacency


def shortest_path_metrics(graph: EquityGraph, *, closeness_mode="reachable-over-distance") -> PathMetrics:
    """BFS distances over the undirected projection.

    Average path length is the mean distance over ordered reachable pairs
    u != v; the diameter is the largest finite distance.  Unreachable
    pairs are excluded from every aggregate.
    """
    if graph.node_count == 0:
        raise EmptyGraph("path metrics of an empty graph")
    if closeness_mode not in ("reachable-over-distance", "mean-distance"):
        raise ValueError(f"unknown closeness mode {closeness_mode!r}")
    nodes, adjacency = _indexed_adjacency(graph)
    n = len(nodes)
    total = 0
    pairs = 0
    diameter = 0
    eccentricity = {}
    closeness = {}
    for source in range(n):
        dist = [-1] * n
        dist[source] = 0
        queue = deque([source])
        reachable = 0
        dist_sum = 0
        ecc = 0
        while queue:
            u = queue.popleft()
            du = dist[u]
            for v in adjacency[u]:
                if dist[v] < 0:
                    dist[v] = du + 1
                    queue.append(v)
                    reachable += 1
                    dist_sum += du + 1
                    if du + 1 > ecc:
                        ecc = du + 1
        label = nodes[source]
        eccentricity[label] = ecc
        diameter = max(diameter, ecc)
        total += dist_sum
        pairs += reachable
        if reachable == 0:
            closeness[label] = 0.0
        elif closeness_mode == "reachable-over-distance":
            closeness[label] = reachable / dist_sum
        else:
            closeness[label] = dist_sum / reachable
    average = total / pairs if pairs else 0.0
    return PathMetrics(average, diameter, eccentricity, closeness)


def betweenness(graph: EquityGraph, *, doubled=False) -> dict:
    """Unnormalized shortest-path betweenness on the undirected projection.

    Accumulation runs over per-source shortest-path DAGs; each unordered
    pair contributes once by default, twice with ``doubled``.
    """
    nodes, adjacency = _indexed_adjacency(graph)
    n = len(nodes)
    centrality = [0.0] * n
    for source in range(n):
        stack = []
        predecessors = [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[source] = 1
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            stack.append(u)
            du1 = dist[u] + 1
            su = sigma[u]
            for v in adjacency[u]:
                if dist[v] < 0:
                    dist[v] = du1
                    queue.append(v)
                if dist[v] == du1:
                    sigma[v] += su
                    predecessors[v].append(u)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            coeff = (1 + delta[w]) / sigma[w]
            for u in predecessors[w]:
                delta[u] += sigma[u] * coeff
            if w != source:
                centrality[w] += delta[w]
    factor = 1.0 if doubled else 0.5
    return {label: centrality[i] * factor for i, label in enumerate(nodes)}


def eigenvector_centrality(graph: EquityGraph, tol=1e-10, max_iter=1000) -> dict:
    """Dominant-eigenvector power iteration, normalized to max entry 1.

    Iterates x <- (A + I) x, which shares eigenvectors with A but keeps
    bipartite components from oscillating.  Convergence is successive-
    iterate max difference below ``tol``.
    """
    if not graph.simple_edges:
        raise EmptyGraph("eigenvector centrality needs at least one edge")
    nodes, adjacency = _indexed_adjacency(graph)
    n = len(nodes)
    x = [1.0] * n
    for _ in range(max_iter):
        new = [x[i] + sum(x[v] for v in adjacency[i]) for i in range(n)]
        norm = max(abs(v) for v in new)
        new = [v / norm for v in new]
        if max(abs(new[i] - x[i]) for i in range(n)) < tol:
            return {label: new[i] for i, label in enumerate(nodes)}
        x = new
    raise NoConvergence(max_iter)


def degree_distribution(graph: EquityGraph) -> dict:
    """Exact frequency maps keyed ``in``, ``out`` and ``total``."""
    degree_map = degrees(graph)
    return {
        "in": dict(sorted(Counter(d.in_degree for d in degree_map.values()).items())),
        "out": dict(sorted(Counter(d.out_degree for d in degree_map.values()).items())),
        "total": dict(sorted(Counter(d.total for d in degree_map.values()).items())),
    }


def graph_metrics(graph: EquityGraph, *, closeness_mode="reachable-over-distance") -> GraphMetrics:
    if graph.node_count == 0:
        raise EmptyGraph("metrics of an empty graph")
    paths = shortest_path_metrics(graph, closeness_mode=closeness_mode)
    return GraphMetrics(
        node_count=graph.node_count,
        edge_count=len(graph.simple_edges),
        average_degree=average_degree(graph),
        diameter=paths.diameter,
        average_clustering=average_clustering(graph),
        average_path_length=paths.average_path_length,
        degree_histogram=degree_distribution(graph),
    )


def compute_node_metrics(
    graph: EquityGraph,
    *,
    closeness_mode="reachable-over-distance",
    eigen_tol=1e-10,
    eigen_max_iter=1000,
) -> dict:
    """All per-node statistics in one pass, keyed by firm_id."""
    if graph.node_count == 0:
        raise EmptyGraph("node metrics of an empty graph")
    degree_map = degrees(graph)
    adjacency = {n: set(ns) for n, ns in graph.undirected_neighbors().items()}
    paths = shortest_path_metrics(graph, closeness_mode=closeness_mode)
    between = betweenness(graph)
    if graph.simple_edges:
        eigen = eigenvector_centrality(graph, tol=eigen_tol, max_iter=eigen_max_iter)
    else:
        eigen = {n: 0.0 for n in graph.nodes}
    return {
        n: NodeMetrics(
            firm_id=n,
            in_degree=degree_map[n].in_degree,
            out_degree=degree_map[n].out_degree,
            degree=degree_map[n].total,
            clustering_coefficient=_local_clustering(adjacency, n),
            betweenness=between[n],
            closeness=paths.closeness[n],
            eigenvector=eigen[n],
            eccentricity=paths.eccentricity[n],
        )
        for n in graph.sorted_nodes()
    }
