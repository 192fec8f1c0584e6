"""Independent brute-force reference implementations used only by tests.

Everything here deliberately avoids the library's algorithms: distances
come from Floyd-Warshall, shortest-path counts from adjacency-matrix
powers (every length-d walk between nodes at distance d is a shortest
path), modularity from the pairwise double sum, and the estimators from
explicit normal-equations matrix arithmetic.
"""

from __future__ import annotations

import numpy as np

INF = float("inf")


def node_index(nodes):
    nodes = sorted(nodes)
    return nodes, {n: i for i, n in enumerate(nodes)}


def undirected_matrix(graph):
    """Dense 0/1 undirected adjacency from an EquityGraph."""
    nodes, index = node_index(graph.nodes)
    a = np.zeros((len(nodes), len(nodes)), dtype=np.int64)
    for (u, v) in graph.simple_edges:
        a[index[u], index[v]] = 1
        a[index[v], index[u]] = 1
    return nodes, a


def floyd_warshall(a):
    n = a.shape[0]
    dist = np.full((n, n), INF)
    np.fill_diagonal(dist, 0.0)
    dist[a > 0] = 1.0
    for k in range(n):
        dist = np.minimum(dist, dist[:, k][:, None] + dist[k, :][None, :])
    return dist


def path_counts(a, dist):
    """sigma[s, t] = number of shortest s-t paths, from matrix powers."""
    n = a.shape[0]
    finite = dist[np.isfinite(dist)]
    max_d = int(finite.max()) if finite.size else 0
    powers = [np.eye(n, dtype=object)]
    current = np.eye(n, dtype=object)
    a_obj = a.astype(object)
    for _ in range(max_d):
        current = current @ a_obj
        powers.append(current)
    sigma = np.zeros((n, n), dtype=object)
    for s in range(n):
        for t in range(n):
            if np.isfinite(dist[s, t]):
                sigma[s, t] = powers[int(dist[s, t])][s, t]
    return sigma


def betweenness_bruteforce(graph):
    """Unnormalized betweenness via the pair-dependency composition rule."""
    nodes, a = undirected_matrix(graph)
    dist = floyd_warshall(a)
    sigma = path_counts(a, dist)
    n = len(nodes)
    out = {v: 0.0 for v in nodes}
    for s in range(n):
        for t in range(s + 1, n):
            if not np.isfinite(dist[s, t]) or sigma[s, t] == 0:
                continue
            for v in range(n):
                if v in (s, t):
                    continue
                if dist[s, v] + dist[v, t] == dist[s, t]:
                    out[nodes[v]] += (sigma[s, v] * sigma[v, t]) / sigma[s, t]
    return out


def betweenness_path_enumeration(graph):
    """Literal DFS enumeration of all shortest paths (small graphs only)."""
    nodes, a = undirected_matrix(graph)
    n = len(nodes)
    adj = {i: [j for j in range(n) if a[i, j]] for i in range(n)}
    dist = floyd_warshall(a)
    interior = {v: 0.0 for v in nodes}
    for s in range(n):
        for t in range(s + 1, n):
            if s == t or not np.isfinite(dist[s, t]):
                continue
            target_len = int(dist[s, t])
            paths = []

            def extend(path):
                u = path[-1]
                if len(path) - 1 == target_len:
                    if u == t:
                        paths.append(list(path))
                    return
                for w in adj[u]:
                    if w not in path and dist[s, w] == len(path):
                        path.append(w)
                        extend(path)
                        path.pop()

            extend([s])
            if not paths:
                continue
            for path in paths:
                for v in path[1:-1]:
                    interior[nodes[v]] += 1.0 / len(paths)
    return interior


def clustering_bruteforce(graph):
    """Triple-loop triangle counting."""
    nodes, a = undirected_matrix(graph)
    n = len(nodes)
    out = {}
    for i in range(n):
        neighbors = [j for j in range(n) if a[i, j]]
        k = len(neighbors)
        if k < 2:
            out[nodes[i]] = 0.0
            continue
        links = 0
        for x in range(k):
            for y in range(x + 1, k):
                if a[neighbors[x], neighbors[y]]:
                    links += 1
        out[nodes[i]] = links / (k * (k - 1) / 2)
    return out


def path_metrics_bruteforce(graph):
    """(avg path length, diameter, eccentricity, paper-closeness) from FW."""
    nodes, a = undirected_matrix(graph)
    dist = floyd_warshall(a)
    n = len(nodes)
    total = 0.0
    pairs = 0
    ecc = {}
    clo = {}
    diameter = 0
    for i in range(n):
        finite = [dist[i, j] for j in range(n) if i != j and np.isfinite(dist[i, j])]
        ecc[nodes[i]] = int(max(finite)) if finite else 0
        diameter = max(diameter, ecc[nodes[i]])
        total += sum(finite)
        pairs += len(finite)
        clo[nodes[i]] = (len(finite) / sum(finite)) if finite else 0.0
    average = total / pairs if pairs else 0.0
    return average, diameter, ecc, clo


def modularity_pairwise(graph, assignment, resolution=1.0):
    """Q from the pairwise form (1/2W) sum_ij (A_ij - r k_i k_j / 2W) d(ci,cj)."""
    nodes, index = node_index(graph.nodes)
    n = len(nodes)
    w = np.zeros((n, n))
    for (u, v), weight in graph.simple_edges.items():
        w[index[u], index[v]] += weight
        w[index[v], index[u]] += weight
    k = w.sum(axis=1)
    two_w = k.sum()
    if two_w == 0:
        return 0.0
    q = 0.0
    for i in range(n):
        for j in range(n):
            if assignment[nodes[i]] == assignment[nodes[j]]:
                q += w[i, j] - resolution * k[i] * k[j] / two_w
    return q / two_w


def set_partitions(items):
    """All partitions of a list (restricted-growth enumeration)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


def best_partition_bruteforce(graph, resolution=1.0):
    """Exhaustive modularity optimum over every partition (n <= 8 or so)."""
    best_q = -INF
    best = None
    for partition in set_partitions(sorted(graph.nodes)):
        assignment = {}
        for c, block in enumerate(partition):
            for node in block:
                assignment[node] = c
        q = modularity_pairwise(graph, assignment, resolution)
        if q > best_q:
            best_q = q
            best = assignment
    return best_q, best


def ols_oracle(X, y):
    """Normal equations with explicit inverses; returns coefficient vector,
    classical covariance and HC0/HC1 sandwiches."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ X.T @ y
    e = y - X @ beta
    sigma2 = (e @ e) / (n - k)
    classical = sigma2 * xtx_inv
    meat = X.T @ np.diag(e**2) @ X
    hc0 = xtx_inv @ meat @ xtx_inv
    hc1 = hc0 * n / (n - k)
    return beta, classical, hc0, hc1, e


def wls_oracle(X, y, weights):
    sw = np.sqrt(np.asarray(weights, dtype=float))
    return ols_oracle(X * sw[:, None], y * sw)


def tsls_oracle(X, y, endog_idx, Z):
    """Textbook 2SLS through explicit projector matrices."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    n, k = X.shape
    exog = [i for i in range(k) if i != endog_idx]
    W = np.column_stack([X[:, exog], Z])
    P = W @ np.linalg.inv(W.T @ W) @ W.T
    X_hat = X.copy()
    X_hat[:, endog_idx] = P @ X[:, endog_idx]
    bread = np.linalg.inv(X_hat.T @ X_hat)
    beta = bread @ X_hat.T @ y
    e = y - X @ beta
    classical = (e @ e) / (n - k) * bread
    hc1 = n / (n - k) * bread @ (X_hat.T @ np.diag(e**2) @ X_hat) @ bread
    return beta, classical, hc1, e
