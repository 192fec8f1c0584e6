"""Modularity, greedy community detection, and partition censuses.

Modularity uses the Newman-Girvan form on the undirected weighted simple
projection, with a resolution multiplier on the null term.  The detector
is a deterministic Louvain: seeded node-visiting order, and between
equal-gain moves the lowest candidate class index wins.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import EmptyGraph, InvalidAssignment, SingleClass
from .graph import EquityGraph

__all__ = [
    "CommunityPartition",
    "modularity",
    "louvain",
    "significant_classes",
    "class_census",
    "CensusRow",
    "dummy_encode",
]


@dataclass(frozen=True)
class CommunityPartition:
    assignment: dict  # firm_id -> dense 0-based class index
    modularity: float
    class_sizes: dict  # class index -> node count
    seed: int
    resolution: float = 1.0

    @property
    def node_count(self) -> int:
        return len(self.assignment)

    @property
    def class_count(self) -> int:
        return len(self.class_sizes)


def _undirected_weighted(graph: EquityGraph):
    """adjacency dict u -> {v: weight} with directed multiplicities summed."""
    adj = {n: {} for n in graph.nodes}
    for (u, v), w in graph.undirected_weights().items():
        adj[u][v] = adj[u].get(v, 0) + w
        adj[v][u] = adj[v].get(u, 0) + w
    return adj


def modularity(graph: EquityGraph, assignment, resolution=1.0) -> float:
    """Q = sum_c [ in_c/(2W) - resolution * (tot_c/(2W))^2 ].

    ``in_c`` counts intra-class weight twice (ordered pairs); ``tot_c`` is
    the summed weighted degree of the class.  A graph with no edges has
    Q = 0 by convention.
    """
    if graph.node_count == 0:
        raise EmptyGraph("modularity of an empty graph")
    missing = graph.nodes - assignment.keys()
    if missing:
        raise InvalidAssignment(f"nodes without a class: {sorted(missing)[:5]}")
    adj = _undirected_weighted(graph)
    two_w = sum(sum(nbrs.values()) for nbrs in adj.values())
    if two_w == 0:
        return 0.0
    internal = {}
    total = {}
    for u in graph.nodes:
        cu = assignment[u]
        k_u = sum(adj[u].values())
        total[cu] = total.get(cu, 0) + k_u
        internal[cu] = internal.get(cu, 0) + sum(
            w for v, w in adj[u].items() if assignment[v] == cu
        )
    q = 0.0
    for c in total:
        q += internal.get(c, 0) / two_w - resolution * (total[c] / two_w) ** 2
    return q


class _LevelGraph:
    """Aggregated working graph for one Louvain level (integer node ids)."""

    def __init__(self, adj, loops):
        self.adj = adj      # list of dict nbr -> weight
        self.loops = loops  # list of intra-supernode weight (counted once)
        self.n = len(adj)
        self.degree = [
            sum(adj[i].values()) + 2 * loops[i] for i in range(self.n)
        ]
        self.two_w = sum(self.degree)


def _one_level(level: _LevelGraph, order, resolution, community=None):
    """Greedy local moves until a full pass makes no change.

    Returns (community list, moved_any).  Gains are compared in the
    L_ic - resolution * tot_c * k_i / (2W) form, which orders candidate
    classes identically to the full Q difference.
    """
    if community is None:
        community = list(range(level.n))
    else:
        community = list(community)
    tot = [0.0] * level.n
    members = [0] * level.n
    for i in range(level.n):
        tot[community[i]] += level.degree[i]
        members[community[i]] += 1
    if level.two_w == 0:
        return community, False
    moved_any = False
    moved = True
    while moved:
        moved = False
        for i in order:
            current = community[i]
            k_i = level.degree[i]
            links = {}
            for j, w in level.adj[i].items():
                links[community[j]] = links.get(community[j], 0) + w
            tot[current] -= k_i
            members[current] -= 1
            candidates = set(links) | {current}
            if members[current] > 0:
                # a vacated community label doubles as the "fresh singleton"
                # candidate, letting a node split off when staying turns bad
                for label in range(level.n):
                    if members[label] == 0:
                        candidates.add(label)
                        break
            best_class = None
            best_gain = None
            for candidate in sorted(candidates):
                gain = (
                    links.get(candidate, 0)
                    - resolution * tot[candidate] * k_i / level.two_w
                )
                if best_gain is None or gain > best_gain:
                    best_gain = gain
                    best_class = candidate
            tot[best_class] += k_i
            members[best_class] += 1
            if best_class != current:
                community[i] = best_class
                moved = True
                moved_any = True
    return community, moved_any


def _swap_sweep(level: _LevelGraph, community, resolution):
    """One pass of adjacent-pair community swaps (i -> c(j), j -> c(i)).

    Single moves cannot escape swap-locked optima on small graphs; trying
    every cross-community edge once, in sorted order, can.  Accepts only
    strictly improving swaps, so Q rises monotonically.
    """
    two_w = level.two_w
    if two_w == 0:
        return False
    tot = [0.0] * level.n
    for i in range(level.n):
        tot[community[i]] += level.degree[i]

    def links(i):
        out = {}
        for j, w in level.adj[i].items():
            out[community[j]] = out.get(community[j], 0) + w
        return out

    improved = False
    for i in range(level.n):
        for j in sorted(level.adj[i]):
            if j <= i:
                continue
            a, b = community[i], community[j]
            if a == b:
                continue
            k_i, k_j = level.degree[i], level.degree[j]
            w_ij = level.adj[i][j]
            l_i = links(i)
            l_j = links(j)
            tot_a_wo_i = tot[a] - k_i
            delta1 = (
                l_i.get(b, 0) - resolution * tot[b] * k_i / two_w
            ) - (
                l_i.get(a, 0) - resolution * tot_a_wo_i * k_i / two_w
            )
            tot_b_with_i_wo_j = tot[b] + k_i - k_j
            delta2 = (
                (l_j.get(a, 0) - w_ij) - resolution * tot_a_wo_i * k_j / two_w
            ) - (
                (l_j.get(b, 0) + w_ij) - resolution * tot_b_with_i_wo_j * k_j / two_w
            )
            if delta1 + delta2 > 1e-12:
                community[i], community[j] = b, a
                tot[a] = tot_a_wo_i + k_j
                tot[b] = tot[b] + k_i - k_j
                improved = True
    return improved


def _dissolve_sweep(level: _LevelGraph, community, resolution):
    """Try disbanding each community, sending every member to its best
    other community; keep the teardown only when the joint gain is positive.

    Covers valley crossings where the first of two single moves is
    non-improving (a small community wedged between better homes).
    """
    two_w = level.two_w
    if two_w == 0:
        return False
    tot = [0.0] * level.n
    members = {}
    for i in range(level.n):
        tot[community[i]] += level.degree[i]
        members.setdefault(community[i], []).append(i)

    improved = False
    for label in sorted(members):
        group = [i for i in range(level.n) if community[i] == label]
        if len(group) < 2 or len(group) == level.n:
            continue
        snapshot_community = list(community)
        snapshot_tot = list(tot)
        delta_total = 0.0
        feasible = True
        for i in group:
            k_i = level.degree[i]
            current = community[i]
            links = {}
            for j, w in level.adj[i].items():
                links[community[j]] = links.get(community[j], 0) + w
            tot[current] -= k_i
            stay_gain = links.get(current, 0) - resolution * tot[current] * k_i / two_w
            best_c = None
            best_gain = None
            for candidate in sorted(links):
                if candidate == label:
                    continue
                gain = links[candidate] - resolution * tot[candidate] * k_i / two_w
                if best_gain is None or gain > best_gain:
                    best_gain = gain
                    best_c = candidate
            if best_c is None:
                tot[current] += k_i
                feasible = False
                break
            delta_total += best_gain - stay_gain
            community[i] = best_c
            tot[best_c] += k_i
        if not feasible or delta_total <= 1e-12:
            community[:] = snapshot_community
            tot[:] = snapshot_tot
        else:
            improved = True
    return improved


def _aggregate(level: _LevelGraph, community):
    """Collapse communities into supernodes, keeping intra weight as loops."""
    labels = sorted(set(community))
    relabel = {old: new for new, old in enumerate(labels)}
    n = len(labels)
    adj = [dict() for _ in range(n)]
    loops = [0.0] * n
    for i in range(level.n):
        ci = relabel[community[i]]
        loops[ci] += level.loops[i]
        for j, w in level.adj[i].items():
            if j < i:
                continue  # each undirected pair once
            cj = relabel[community[j]]
            if ci == cj:
                loops[ci] += w
            else:
                adj[ci][cj] = adj[ci].get(cj, 0) + w
                adj[cj][ci] = adj[cj].get(ci, 0) + w
    return _LevelGraph(adj, loops), relabel


def _louvain_once(nodes, adj0, rng, resolution):
    level = _LevelGraph(adj0, [0.0] * len(nodes))
    # node_to_super[i] = supernode of original node i at the current level
    node_to_super = list(range(len(nodes)))
    while True:
        order = list(range(level.n))
        rng.shuffle(order)
        community, moved = _one_level(level, order, resolution)
        if not moved:
            break
        level, relabel = _aggregate(level, community)
        node_to_super = [relabel[community[s]] for s in node_to_super]

    # flat polish on the original graph: single-move sweeps interleaved
    # with adjacent-pair swaps until neither finds an improvement
    flat = _LevelGraph(adj0, [0.0] * len(nodes))
    community = list(node_to_super)
    order = list(range(flat.n))
    rng.shuffle(order)
    for _ in range(10):
        community, moved = _one_level(flat, order, resolution, community=community)
        swapped = _swap_sweep(flat, community, resolution)
        dissolved = _dissolve_sweep(flat, community, resolution)
        if not (moved or swapped or dissolved):
            break
    return community


def louvain(graph: EquityGraph, seed=0, resolution=1.0, restarts=8) -> CommunityPartition:
    """Greedy modularity maximization with seeded, reproducible ordering.

    The greedy hierarchy runs ``restarts`` times with visiting orders all
    derived from ``seed`` and the best-Q result wins (first hit on ties),
    which shakes off the swap-locked optima small graphs fall into.  The
    returned partition's Q never falls below the all-singletons
    partition's Q (moves are only accepted at non-negative gain).
    """
    if graph.node_count == 0:
        raise EmptyGraph("louvain on an empty graph")
    nodes = graph.sorted_nodes()
    index = {n: i for i, n in enumerate(nodes)}
    adj0 = [dict() for _ in nodes]
    for (u, v), w in graph.undirected_weights().items():
        adj0[index[u]][index[v]] = adj0[index[u]].get(index[v], 0) + w
        adj0[index[v]][index[u]] = adj0[index[v]].get(index[u], 0) + w

    best_q = None
    best_assignment = None
    for restart in range(max(1, restarts)):
        rng = random.Random(seed * 1000003 + restart)
        node_to_super = _louvain_once(nodes, adj0, rng, resolution)
        # densify class labels in first-appearance order over sorted nodes
        dense = {}
        assignment = {}
        for i, node in enumerate(nodes):
            label = node_to_super[i]
            if label not in dense:
                dense[label] = len(dense)
            assignment[node] = dense[label]
        q = modularity(graph, assignment, resolution)
        if best_q is None or q > best_q:
            best_q = q
            best_assignment = assignment

    sizes = {}
    for c in best_assignment.values():
        sizes[c] = sizes.get(c, 0) + 1
    return CommunityPartition(
        assignment=best_assignment,
        modularity=best_q,
        class_sizes=dict(sorted(sizes.items())),
        seed=seed,
        resolution=resolution,
    )


def significant_classes(partition: CommunityPartition, threshold=0.05) -> set:
    """Classes holding at least ``threshold`` of all nodes (inclusive bound)."""
    cutoff = threshold * partition.node_count
    return {c for c, size in partition.class_sizes.items() if size >= cutoff}


@dataclass(frozen=True, slots=True)
class CensusRow:
    class_index: int
    count: int
    percent: float  # of total nodes, rounded to 2 d.p.


def class_census(partition: CommunityPartition) -> list:
    """Per-class node counts and shares of the total, in class order."""
    n = partition.node_count
    return [
        CensusRow(c, size, round(100.0 * size / n, 2))
        for c, size in sorted(partition.class_sizes.items())
    ]


def dummy_encode(partition: CommunityPartition, baseline: int):
    """Per-node 0/1 vectors over the m-1 non-baseline classes.

    Returns ``(dummy_classes, vectors)`` where ``dummy_classes`` lists the
    class index behind each vector slot in ascending order.
    """
    classes = sorted(partition.class_sizes)
    if len(classes) < 2:
        raise SingleClass("cannot encode dummies for a single-class partition")
    if baseline not in partition.class_sizes:
        raise InvalidAssignment(f"baseline class {baseline} not present")
    dummy_classes = [c for c in classes if c != baseline]
    slot = {c: i for i, c in enumerate(dummy_classes)}
    vectors = {}
    for node, c in partition.assignment.items():
        vector = [0] * len(dummy_classes)
        if c != baseline:
            vector[slot[c]] = 1
        vectors[node] = tuple(vector)
    return dummy_classes, vectors
