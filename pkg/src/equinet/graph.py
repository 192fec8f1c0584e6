"""Per-window equity graph construction from shareholder filings.

Three relation rules generate directed typed edges between listed firms:

* type 1: a top-ten shareholder of firm A resolves (via an explicit
  name -> firm_id alias table) to listed firm B: edge A -> B;
* type 2: a top-ten shareholder of firm A is the legal representative of
  listed firm B: edge A -> B;
* type 3: firms A and B share a top-ten shareholder: both A -> B and
  B -> A are emitted (the weak common-holder relation is double-counted).

Raw edges keep their multiplicity; all metrics run on the weighted simple
projection obtained by collapsing parallel edges into integer weights.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

from .errors import EdgeEndpointUnknown, SelfLoopForbidden

__all__ = [
    "RelationType",
    "OwnershipEdge",
    "EquityGraph",
    "ConnectionSummary",
    "listed_firms",
    "build_type1",
    "build_type2",
    "build_type3",
    "assemble_graph",
    "connection_summary",
    "write_edge_list",
    "read_edge_list",
    "write_node_list",
    "read_node_list",
]


class RelationType(IntEnum):
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3


@dataclass(frozen=True, slots=True)
class OwnershipEdge:
    src: str
    dst: str
    relation: RelationType
    window: str


@dataclass
class EquityGraph:
    """Node universe plus raw multi-edges and their weighted simple projection."""

    window: str
    nodes: frozenset
    raw_edges: tuple
    simple_edges: dict  # (src, dst) -> multiplicity

    @classmethod
    def from_directed_pairs(cls, window, nodes, pairs, relation=RelationType.TYPE3):
        """Build a graph from plain (src, dst) pairs; handy for synthetic graphs."""
        edges = [OwnershipEdge(s, d, relation, window) for s, d in pairs]
        return assemble_graph(nodes, edges, window)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def sorted_nodes(self) -> list:
        return sorted(self.nodes)

    def undirected_neighbors(self) -> dict:
        """node -> sorted list of distinct neighbors on the undirected projection."""
        adj = {n: set() for n in self.nodes}
        for (u, v) in self.simple_edges:
            adj[u].add(v)
            adj[v].add(u)
        return {n: sorted(adj[n]) for n in self.sorted_nodes()}

    def undirected_weights(self) -> dict:
        """(u, v) with u < v -> summed multiplicity of both directions."""
        weights = {}
        for (u, v), w in self.simple_edges.items():
            key = (u, v) if u < v else (v, u)
            weights[key] = weights.get(key, 0) + w
        return weights


def listed_firms(shareholders) -> set:
    """Node universe: firms with at least one shareholder filing in the window."""
    return {r.firm_id for r in shareholders}


def build_type1(shareholders, listed, aliases, window_label):
    """Direct cross-shareholding edges (rule 1).

    ``aliases`` maps normalized shareholder names to firm ids; names that
    do not resolve, or resolve outside ``listed``, produce no edge.
    """
    edges = []
    for record in shareholders:
        target = aliases.get(record.shareholder_name)
        if target is not None and target in listed and target != record.firm_id:
            edges.append(OwnershipEdge(record.firm_id, target, RelationType.TYPE1, window_label))
    return edges


def build_type2(shareholders, legal_reps, window_label, listed=None):
    """Shareholder-is-legal-representative edges (rule 2).

    One edge per (shareholder row, represented firm) pair.  ``listed``
    restricts destinations to the window's node universe; legal-rep firms
    without in-window filings are outside the graph and are skipped.
    """
    rep_firms: dict[str, set] = {}
    for rep in legal_reps:
        rep_firms.setdefault(rep.person_name, set()).add(rep.firm_id)
    edges = []
    for record in shareholders:
        for target in sorted(rep_firms.get(record.shareholder_name, ())):
            if target == record.firm_id:
                continue
            if listed is not None and target not in listed:
                continue
            edges.append(OwnershipEdge(record.firm_id, target, RelationType.TYPE2, window_label))
    return edges


def build_type3(shareholders, window_label):
    """Common-shareholder edges (rule 3), double-counted as both directions.

    A shareholder held by k distinct firms contributes exactly k*(k-1)
    ordered-pair edges.
    """
    holders: dict[str, set] = {}
    for record in shareholders:
        holders.setdefault(record.shareholder_name, set()).add(record.firm_id)
    edges = []
    for name in sorted(holders):
        firms = sorted(holders[name])
        if len(firms) < 2:
            continue
        for a in firms:
            for b in firms:
                if a != b:
                    edges.append(OwnershipEdge(a, b, RelationType.TYPE3, window_label))
    return edges


def assemble_graph(nodes, edges, window_label) -> EquityGraph:
    """Integrate edge lists into one graph and derive the simple projection."""
    node_set = frozenset(nodes)
    raw = tuple(edges)
    for edge in raw:
        if edge.src == edge.dst:
            raise SelfLoopForbidden(edge.src)
        if edge.src not in node_set:
            raise EdgeEndpointUnknown(edge.src)
        if edge.dst not in node_set:
            raise EdgeEndpointUnknown(edge.dst)
    simple = dict(sorted(Counter((e.src, e.dst) for e in raw).items()))
    return EquityGraph(window=window_label, nodes=node_set, raw_edges=raw, simple_edges=simple)


@dataclass(frozen=True, slots=True)
class ConnectionSummary:
    type1: int
    type2: int
    type3: int

    @property
    def total(self) -> int:
        return self.type1 + self.type2 + self.type3


def connection_summary(graph: EquityGraph) -> ConnectionSummary:
    """Exact raw-edge multiplicities by relation type."""
    counts = Counter(e.relation for e in graph.raw_edges)
    return ConnectionSummary(
        type1=counts.get(RelationType.TYPE1, 0),
        type2=counts.get(RelationType.TYPE2, 0),
        type3=counts.get(RelationType.TYPE3, 0),
    )


def write_edge_list(path, graph: EquityGraph, *, delimiter=","):
    """Three-column export: starting point, ending point, relation type."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, delimiter=delimiter, lineterminator="\n")
        writer.writerow(["source", "target", "relation"])
        for edge in graph.raw_edges:
            writer.writerow([edge.src, edge.dst, int(edge.relation)])


def read_edge_list(path, window_label, *, delimiter=","):
    """Read an edge-list file back into raw OwnershipEdge objects."""
    path = Path(path)
    edges = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle, delimiter=delimiter)
        header = next(reader)
        cols = {name: header.index(name) for name in ("source", "target", "relation")}
        for row in reader:
            if not row:
                continue
            edges.append(
                OwnershipEdge(
                    row[cols["source"]],
                    row[cols["target"]],
                    RelationType(int(row[cols["relation"]])),
                    window_label,
                )
            )
    return edges


def write_node_list(path, graph: EquityGraph):
    with open(path, "w", encoding="utf-8") as handle:
        for node in graph.sorted_nodes():
            handle.write(node + "\n")


def read_node_list(path):
    with open(path, encoding="utf-8") as handle:
        return [line.strip() for line in handle if line.strip()]
