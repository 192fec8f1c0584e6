#!/usr/bin/env python3
"""Whole-graph and per-node topology statistics.

Degrees keep direction; distances, clustering, betweenness and the
eigenvector score run on the undirected projection.  The closing table
mirrors the published network-statistics layout.
"""

from pathlib import Path

from equinet import (
    ShareholderRecord,
    assemble_graph,
    build_type3,
    compute_node_metrics,
    graph_metrics,
    listed_firms,
    parse_records,
    window_slice,
)
from equinet.records import parse_window_spec
from equinet.reports import StatColumn, format_graph_stats_table

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

shareholders = parse_records(FIXTURES / "shareholders.csv", ShareholderRecord)
window = parse_window_spec("G1:2015-03-01:2015-05-31")
sh = window_slice(shareholders, window, "report_date")
graph = assemble_graph(listed_firms(sh), build_type3(sh, window.label), window.label)

gm = graph_metrics(graph)
metrics = compute_node_metrics(graph)

print("five most central firms by betweenness:")
top = sorted(metrics.values(), key=lambda m: -m.betweenness)[:5]
for m in top:
    print(f"  {m.firm_id}: degree {m.degree:3d}  betweenness {m.betweenness:8.2f}  "
          f"clustering {m.clustering_coefficient:.3f}  eccentricity {m.eccentricity}")

print("\ntotal-degree histogram (degree: firms):")
for degree, count in gm.degree_histogram["total"].items():
    print(f"  {degree:3d}: {'#' * count}")

print()
print(format_graph_stats_table([
    StatColumn(
        label=window.label,
        node_count=gm.node_count,
        edge_count=gm.edge_count,
        diameter=gm.diameter,
        average_clustering=gm.average_clustering,
        average_path_length=gm.average_path_length,
    )
]))
