"""GEXF 1.2 export of a laid-out equity graph for external viewers."""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .errors import MissingPosition
from .graph import EquityGraph

__all__ = ["export_gexf"]

_GEXF_NS = "http://www.gexf.net/1.2draft"
_VIZ_NS = "http://www.gexf.net/1.2draft/viz"


def export_gexf(path, graph: EquityGraph, positions, partition=None, node_metrics=None):
    """Write a static directed GEXF document.

    Every graph node needs a position.  The modularity class is attached
    as an integer node attribute when a partition is given; node size is
    the total degree (taken from ``node_metrics`` when available, else
    counted from the projection).
    """
    for node in graph.sorted_nodes():
        if node not in positions:
            raise MissingPosition(node)

    ET.register_namespace("", _GEXF_NS)
    ET.register_namespace("viz", _VIZ_NS)
    root = ET.Element(f"{{{_GEXF_NS}}}gexf", {"version": "1.2"})
    graph_el = ET.SubElement(
        root, f"{{{_GEXF_NS}}}graph", {"defaultedgetype": "directed", "mode": "static"}
    )
    if partition is not None:
        attributes = ET.SubElement(
            graph_el, f"{{{_GEXF_NS}}}attributes", {"class": "node", "mode": "static"}
        )
        ET.SubElement(
            attributes,
            f"{{{_GEXF_NS}}}attribute",
            {"id": "modularity_class", "title": "modularity_class", "type": "integer"},
        )

    degree_of = {}
    if node_metrics is not None:
        degree_of = {n: m.degree for n, m in node_metrics.items()}
    else:
        degree_of = {n: len(ns) for n, ns in graph.undirected_neighbors().items()}

    nodes_el = ET.SubElement(graph_el, f"{{{_GEXF_NS}}}nodes")
    for node in graph.sorted_nodes():
        node_el = ET.SubElement(nodes_el, f"{{{_GEXF_NS}}}node", {"id": node, "label": node})
        if partition is not None:
            attvalues = ET.SubElement(node_el, f"{{{_GEXF_NS}}}attvalues")
            ET.SubElement(
                attvalues,
                f"{{{_GEXF_NS}}}attvalue",
                {"for": "modularity_class", "value": str(partition.assignment[node])},
            )
        x, y = positions[node]
        ET.SubElement(
            node_el,
            f"{{{_VIZ_NS}}}position",
            {"x": f"{x:.6f}", "y": f"{y:.6f}", "z": "0.0"},
        )
        ET.SubElement(node_el, f"{{{_VIZ_NS}}}size", {"value": str(degree_of[node])})

    edges_el = ET.SubElement(graph_el, f"{{{_GEXF_NS}}}edges")
    for i, ((src, dst), weight) in enumerate(sorted(graph.simple_edges.items())):
        ET.SubElement(
            edges_el,
            f"{{{_GEXF_NS}}}edge",
            {"id": str(i), "source": src, "target": dst, "weight": str(weight)},
        )

    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)
