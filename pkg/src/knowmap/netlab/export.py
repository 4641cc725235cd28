"""GraphML and DOT writers with byte-stable output."""

from __future__ import annotations

from numbers import Integral, Real
from typing import Mapping
from xml.sax.saxutils import escape, quoteattr

from knowmap.netlab.graph import WeightedGraph

PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
    "#393b79",
    "#ad494a",
)
UNCLUSTERED = "#d9d9d9"

# Attribute order and GraphML types; absent attributes are simply not written.
NODE_ATTRS = (
    ("label", "string"),
    ("occurrence", "int"),
    ("cluster", "int"),
    ("x", "double"),
    ("y", "double"),
    ("betweenness", "double"),
    ("degree", "int"),
)


def fmt_number(value) -> str:
    """Integers verbatim, other reals with 9 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, Real):
        value = float(value)
        if value == int(value) and abs(value) < 1e15:
            return str(int(value))
        return format(value, ".9g")
    return str(value)


def cluster_color(cluster: int | None) -> str:
    return UNCLUSTERED if cluster is None else PALETTE[cluster % len(PALETTE)]


def to_graphml(
    graph: WeightedGraph, node_data: Mapping[str, Mapping[str, object]] | None = None
) -> str:
    """Serialize ``graph``; ``node_data`` maps label -> extra attributes (cluster, x, y, ...)."""
    node_data = node_data or {}
    present = {"label", "occurrence"}
    for attrs in node_data.values():
        present.update(attrs)
    keys = [(name, kind) for name, kind in NODE_ATTRS if name in present]

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns" '
        'xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" '
        'xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns '
        'http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">',
    ]
    for name, kind in keys:
        out.append(f'  <key id="{name}" for="node" attr.name="{name}" attr.type="{kind}"/>')
    out.append('  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>')
    out.append(f'  <graph id={quoteattr(graph.kind.value)} edgedefault="undirected">')
    for i, (label, occurrence) in enumerate(graph.nodes):
        values = {"label": label, "occurrence": occurrence, **node_data.get(label, {})}
        out.append(f'    <node id="n{i}">')
        for name, kind in keys:
            if name not in values or values[name] is None:
                continue
            text = escape(values[name]) if kind == "string" else fmt_number(values[name])
            out.append(f'      <data key="{name}">{text}</data>')
        out.append("    </node>")
    for e, (i, j, w) in enumerate(graph.edges):
        out.append(f'    <edge id="e{e}" source="n{i}" target="n{j}">')
        out.append(f'      <data key="weight">{fmt_number(w)}</data>')
        out.append("    </edge>")
    out.append("  </graph>")
    out.append("</graphml>")
    return "\n".join(out) + "\n"


def _dot_string(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    graph: WeightedGraph,
    clusters: Mapping[str, int] | None = None,
    name: str = "knowmap",
) -> str:
    clusters = clusters or {}
    out = [f"graph {_dot_string(name)} {{", "  node [style=filled, fontname=Helvetica];"]
    for i, (label, occurrence) in enumerate(graph.nodes):
        cluster = clusters.get(label)
        attrs = [
            f"label={_dot_string(label)}",
            f'fillcolor="{cluster_color(cluster)}"',
            f"occurrence={occurrence}",
        ]
        if cluster is not None:
            attrs.append(f"cluster={cluster}")
        out.append(f"  n{i} [{', '.join(attrs)}];")
    for i, j, w in graph.edges:
        out.append(f"  n{i} -- n{j} [weight={fmt_number(w)}];")
    out.append("}")
    return "\n".join(out) + "\n"
