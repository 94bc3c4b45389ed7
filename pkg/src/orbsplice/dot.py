"""Graphviz DOT text for decorated graphs and splice diagrams."""

from __future__ import annotations

from .graphs import AnyGraph, decorated
from .splice import SpliceDiagram


def _q(s: str) -> str:
    return '"' + str(s).replace('"', r"\"") + '"'


def graph_to_dot(g: AnyGraph, name: str = "plumbing") -> str:
    dg = decorated(g)
    pg = dg.graph
    lines = [f"graph {_q(name)} {{",
             "  node [shape=circle, style=filled, fillcolor=black, fixedsize=true, width=0.15, label=\"\"];"]
    for v, e in pg.euler.items():
        lines.append(f"  {_q(v)} [xlabel={_q(f'{v}: {e}')}];")
    for a, b in sorted(pg.edges):
        lines.append(f"  {_q(a)} -- {_q(b)};")
    for v, n in dg.weights.items():
        arrow = f"{v}__arrow"
        lines.append(f"  {_q(arrow)} [shape=plaintext, style=\"\", width=0, label={_q(f'n={n}')}];")
        lines.append(f"  {_q(v)} -- {_q(arrow)} [dir=forward, arrowhead=normal];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def splice_to_dot(d: SpliceDiagram, name: str = "splice") -> str:
    lines = [f"graph {_q(name)} {{",
             "  node [shape=circle, fixedsize=true, width=0.15, label=\"\"];"]
    for v in d.nodes:
        lines.append(f"  {_q(v)} [style=filled, fillcolor=black, xlabel={_q(v)}];")
    for w in d.leaves:
        lines.append(f"  {_q(w)} [xlabel={_q(w)}];")
    weight_at = {}
    for v in d.nodes:
        for e in d.edges[v]:
            weight_at[(v, e.end)] = e.weight
    for a, b in d.diagram_edges():
        attrs = []
        if (a, b) in weight_at:
            attrs.append(f"taillabel={_q(weight_at[(a, b)])}")
        if (b, a) in weight_at:
            attrs.append(f"headlabel={_q(weight_at[(b, a)])}")
        lines.append(f"  {_q(a)} -- {_q(b)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_dot(obj, name: str | None = None) -> str:
    if isinstance(obj, SpliceDiagram):
        return splice_to_dot(obj, name or "splice")
    return graph_to_dot(obj, name or "plumbing")
