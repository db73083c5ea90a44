"""Graphviz DOT text for complexes and contact graphs.

Output depends only on the input data, so equal inputs give identical bytes.
"""

from __future__ import annotations

from .contact import ContactGraph
from .graph import CubeGraph, structure

# a fixed, colour-blind friendly cycle
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _skeleton(g, name):
    st = structure(g)
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in range(g.n):
        lines.append(f"  {v};")
    for eid, (u, v) in enumerate(g.edges):
        J = int(st.edge_class[eid])
        lines.append(f'  {u} -- {v} [color="{PALETTE[J % len(PALETTE)]}", label="J{J}"];')
    lines.append("}")
    return lines


def _contact(cg, name):
    ss = set(cg.strongly_separated)
    lines = [f"graph {name} {{", "  node [shape=box];"]
    for J in cg.nodes:
        lines.append(f'  J{J} [label="J{J}"];')
    for a, b in cg.edges:
        # osculating pairs can still be strongly separated
        if (a, b) in ss:
            lines.append(f'  J{a} -- J{b} [style=bold, color="#d62728", label="ss"];')
        else:
            lines.append(f"  J{a} -- J{b};")
    lines.append(f'  label="{len(ss)} strongly separated pairs";')
    lines.append("}")
    return lines


def export_dot(obj, name="G"):
    """DOT text for a CubeGraph, a ContactGraph, or ``None`` (an empty graph)."""
    if obj is None:
        lines = [f"graph {name} {{", "}"]
    elif isinstance(obj, CubeGraph):
        lines = _skeleton(obj, name)
    elif isinstance(obj, ContactGraph):
        lines = _contact(obj, name)
    else:
        raise TypeError(f"cannot export {type(obj).__name__} to DOT")
    return "\n".join(lines) + "\n"
