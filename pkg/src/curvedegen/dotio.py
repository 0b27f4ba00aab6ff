"""Graphviz views of dual graphs and stable graphs.

Output is deterministic: nodes and edges appear in sorted id order, so
identical inputs give identical bytes.  Inessential components render
dashed; masses are appended to labels when a measure is supplied.
"""
from __future__ import annotations

from fractions import Fraction

from .bundles import bundle_for, h0
from .errors import InternalConsistencyError
from .measures import CCMeasure, Estimate, Unknown
from .model import DualGraphModel, is_inessential
from .reduction import StableDualGraph

__all__ = ["emit_dot", "emit_stable_dot"]


def _mass_text(mass) -> str:
    if isinstance(mass, Unknown):
        return "?"
    if isinstance(mass, Estimate):
        return f"{mass.value:.6g}~{mass.error:.1g}"
    if isinstance(mass, Fraction):
        return str(mass)
    return f"{mass}"


def emit_dot(model: DualGraphModel, measure: CCMeasure | None = None) -> str:
    """DOT text for a model's dual graph, optionally annotated with masses."""
    lines = ["graph dual {", "  node [shape=circle];"]
    for c in sorted(model.components, key=lambda c: c.id):
        label = f"{c.id}\\ng={c.genus} val={model.valency(c.id)}"
        try:
            label += f" h0={h0(bundle_for(model, c.id))}"
        except InternalConsistencyError:
            pass  # excluded shapes carry no section count
        if c.multiplicity != 1:
            label += f" x{c.multiplicity}"
        md = model.mark_degree(c.id)
        if md:
            label += f"\\nmarks={md}"
        if measure is not None:
            label += f"\\nmass={_mass_text(measure.components[c.id].total)}"
        style = ""
        if is_inessential(c.genus, model.valency(c.id), model.mark_degree(c.id)):
            style = ", style=dashed"
        lines.append(f'  "{c.id}" [label="{label}"{style}];')
    for e in sorted(model.edges, key=lambda e: e.id):
        label = f"{e.id} len={model.edge_length(e.id)}"
        if measure is not None:
            label += f" mass={_mass_text(measure.edges[e.id])}"
        a, b = e.endpoints
        lines.append(f'  "{a}" -- "{b}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_stable_dot(graph: StableDualGraph) -> str:
    """DOT text for a stable dual graph with chain lengths."""
    lines = ["graph stable {", "  node [shape=doublecircle];"]
    for v in sorted(graph.vertices):
        label = f"{v}\\ng={graph.genus[v]}"
        if graph.mark_degree[v]:
            label += f"\\nmarks={graph.mark_degree[v]}"
        lines.append(f'  "{v}" [label="{label}"];')
    for ch in sorted(graph.chains, key=lambda ch: ch.id):
        a, b = ch.endpoints
        lines.append(f'  "{a}" -- "{b}" [label="{ch.id} len={ch.length}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
