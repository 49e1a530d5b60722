"""Graphviz DOT export for spaces, route overlays and treatment schemes."""

from __future__ import annotations

from typing import Sequence

from .model import Alternatives, DesignSpace, Hierarchy, Plain, Route, TwoComponent
from .treatment import TreatmentScheme

_KIND_STYLE = {
    Plain: ("ellipse", "solid"),
    Alternatives: ("box", "solid"),
    Hierarchy: ("box3d", "solid"),
    TwoComponent: ("Mrecord", "solid"),
}


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def export_dot(target, routes: Sequence[Route | Sequence[str]] = ()) -> str:
    """Deterministic DOT text for a design space or a treatment scheme.

    Vertex kinds get distinct shapes; origins and goals double-peripheries;
    routes are overlaid in bold with their arcs coloured.
    """
    if isinstance(target, TreatmentScheme):
        return _scheme_dot(target)
    if isinstance(target, DesignSpace):
        return _space_dot(target, routes)
    raise TypeError(f"cannot export {type(target).__name__}")


def _route_elements(routes) -> tuple[set, set]:
    on_route_vertices: set[str] = set()
    on_route_arcs: set[tuple[str, str]] = set()
    for r in routes:
        seq = r.vertices if isinstance(r, Route) else tuple(r)
        on_route_vertices.update(seq)
        on_route_arcs.update(zip(seq, seq[1:]))
    return on_route_vertices, on_route_arcs


def _space_dot(space: DesignSpace, routes) -> str:
    hot_vertices, hot_arcs = _route_elements(routes)
    lines = ["digraph design_space {", "  rankdir=LR;"]
    for v in sorted(space.vertices, key=lambda v: v.id):
        shape, style = _KIND_STYLE[type(v.kind)]
        attrs = [f"shape={shape}", f"style={style}"]
        if v.id in space.origins or v.id in space.goals:
            attrs.append("peripheries=2")
        if v.id in hot_vertices:
            attrs.append("penwidth=2.0")
            attrs.append("color=red")
        lines.append(f"  {_quote(v.id)} [{', '.join(attrs)}];")
    for a in sorted(space.arcs, key=lambda a: (a.tail, a.head)):
        label = str(a.weight) if not isinstance(a.weight, tuple) else "(" + ",".join(map(str, a.weight)) + ")"
        attrs = [f"label={_quote(label)}"]
        if (a.tail, a.head) in hot_arcs:
            attrs.append("penwidth=2.0")
            attrs.append("color=red")
        lines.append(f"  {_quote(a.tail)} -> {_quote(a.head)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _scheme_dot(scheme: TreatmentScheme) -> str:
    lines = ["digraph treatment_scheme {", "  rankdir=LR;"]
    for p in sorted(scheme.design_points, key=lambda p: p.id):
        attrs = ["shape=ellipse", "peripheries=2"]
        if p.id == scheme.initial:
            attrs.append("style=bold")
        lines.append(f"  {_quote(p.id)} [{', '.join(attrs)}];")
    for p in sorted(scheme.analysis_points, key=lambda p: p.id):
        lines.append(f"  {_quote(p.id)} [shape=diamond];")
    lines.append(f"  {_quote(scheme.end)} [shape=box];")
    for p in sorted(scheme.design_points, key=lambda p: p.id):
        lines.append(f"  {_quote(p.id)} -> {_quote(p.successor)};")
    for p in sorted(scheme.analysis_points, key=lambda p: p.id):
        for rule in p.rules.rules:
            lines.append(f"  {_quote(p.id)} -> {_quote(rule.target)} [label={_quote(rule.outcome)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
