"""DOT and SVG pictures of a diagram's 1-skeleton.  Cosmetic only."""

from __future__ import annotations

from collections import defaultdict, deque
from xml.sax.saxutils import escape

from .core import A, K, T1, T2, format_word
from .diagram import Diagram

_COLOURS = {T1: "#1f77b4", T2: "#2ca02c", A: "#7f7f7f", K: "#d62728"}


def _edges(d: Diagram):
    """One entry per undirected edge, oriented along its positive label."""
    for h in range(d.num_half_edges):
        if d.label[h] > 0:
            yield h, d.origin[h], d.target(h), d.label[h]


def to_dot(d: Diagram, name: str = "diagram") -> str:
    outer = set(d.faces[d.outer_face]) if d.num_half_edges else set()
    lines = [f"digraph {name} {{", "  node [shape=point];", "  edge [arrowsize=0.5];"]
    lines.append(f'  v{d.basepoint} [shape=circle, width=0.12, label=""];')
    for h, u, v, x in _edges(d):
        style = ", penwidth=2" if h in outer or d.twin[h] in outer else ""
        lines.append(f'  v{u} -> v{v} [label="{format_word((x,))}", color="{_COLOURS[x]}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def layered_layout(d: Diagram) -> dict[int, tuple[float, float]]:
    """BFS layers from the basepoint; vertices in a layer ordered by their
    parent's position."""
    adj = defaultdict(list)
    for h in range(d.num_half_edges):
        adj[d.origin[h]].append(d.target(h))
    layer = {d.basepoint: 0}
    order = [d.basepoint]
    q = deque(order)
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in layer:
                layer[w] = layer[v] + 1
                order.append(w)
                q.append(w)
    rows: dict[int, list[int]] = defaultdict(list)
    for v in order:
        rows[layer[v]].append(v)
    pos = {}
    for y, vs in rows.items():
        for i, v in enumerate(vs):
            pos[v] = ((i + 1) / (len(vs) + 1), y)
    return pos


def to_svg(d: Diagram, width: int = 800, row_height: int = 40) -> str:
    pos = layered_layout(d)
    depth = max((y for _, y in pos.values()), default=0)
    height = (depth + 2) * row_height
    scale = lambda p: (p[0] * width, (p[1] + 1) * row_height)  # noqa: E731
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    for h, u, v, x in _edges(d):
        (x1, y1), (x2, y2) = scale(pos[u]), scale(pos[v])
        out.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
            f'stroke="{_COLOURS[x]}" stroke-width="1"><title>{escape(format_word((x,)))}</title></line>'
        )
    for v, p in pos.items():
        cx, cy = scale(p)
        r = 4 if v == d.basepoint else 1.5
        out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{r}" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
