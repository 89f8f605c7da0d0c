"""Layered layout plus DOT and SVG emission.

Visual conventions: top-to-bottom flow, lanes as vertical bands in
declaration order, dashed dependency arrows, criterion labels on branch
edges, doubled borders for nested elements, and superscript footnote
markers for source references.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .model import (
    EdgeKind,
    LawmapDoc,
    NodeKind,
    entry_exit_sets,
    reachable_set,
)
from .traverse import ROOT_PREFIX, Route

GLYPHS: dict[NodeKind, str] = {
    NodeKind.ENTRY: "terminator",
    NodeKind.EXIT: "terminator",
    NodeKind.ACTIVITY: "box",
    NodeKind.NESTED_ACTIVITY: "box-double",
    NodeKind.DECISION: "diamond",
    NodeKind.NESTED_DECISION: "diamond-double",
}

DOT_SHAPES: dict[NodeKind, tuple[str, bool]] = {
    NodeKind.ENTRY: ("oval", False),
    NodeKind.EXIT: ("oval", False),
    NodeKind.ACTIVITY: ("box", False),
    NodeKind.NESTED_ACTIVITY: ("box", True),
    NodeKind.DECISION: ("diamond", False),
    NodeKind.NESTED_DECISION: ("diamond", True),
}

# Every node kind must map to exactly one glyph; fail at import, not mid-render.
assert set(GLYPHS) == set(NodeKind), "glyph map does not cover all node kinds"
assert set(DOT_SHAPES) == set(NodeKind), "DOT shape map does not cover all node kinds"

NODE_HEIGHT = 44
H_GAP = 36
V_GAP = 56
MARGIN = 24
LANE_PAD = 20
CHAR_W = 7.2


@dataclass(frozen=True)
class PlacedNode:
    id: str
    x: float
    y: float
    width: float
    height: float
    glyph: str
    label: str


@dataclass(frozen=True)
class RoutedEdge:
    id: str
    points: tuple[tuple[float, float], ...]
    style: str  # solid | dashed
    label: str | None
    label_anchor: tuple[float, float] | None


@dataclass(frozen=True)
class LaneBand:
    lane_id: str
    label: str
    x_min: float
    x_max: float


@dataclass(frozen=True)
class LayoutGraph:
    nodes: tuple[PlacedNode, ...]
    edges: tuple[RoutedEdge, ...]
    lanes: tuple[LaneBand, ...]
    width: float
    height: float


def _node_width(node) -> float:
    text = node.label or node.id
    base = max(64.0, len(text) * CHAR_W + 28)
    if GLYPHS[node.kind].startswith("diamond"):
        base *= 1.35
    return base


def _layers(doc: LawmapDoc) -> dict[str, int]:
    """Longest-path layer assignment; back edges (broken maps) are ignored."""
    succ: dict[str, list[str]] = {}
    known = {n.id for n in doc.nodes}
    for e in doc.edges:
        if e.kind is EdgeKind.FLOW and e.from_id in known and e.to_id in known:
            succ.setdefault(e.from_id, []).append(e.to_id)

    # Iterative DFS marking back edges so cyclic debug renders still lay out.
    acyclic: dict[str, list[str]] = {n: [] for n in known}
    state: dict[str, int] = {}

    def visit(start: str) -> None:
        stack: list[tuple[str, int]] = [(start, 0)]
        state[start] = 0
        while stack:
            node, i = stack.pop()
            targets = succ.get(node, [])
            if i < len(targets):
                stack.append((node, i + 1))
                nxt = targets[i]
                if state.get(nxt) == 0:
                    continue  # back edge dropped
                acyclic[node].append(nxt)
                if nxt not in state:
                    state[nxt] = 0
                    stack.append((nxt, 0))
            else:
                state[node] = 1

    for node in doc.nodes:
        if node.id not in state:
            visit(node.id)

    indeg = {n: 0 for n in known}
    for src, targets in acyclic.items():
        for t in targets:
            indeg[t] += 1
    layer = {n: 0 for n in known}
    queue = [n.id for n in doc.nodes if indeg[n.id] == 0]
    order: list[str] = []
    while queue:
        current = queue.pop(0)
        order.append(current)
        for t in acyclic[current]:
            layer[t] = max(layer[t], layer[current] + 1)
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    return layer


def layout(doc: LawmapDoc) -> LayoutGraph:
    """Deterministic layered top-to-bottom layout with lanes as columns."""
    layer = _layers(doc)
    lane_order = [lane.id for lane in doc.lanes]
    has_laneless = any(n.lane not in lane_order for n in doc.nodes)
    bands = lane_order + ([None] if has_laneless or not lane_order else [])

    def band_of(node) -> object:
        return node.lane if node.lane in lane_order else None

    preds: dict[str, list[str]] = {}
    for e in doc.edges:
        if e.kind is EdgeKind.FLOW:
            preds.setdefault(e.to_id, []).append(e.from_id)

    max_layer = max(layer.values(), default=0)
    positions: dict[str, int] = {}  # running left-to-right rank per node
    rows: dict[tuple[object, int], list] = {}
    for band in bands:
        for lv in range(max_layer + 1):
            members = [
                n for n in doc.nodes if band_of(n) == band and layer.get(n.id, 0) == lv
            ]
            # Median-of-predecessors ordering with id tie-break.
            def key(n):
                xs = sorted(positions[p] for p in preds.get(n.id, []) if p in positions)
                median = xs[len(xs) // 2] if xs else 0
                return (median, n.id)

            members.sort(key=key)
            for i, n in enumerate(members):
                positions[n.id] = i
            rows[(band, lv)] = members

    placed: dict[str, PlacedNode] = {}
    lane_bands: list[LaneBand] = []
    x_cursor = MARGIN
    for band in bands:
        row_widths = []
        for lv in range(max_layer + 1):
            members = rows.get((band, lv), [])
            if members:
                row_widths.append(
                    sum(_node_width(n) for n in members) + H_GAP * (len(members) - 1)
                )
        band_width = max(row_widths, default=80.0) + 2 * LANE_PAD
        for lv in range(max_layer + 1):
            y = MARGIN + 28 + lv * (NODE_HEIGHT + V_GAP)
            members = rows.get((band, lv), [])
            total = sum(_node_width(n) for n in members) + H_GAP * max(0, len(members) - 1)
            x = x_cursor + (band_width - total) / 2
            for n in members:
                w = _node_width(n)
                placed[n.id] = PlacedNode(
                    id=n.id,
                    x=x,
                    y=y,
                    width=w,
                    height=NODE_HEIGHT,
                    glyph=GLYPHS[n.kind],
                    label=n.label or n.id,
                )
                x += w + H_GAP
        if band is not None:
            lane = doc.lane_by_id(band)
            lane_bands.append(
                LaneBand(band, lane.label if lane else band, x_cursor, x_cursor + band_width)
            )
        x_cursor += band_width

    edges: list[RoutedEdge] = []
    for e in doc.edges:
        if e.kind is EdgeKind.MULTI_LEVEL:
            continue
        src = placed.get(e.from_id)
        dst = placed.get(e.to_id)
        if src is None or dst is None:
            continue
        start = (src.x + src.width / 2, src.y + src.height)
        end = (dst.x + dst.width / 2, dst.y)
        if dst.y <= src.y:  # sideways or upward (dependencies): side to side
            start = (src.x + src.width, src.y + src.height / 2)
            end = (dst.x, dst.y + dst.height / 2)
        mid = ((start[0] + end[0]) / 2, (start[1] + end[1]) / 2)
        edges.append(
            RoutedEdge(
                id=e.id,
                points=(start, end),
                style="dashed" if e.kind is EdgeKind.DEPENDENCY else "solid",
                label=e.criterion,
                label_anchor=mid if e.criterion else None,
            )
        )

    width = x_cursor + MARGIN
    height = MARGIN + 28 + (max_layer + 1) * (NODE_HEIGHT + V_GAP) + MARGIN
    return LayoutGraph(
        nodes=tuple(placed[n.id] for n in doc.nodes if n.id in placed),
        edges=tuple(edges),
        lanes=tuple(lane_bands),
        width=width,
        height=height,
    )


# ─── DOT ─────────────────────────────────────────────────────────────────────


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(doc: LawmapDoc) -> str:
    """Graphviz text with the standard shape mapping; byte-stable output."""
    lines = [f"digraph {_dot_quote(doc.id)} {{"]
    lines.append("  rankdir=TB;")
    lines.append('  node [fontname="Helvetica"];')

    def node_stmt(node) -> str:
        shape, doubled = DOT_SHAPES[node.kind]
        attrs = [f"shape={shape}", f"label={_dot_quote(node.label or node.id)}"]
        if doubled:
            attrs.append("peripheries=2")
        return f"{node.id} [{', '.join(attrs)}];"

    lane_ids = [lane.id for lane in doc.lanes]
    for lane in doc.lanes:
        lines.append(f"  subgraph cluster_{lane.id} {{")
        lines.append(f"    label={_dot_quote(lane.label)};")
        for node in doc.nodes:
            if node.lane == lane.id:
                lines.append("    " + node_stmt(node))
        lines.append("  }")
    for node in doc.nodes:
        if node.lane not in lane_ids:
            lines.append("  " + node_stmt(node))
    for edge in doc.edges:
        if edge.kind is EdgeKind.MULTI_LEVEL:
            lines.append(f"  // link {edge.from_id} -> {edge.to_id}")
            continue
        attrs = []
        if edge.criterion is not None:
            attrs.append(f"label={_dot_quote(edge.criterion)}")
        if edge.kind is EdgeKind.DEPENDENCY:
            attrs.append("style=dashed")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {edge.from_id} -> {edge.to_id}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ─── SVG ─────────────────────────────────────────────────────────────────────

_SVG_STYLE = """\
    .lane-band { fill: #f4f6f8; stroke: #d0d7de; }
    .lane-title { font: bold 13px Helvetica, sans-serif; fill: #57606a; }
    .node-shape { fill: #ffffff; stroke: #24292f; stroke-width: 1.4; }
    .node-label { font: 12px Helvetica, sans-serif; fill: #24292f;
                  text-anchor: middle; dominant-baseline: middle; }
    .edge { stroke: #57606a; stroke-width: 1.4; fill: none; }
    .edge.dep { stroke-dasharray: 6 4; }
    .edge-label { font: 11px Helvetica, sans-serif; fill: #0969da; }
    .ref-marker { font: 9px Helvetica, sans-serif; fill: #9a6700; }
    .footnote { font: 10px Helvetica, sans-serif; fill: #57606a; }
    .highlight .node-shape { stroke: #d97706; stroke-width: 3; fill: #fff7e6; }
    .edge.highlight { stroke: #d97706; stroke-width: 3; }
"""


def _shape_markup(node: PlacedNode) -> list[str]:
    x, y, w, h = node.x, node.y, node.width, node.height
    out = []
    if node.glyph == "terminator":
        out.append(
            f'<rect class="node-shape" x="{x:.1f}" y="{y:.1f}" width="{w:.1f}" '
            f'height="{h:.1f}" rx="{h / 2:.1f}"/>'
        )
    elif node.glyph in ("box", "box-double"):
        out.append(
            f'<rect class="node-shape" x="{x:.1f}" y="{y:.1f}" width="{w:.1f}" height="{h:.1f}"/>'
        )
        if node.glyph == "box-double":
            out.append(
                f'<rect class="node-shape" x="{x + 4:.1f}" y="{y + 4:.1f}" '
                f'width="{w - 8:.1f}" height="{h - 8:.1f}"/>'
            )
    else:  # diamond, diamond-double
        cx, cy = x + w / 2, y + h / 2
        points = f"{cx:.1f},{y:.1f} {x + w:.1f},{cy:.1f} {cx:.1f},{y + h:.1f} {x:.1f},{cy:.1f}"
        out.append(f'<polygon class="node-shape" points="{points}"/>')
        if node.glyph == "diamond-double":
            inner = (
                f"{cx:.1f},{y + 5:.1f} {x + w - 9:.1f},{cy:.1f} "
                f"{cx:.1f},{y + h - 5:.1f} {x + 9:.1f},{cy:.1f}"
            )
            out.append(f'<polygon class="node-shape" points="{inner}"/>')
    return out


def emit_svg(
    doc: LawmapDoc,
    lg: LayoutGraph | None = None,
    highlight: Route | None = None,
    path_prefix: str = ROOT_PREFIX,
) -> str:
    """Standalone SVG 1.1. Each node group's DOM id is its path-id; a
    highlight route marks completed nodes and traversed edges."""
    if lg is None:
        lg = layout(doc)
    node_ids = {n.id for n in lg.nodes}
    lit_nodes: set[str] = set()
    lit_edges: set[str] = set()
    if highlight is not None:
        for step in highlight.completed:
            if not step.node.startswith(path_prefix):
                continue
            local = step.node[len(path_prefix):]
            if "." in local:
                continue  # nested detail not drawn on this document
            if local not in node_ids:
                raise ValueError(f"highlight route references unknown node {step.node!r}")
            lit_nodes.add(local)
        edge_ids = {e.id for e in lg.edges}
        for edge_path in highlight.live_edges:
            if not edge_path.startswith(path_prefix):
                continue
            local = edge_path[len(path_prefix):]
            if "." in local:
                continue
            if local in edge_ids:
                lit_edges.add(local)

    footnotes: list[str] = []
    marker_for: dict[str, list[int]] = {}
    for node in doc.nodes:
        for ref in node.refs:
            footnotes.append(ref.display())
            marker_for.setdefault(node.id, []).append(len(footnotes))

    extra_height = 18 * len(footnotes) + (24 if footnotes else 0)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{lg.width:.0f}" height="{lg.height + extra_height:.0f}" '
        f'viewBox="0 0 {lg.width:.0f} {lg.height + extra_height:.0f}">',
        "  <style>",
        _SVG_STYLE.rstrip(),
        "  </style>",
        "  <defs>",
        '    <marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" '
        'markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="#57606a"/></marker>',
        "  </defs>",
        f"  <title>{escape(doc.title)}</title>",
    ]
    for band in lg.lanes:
        lines.append(
            f'  <rect class="lane-band" x="{band.x_min:.1f}" y="{MARGIN / 2:.1f}" '
            f'width="{band.x_max - band.x_min:.1f}" height="{lg.height - MARGIN:.1f}"/>'
        )
        lines.append(
            f'  <text class="lane-title" x="{(band.x_min + band.x_max) / 2:.1f}" '
            f'y="{MARGIN + 6:.1f}" text-anchor="middle">{escape(band.label)}</text>'
        )
    for edge in lg.edges:
        classes = "edge"
        if edge.style == "dashed":
            classes += " dep"
        if edge.id in lit_edges:
            classes += " highlight"
        points = " ".join(f"{x:.1f},{y:.1f}" for x, y in edge.points)
        lines.append(
            f'  <polyline id={quoteattr(path_prefix + edge.id)} class="{classes}" '
            f'points="{points}" marker-end="url(#arrow)"/>'
        )
        if edge.label and edge.label_anchor:
            ax, ay = edge.label_anchor
            lines.append(
                f'  <text class="edge-label" x="{ax + 5:.1f}" y="{ay - 3:.1f}">'
                f"{escape(edge.label)}</text>"
            )
    for node in lg.nodes:
        classes = "node highlight" if node.id in lit_nodes else "node"
        lines.append(f"  <g id={quoteattr(path_prefix + node.id)} class=\"{classes}\">")
        for shape in _shape_markup(node):
            lines.append("    " + shape)
        lines.append(
            f'    <text class="node-label" x="{node.x + node.width / 2:.1f}" '
            f'y="{node.y + node.height / 2:.1f}">{escape(node.label)}</text>'
        )
        markers = marker_for.get(node.id)
        if markers:
            sup = ",".join(str(m) for m in markers)
            lines.append(
                f'    <text class="ref-marker" x="{node.x + node.width - 4:.1f}" '
                f'y="{node.y - 2:.1f}">{sup}</text>'
            )
        lines.append("  </g>")
    if footnotes:
        base = lg.height + 12
        lines.append(
            f'  <text class="footnote" x="{MARGIN:.1f}" y="{base:.1f}" '
            f'font-weight="bold">Sources</text>'
        )
        for i, note in enumerate(footnotes, start=1):
            lines.append(
                f'  <text class="footnote" x="{MARGIN:.1f}" y="{base + 16 * i:.1f}">'
                f"{i}. {escape(note)}</text>"
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def doc_is_connected(doc: LawmapDoc) -> bool:
    """True when every node is flow-reachable from the entries."""
    entries, _ = entry_exit_sets(doc)
    if not entries:
        return not doc.nodes
    return reachable_set(doc, entries) == {n.id for n in doc.nodes}
