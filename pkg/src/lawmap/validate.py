"""Cross-document resolution and the semantic rule sweep.

Error codes (block traversal):
  E001 edge endpoint unknown           E006 unresolved nested/link target
  E002 decision with <2 out-flows      E007 cyclic nesting
  E003 duplicate criterion label       E008 flow cycle within one document
  E004 missing criterion on decision   E010 duplicate id
  E005 entry/exit with wrong flow      E011 nested-decision outcome mismatch
  E012 node references unknown lane

Warning codes (never block):
  W001 unreachable node                W004 criterion on non-decision edge
  W002 decision without source ref     W005 activity that looks like a decision
  W003 same-lane dependency
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import CODE_REGISTRY, Diagnostic, error, warning
from .model import (
    DECISION_KINDS,
    Edge,
    EdgeKind,
    LawmapDoc,
    LawmapSet,
    Node,
    NodeKind,
    entry_exit_sets,
    multilevel_endpoint,
    reachable_set,
)

CODE_REGISTRY.setdefault("E012", "node references unknown lane")


@dataclass(frozen=True)
class ResolvedSet:
    """A lawmap set whose nested and multi-level references all resolve.

    ``nesting_order`` lists document ids such that every referenced document
    precedes the documents that reference it.
    """

    set: LawmapSet
    nesting_order: tuple[str, ...]

    def doc(self, doc_id: str) -> LawmapDoc:
        d = self.set.doc(doc_id)
        if d is None:
            raise KeyError(doc_id)
        return d

    @property
    def root_doc(self) -> LawmapDoc:
        return self.set.root_doc


def _doc_references(doc: LawmapDoc) -> list[tuple[str, str, Node | Edge]]:
    """(target doc id, description, origin element) for nested refs and links."""
    out: list[tuple[str, str, Node | Edge]] = []
    for node in doc.nodes:
        if node.nested_ref is not None:
            out.append((node.nested_ref, f"nested map {node.nested_ref!r}", node))
    for edge in doc.edges:
        if edge.kind is EdgeKind.MULTI_LEVEL:
            for endpoint in (edge.from_id, edge.to_id):
                try:
                    target_doc, _ = multilevel_endpoint(endpoint)
                except ValueError:
                    out.append((endpoint, f"link endpoint {endpoint!r}", edge))
                    continue
                out.append((target_doc, f"link endpoint {endpoint!r}", edge))
    return out


def resolve_set(lawmap_set: LawmapSet) -> tuple[ResolvedSet | None, list[Diagnostic]]:
    """Resolve nested-map and multi-level references across the set.

    Emits E006 for dangling targets and E007 for reference cycles. On
    success, returns a :class:`ResolvedSet` with a valid topological
    nesting order (referenced documents first).
    """
    diagnostics: list[Diagnostic] = []
    doc_ids = [d.id for d in lawmap_set.docs]
    for doc in lawmap_set.docs:
        for target, description, element in _doc_references(doc):
            if lawmap_set.doc(target) is None:
                diagnostics.append(
                    error(
                        "E006",
                        f"{doc.id}: {description} does not resolve within the set",
                        element.span,
                        ref=element.id,
                    )
                )
        for edge in doc.edges:
            if edge.kind is not EdgeKind.MULTI_LEVEL:
                continue
            for endpoint, wanted in ((edge.from_id, NodeKind.EXIT), (edge.to_id, NodeKind.ENTRY)):
                try:
                    target_doc_id, node_id = multilevel_endpoint(endpoint)
                except ValueError:
                    continue
                target_doc = lawmap_set.doc(target_doc_id)
                if target_doc is None:
                    continue
                node = target_doc.node(node_id)
                if node is None or node.kind is not wanted:
                    diagnostics.append(
                        error(
                            "E006",
                            f"{doc.id}: link endpoint {endpoint!r} is not an existing "
                            f"{wanted.value} node",
                            edge.span,
                            ref=edge.id,
                        )
                    )
    if diagnostics:
        return None, diagnostics

    # Depth-first post-order over the reference graph; back edges are cycles.
    order: list[str] = []
    state: dict[str, int] = {}  # 0 in progress, 1 done

    def visit(doc_id: str, trail: list[str]) -> bool:
        if state.get(doc_id) == 1:
            return True
        if state.get(doc_id) == 0:
            cycle = trail[trail.index(doc_id):] + [doc_id]
            diagnostics.append(
                error("E007", f"cyclic nesting: {' -> '.join(cycle)}", ref=doc_id)
            )
            return False
        state[doc_id] = 0
        doc = lawmap_set.doc(doc_id)
        assert doc is not None
        targets = []
        for target, _, _ in _doc_references(doc):
            if target not in targets:
                targets.append(target)
        for target in targets:
            if not visit(target, trail + [doc_id]):
                return False
        state[doc_id] = 1
        order.append(doc_id)
        return True

    for doc_id in doc_ids:
        if not visit(doc_id, []):
            return None, diagnostics
    return ResolvedSet(set=lawmap_set, nesting_order=tuple(order)), []


def _flow_cycle(doc: LawmapDoc) -> list[str] | None:
    """A list of node ids forming a Flow cycle, or None if acyclic."""
    succ: dict[str, list[str]] = {}
    for e in doc.edges:
        if e.kind is EdgeKind.FLOW:
            succ.setdefault(e.from_id, []).append(e.to_id)
    state: dict[str, int] = {}

    def visit(node_id: str, trail: list[str]) -> list[str] | None:
        if state.get(node_id) == 1:
            return None
        if state.get(node_id) == 0:
            return trail[trail.index(node_id):] + [node_id]
        state[node_id] = 0
        for nxt in succ.get(node_id, []):
            found = visit(nxt, trail + [node_id])
            if found:
                return found
        state[node_id] = 1
        return None

    for node in doc.nodes:
        found = visit(node.id, [])
        if found:
            return found
    return None


def check_doc(doc: LawmapDoc, rs: ResolvedSet | None = None) -> list[Diagnostic]:
    """Single-document rule sweep. E011 needs a resolved set and is skipped
    when ``rs`` is absent; E006/E007 belong to :func:`resolve_set`."""
    found: list[tuple[int, str, Diagnostic]] = []
    node_index = {n.id: i for i, n in enumerate(doc.nodes)}
    n_nodes = len(doc.nodes)

    def add(index: int, diag: Diagnostic) -> None:
        found.append((index, diag.code, diag))

    # E010 duplicate ids over lanes, nodes and edges
    seen: dict[str, str] = {}
    for lane in doc.lanes:
        if lane.id in seen:
            add(-1, error("E010", f"duplicate id {lane.id!r}", ref=lane.id))
        seen[lane.id] = "lane"
    for i, node in enumerate(doc.nodes):
        if node.id in seen:
            add(i, error("E010", f"duplicate id {node.id!r}", node.span, ref=node.id))
        seen[node.id] = "node"
    for i, edge in enumerate(doc.edges):
        if edge.id in seen:
            add(n_nodes + i, error("E010", f"duplicate id {edge.id!r}", edge.span, ref=edge.id))
        seen[edge.id] = "edge"

    lane_ids = {lane.id for lane in doc.lanes}
    for i, node in enumerate(doc.nodes):
        if node.lane is not None and node.lane not in lane_ids:
            add(
                i,
                error(
                    "E012",
                    f"node {node.id!r} references unknown lane {node.lane!r}",
                    node.span,
                    ref=node.id,
                ),
            )

    # E001 dangling endpoints (MultiLevel endpoints are resolved at set level)
    for i, edge in enumerate(doc.edges):
        if edge.kind is EdgeKind.MULTI_LEVEL:
            continue
        for endpoint in (edge.from_id, edge.to_id):
            if endpoint not in node_index:
                add(
                    n_nodes + i,
                    error(
                        "E001",
                        f"edge {edge.id!r} endpoint names unknown node {endpoint!r}",
                        edge.span,
                        ref=edge.id,
                    ),
                )

    out_flows: dict[str, list[Edge]] = {}
    in_flows: dict[str, list[Edge]] = {}
    for edge in doc.edges:
        if edge.kind is EdgeKind.FLOW:
            out_flows.setdefault(edge.from_id, []).append(edge)
            in_flows.setdefault(edge.to_id, []).append(edge)

    for i, node in enumerate(doc.nodes):
        outs = out_flows.get(node.id, [])
        if node.kind in DECISION_KINDS:
            if len(outs) < 2:
                add(
                    i,
                    error(
                        "E002",
                        f"decision {node.id!r} has {len(outs)} outgoing flow edge(s); "
                        "at least two are required",
                        node.span,
                        ref=node.id,
                    ),
                )
            labels = [e.criterion for e in outs if e.criterion]
            for label in sorted({x for x in labels if labels.count(x) > 1}):
                add(
                    i,
                    error(
                        "E003",
                        f"decision {node.id!r} has duplicate criterion label {label!r}",
                        node.span,
                        ref=node.id,
                    ),
                )
            for e in outs:
                if not e.criterion:
                    add(
                        n_nodes + doc.edges.index(e),
                        error(
                            "E004",
                            f"flow {e.id!r} out of decision {node.id!r} has no criterion label",
                            e.span,
                            ref=e.id,
                        ),
                    )
            if not node.refs:
                add(
                    i,
                    warning(
                        "W002",
                        f"decision {node.id!r} carries no source reference",
                        node.span,
                        ref=node.id,
                    ),
                )
        if node.kind is NodeKind.ENTRY and in_flows.get(node.id):
            add(
                i,
                error(
                    "E005",
                    f"entry {node.id!r} has incoming flow",
                    node.span,
                    ref=node.id,
                ),
            )
        if node.kind is NodeKind.EXIT and outs:
            add(
                i,
                error(
                    "E005",
                    f"exit {node.id!r} has outgoing flow",
                    node.span,
                    ref=node.id,
                ),
            )
        if node.kind not in DECISION_KINDS:
            labelled = [e for e in outs if e.criterion]
            for e in labelled:
                add(
                    n_nodes + doc.edges.index(e),
                    warning(
                        "W004",
                        f"criterion label on flow {e.id!r} out of non-decision {node.id!r}",
                        e.span,
                        ref=e.id,
                    ),
                )
            if node.kind is NodeKind.ACTIVITY and len(labelled) >= 2:
                add(
                    i,
                    warning(
                        "W005",
                        f"activity {node.id!r} has {len(labelled)} criterion-labelled "
                        "out-edges; this is most likely a decision point",
                        node.span,
                        ref=node.id,
                    ),
                )

    # W003 dependencies that never cross a lane
    for i, edge in enumerate(doc.edges):
        if edge.kind is not EdgeKind.DEPENDENCY:
            continue
        src = doc.node(edge.from_id)
        dst = doc.node(edge.to_id)
        if src is not None and dst is not None and src.lane == dst.lane:
            add(
                n_nodes + i,
                warning(
                    "W003",
                    f"dependency {edge.id!r} stays within a single lane",
                    edge.span,
                    ref=edge.id,
                ),
            )

    # E008 flow cycles
    cycle = _flow_cycle(doc)
    if cycle is not None:
        first = min(node_index.get(n, 0) for n in cycle)
        add(
            first,
            error("E008", f"flow cycle: {' -> '.join(cycle)}", ref=cycle[0]),
        )

    # W001 unreachable nodes (skipped when the graph is cyclic or dangling,
    # where reachability is not meaningful)
    if cycle is None and all(
        e.kind is EdgeKind.MULTI_LEVEL or (e.from_id in node_index and e.to_id in node_index)
        for e in doc.edges
    ):
        entries, _ = entry_exit_sets(doc)
        reached = reachable_set(doc, entries) if entries else set()
        for i, node in enumerate(doc.nodes):
            if node.id not in reached:
                add(
                    i,
                    warning(
                        "W001",
                        f"node {node.id!r} is unreachable from the entries",
                        node.span,
                        ref=node.id,
                    ),
                )

    # E011: nested-decision sub-maps must expose outcomes matching the
    # decision's criterion set.
    if rs is not None:
        for i, node in enumerate(doc.nodes):
            if node.kind is not NodeKind.NESTED_DECISION:
                continue
            sub = rs.set.doc(node.nested_ref or "")
            if sub is None:
                continue
            outcomes = sorted(
                {n.outcome_label for n in sub.nodes if n.kind is NodeKind.EXIT and n.outcome_label}
            )
            criteria = sorted(
                {e.criterion for e in doc.out_edges(node.id, EdgeKind.FLOW) if e.criterion}
            )
            if len(outcomes) < 2:
                add(
                    i,
                    error(
                        "E011",
                        f"nested decision {node.id!r}: sub-map {sub.id!r} has "
                        f"{len(outcomes)} distinct outcome label(s); at least two required",
                        node.span,
                        ref=node.id,
                    ),
                )
            elif outcomes != criteria:
                add(
                    i,
                    error(
                        "E011",
                        f"nested decision {node.id!r}: sub-map outcomes {outcomes} do not "
                        f"match criterion set {criteria}",
                        node.span,
                        ref=node.id,
                    ),
                )

    found.sort(key=lambda item: (item[0], item[1], item[2].message))
    return [diag for _, _, diag in found]


def check(rs: ResolvedSet) -> list[Diagnostic]:
    """Full rule sweep over a resolved set, deterministically ordered."""
    diagnostics: list[Diagnostic] = []
    for doc in rs.set.docs:
        diagnostics.extend(check_doc(doc, rs))
    return diagnostics


def check_set(lawmap_set: LawmapSet) -> tuple[ResolvedSet | None, list[Diagnostic]]:
    """Resolve then check; the one-call form used by the CLI and server."""
    rs, diagnostics = resolve_set(lawmap_set)
    if rs is None:
        return None, diagnostics
    return rs, check(rs)
