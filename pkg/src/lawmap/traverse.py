"""Deterministic execution semantics for lawmaps.

Token-flow over the acyclic flow graph: entries start live, activities fan
out to all flow successors, an answered decision activates exactly the
matching branch, and a join waits for every incoming flow edge that can
still fire (edges pruned by decisions taken are not waited for).
Dependency edges gate completion: a node whose prerequisites have not
completed shows up in ``blocked`` with the nodes it is waiting on.

Nodes are addressed by path-id: ``root/<node>`` in the root document and
``root/<nested node>.<inner node>`` inside nested maps. In ``atomic`` mode a
nested activity completes immediately and a nested decision is answered
directly by criterion label; in ``descend`` mode the sub-map runs first and
a nested decision selects the branch whose criterion equals the reached
exit's outcome label.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .model import (
    DECISION_KINDS,
    EdgeKind,
    Edge,
    Lane,
    LawmapDoc,
    LawmapSet,
    NESTED_KINDS,
    Node,
    NodeKind,
)
from .validate import ResolvedSet, check
from .diagnostics import Diagnostic, Severity

Assignment = dict[str, str]

ROOT_PREFIX = "root/"


class TraversalError(Exception):
    """Base class for traversal failures."""


class ValidationFailedError(TraversalError):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("set has validation errors; traversal refused")
        self.diagnostics = diagnostics


class UnknownDecisionError(TraversalError):
    pass


class InvalidLabelError(TraversalError):
    def __init__(self, message: str, options: tuple[str, ...] = ()):
        super().__init__(message)
        self.options = options


class NotPendingError(TraversalError):
    pass


class NotAnsweredError(TraversalError):
    pass


class RouteStatus(enum.Enum):
    COMPLETE = "Complete"
    AWAITING_DECISION = "AwaitingDecision"
    BLOCKED = "Blocked"


@dataclass(frozen=True)
class Step:
    node: str
    index: int


@dataclass(frozen=True)
class PendingDecision:
    node: str
    prompt: str
    options: tuple[str, ...]


@dataclass(frozen=True)
class BlockedNode:
    node: str
    waiting_on: tuple[str, ...]


@dataclass(frozen=True)
class ReachedExit:
    node: str
    outcome_label: str | None


@dataclass(frozen=True)
class Route:
    status: RouteStatus
    completed: tuple[Step, ...]
    live_edges: frozenset[str]
    pending: tuple[PendingDecision, ...]
    blocked: tuple[BlockedNode, ...]
    reached_exits: tuple[ReachedExit, ...]
    answers: tuple[tuple[str, str], ...]
    mode: str
    set_signature: str
    withheld: frozenset[str] = frozenset()

    @property
    def assignment(self) -> Assignment:
        return dict(self.answers)

    def completed_ids(self) -> set[str]:
        return {step.node for step in self.completed}

    def pending_ids(self) -> set[str]:
        return {p.node for p in self.pending}


@dataclass(frozen=True)
class RouteDelta:
    only_in_a: frozenset[str]
    only_in_b: frozenset[str]
    common: frozenset[str]
    exits_only_in_a: frozenset[str]
    exits_only_in_b: frozenset[str]


def route_to_json(route: Route) -> dict:
    """Spec wire shape with stable ordering; used by the CLI and the API."""
    return {
        "status": route.status.value,
        "completed": [{"node": s.node, "index": s.index} for s in route.completed],
        "pending": [
            {"node": p.node, "prompt": p.prompt, "options": list(p.options)}
            for p in route.pending
        ],
        "blocked": [
            {"node": b.node, "waitingOn": list(b.waiting_on)} for b in route.blocked
        ],
        "reachedExits": [
            {"node": e.node, **({"outcome": e.outcome_label} if e.outcome_label else {})}
            for e in route.reached_exits
        ],
    }


def serialize_route(route: Route) -> str:
    return json.dumps(route_to_json(route), indent=2, ensure_ascii=False) + "\n"


# ─── Assignment validation ──────────────────────────────────────────────────


def decision_paths(rs: ResolvedSet, mode: str) -> dict[str, tuple[LawmapDoc, Node]]:
    """All answerable decision path-ids for the given mode."""
    found: dict[str, tuple[LawmapDoc, Node]] = {}

    def walk(doc: LawmapDoc, prefix: str) -> None:
        for node in doc.nodes:
            path = prefix + node.id
            if node.kind in DECISION_KINDS:
                found[path] = (doc, node)
            if node.kind in NESTED_KINDS and mode == "descend":
                walk(rs.doc(node.nested_ref or ""), path + ".")

    walk(rs.root_doc, ROOT_PREFIX)
    return found


def _criteria(doc: LawmapDoc, node: Node) -> tuple[str, ...]:
    return tuple(
        e.criterion or "" for e in doc.out_edges(node.id, EdgeKind.FLOW)
    )


def _validate_assignment(rs: ResolvedSet, assignment: Assignment, mode: str) -> None:
    paths = decision_paths(rs, mode)
    for path, label in assignment.items():
        if path not in paths:
            raise UnknownDecisionError(f"unknown decision id: {path!r}")
        doc, node = paths[path]
        options = _criteria(doc, node)
        if label not in options:
            raise InvalidLabelError(
                f"label {label!r} is not a criterion of decision {path!r}; "
                f"options: {list(options)}",
                options,
            )


# ─── Engine ──────────────────────────────────────────────────────────────────

_UNSEEN, _ACTIVATED, _COMPLETED, _DEAD = range(4)
_EDGE_OPEN, _EDGE_TRAVERSED, _EDGE_DEAD = range(3)


class _Engine:
    def __init__(
        self,
        rs: ResolvedSet,
        assignment: Assignment,
        mode: str,
        withheld: frozenset[str],
    ):
        self.rs = rs
        self.assignment = assignment
        self.mode = mode
        self.withheld = withheld
        self.counter = 0
        self.completed: list[Step] = []
        self.live_edges: set[str] = set()
        self.pending: list[PendingDecision] = []
        self.blocked: list[BlockedNode] = []
        self.reached_exits: list[ReachedExit] = []

    def run(self) -> Route:
        root = self.rs.root_doc
        self.run_doc(root, ROOT_PREFIX, is_root=True)
        if self.pending:
            status = RouteStatus.AWAITING_DECISION
        elif self.blocked:
            status = RouteStatus.BLOCKED
        else:
            status = RouteStatus.COMPLETE
        return Route(
            status=status,
            completed=tuple(self.completed),
            live_edges=frozenset(self.live_edges),
            pending=tuple(self.pending),
            blocked=tuple(self.blocked),
            reached_exits=tuple(self.reached_exits),
            answers=tuple(sorted(self.assignment.items())),
            mode=self.mode,
            set_signature=self.rs.set.root,
            withheld=self.withheld,
        )

    def run_doc(self, doc: LawmapDoc, prefix: str, is_root: bool = False) -> bool:
        """Run one document instance to its fixpoint; True when complete."""
        node_state: dict[str, int] = {}
        edge_state: dict[str, int] = {}
        flow_in: dict[str, list[Edge]] = {}
        flow_out: dict[str, list[Edge]] = {}
        dep_prereqs: dict[str, list[str]] = {}
        sub_done: dict[str, bool] = {}
        for e in doc.edges:
            if e.kind is EdgeKind.FLOW:
                flow_in.setdefault(e.to_id, []).append(e)
                flow_out.setdefault(e.from_id, []).append(e)
            elif e.kind is EdgeKind.DEPENDENCY:
                dep_prereqs.setdefault(e.to_id, []).append(e.from_id)
        for n in doc.nodes:
            node_state[n.id] = _UNSEEN
        for e in doc.edges:
            if e.kind is EdgeKind.FLOW:
                edge_state[e.id] = _EDGE_OPEN

        def kill_out(node_id: str) -> None:
            for e in flow_out.get(node_id, []):
                edge_state[e.id] = _EDGE_DEAD

        def complete(node: Node, chosen: Edge | None = None) -> None:
            node_state[node.id] = _COMPLETED
            self.completed.append(Step(prefix + node.id, self.counter))
            self.counter += 1
            outs = flow_out.get(node.id, [])
            if node.kind in DECISION_KINDS:
                for e in outs:
                    if chosen is not None and e.id == chosen.id:
                        edge_state[e.id] = _EDGE_TRAVERSED
                        self.live_edges.add(prefix + e.id)
                    else:
                        edge_state[e.id] = _EDGE_DEAD
            else:
                for e in outs:
                    edge_state[e.id] = _EDGE_TRAVERSED
                    self.live_edges.add(prefix + e.id)
            if node.kind is NodeKind.EXIT and is_root:
                self.reached_exits.append(
                    ReachedExit(prefix + node.id, node.outcome_label)
                )

        def deps_met(node: Node) -> bool:
            return all(
                node_state.get(p) == _COMPLETED for p in dep_prereqs.get(node.id, [])
            )

        changed = True
        while changed:
            changed = False
            for node in doc.nodes:
                state = node_state[node.id]
                if state == _UNSEEN:
                    if node.kind is NodeKind.ENTRY:
                        node_state[node.id] = _ACTIVATED
                        changed = True
                    else:
                        incoming = flow_in.get(node.id, [])
                        states = [edge_state[e.id] for e in incoming]
                        if all(s == _EDGE_DEAD for s in states):
                            node_state[node.id] = _DEAD
                            kill_out(node.id)
                            changed = True
                        elif all(s != _EDGE_OPEN for s in states):
                            node_state[node.id] = _ACTIVATED
                            changed = True
                    state = node_state[node.id]
                if state != _ACTIVATED:
                    continue
                path = prefix + node.id
                if path in self.withheld:
                    continue
                if node.kind in (NodeKind.ENTRY, NodeKind.EXIT):
                    complete(node)
                    changed = True
                elif node.kind is NodeKind.ACTIVITY:
                    if deps_met(node):
                        complete(node)
                        changed = True
                elif node.kind is NodeKind.NESTED_ACTIVITY:
                    if not deps_met(node):
                        continue
                    if self.mode == "atomic":
                        complete(node)
                        changed = True
                        continue
                    if node.id not in sub_done:
                        sub = self.rs.doc(node.nested_ref or "")
                        sub_done[node.id] = self.run_doc(sub, path + ".")
                    if sub_done[node.id]:
                        complete(node)
                        changed = True
                elif node.kind in DECISION_KINDS:
                    if not deps_met(node):
                        continue
                    if path in self.assignment:
                        label = self.assignment[path]
                        chosen = next(
                            e
                            for e in flow_out.get(node.id, [])
                            if e.criterion == label
                        )
                        complete(node, chosen)
                        changed = True
                        continue
                    if node.kind is NodeKind.NESTED_DECISION and self.mode == "descend":
                        if node.id not in sub_done:
                            sub = self.rs.doc(node.nested_ref or "")
                            sub_done[node.id] = self.run_doc(sub, path + ".")
                        if sub_done[node.id]:
                            outcome = self._sub_outcome(node, path)
                            chosen = next(
                                (
                                    e
                                    for e in flow_out.get(node.id, [])
                                    if e.criterion == outcome
                                ),
                                None,
                            )
                            if chosen is None:
                                raise TraversalError(
                                    f"nested decision {path!r}: sub-map outcome "
                                    f"{outcome!r} matches no branch criterion"
                                )
                            complete(node, chosen)
                            changed = True

        # Collect the frontier in declaration order.
        for node in doc.nodes:
            if node_state[node.id] != _ACTIVATED:
                continue
            path = prefix + node.id
            if node.kind in DECISION_KINDS and path not in self.assignment:
                if node.kind is NodeKind.NESTED_DECISION and self.mode == "descend":
                    continue  # frontier lives inside the sub-map
                if deps_met(node):
                    self.pending.append(
                        PendingDecision(
                            path, node.prompt or node.label, _criteria(doc, node)
                        )
                    )
                    continue
            if path in self.withheld:
                self.blocked.append(BlockedNode(path, ()))
                continue
            waiting = tuple(
                prefix + p
                for p in dep_prereqs.get(node.id, [])
                if node_state.get(p) != _COMPLETED
            )
            if waiting:
                self.blocked.append(BlockedNode(path, waiting))
        return all(s in (_COMPLETED, _DEAD) for s in node_state.values())

    def _sub_outcome(self, node: Node, path: str) -> str | None:
        """Outcome label of the sub-map exit reached for a nested decision."""
        sub_prefix = path + "."
        sub = self.rs.doc(node.nested_ref or "")
        completed = {s.node for s in self.completed}
        for sub_node in sub.nodes:
            if sub_node.kind is NodeKind.EXIT and sub_prefix + sub_node.id in completed:
                if sub_node.outcome_label is not None:
                    return sub_node.outcome_label
        return None


# ─── Public operations ──────────────────────────────────────────────────────


def batch_route(
    rs: ResolvedSet,
    assignment: Assignment | None = None,
    mode: str = "atomic",
    withheld: frozenset[str] | set[str] = frozenset(),
) -> Route:
    """Compute the full route for a set of decision answers.

    ``withheld`` marks activities as externally not-yet-done so dependency
    blocking can be exercised; they and their dependents appear in
    ``blocked``.
    """
    if mode not in ("atomic", "descend"):
        raise ValueError(f"unknown mode: {mode!r}")
    diagnostics = [d for d in check(rs) if d.severity is Severity.ERROR]
    if diagnostics:
        raise ValidationFailedError(diagnostics)
    assignment = dict(assignment or {})
    _validate_assignment(rs, assignment, mode)
    return _Engine(rs, assignment, mode, frozenset(withheld)).run()


def init_route(rs: ResolvedSet, mode: str = "atomic") -> Route:
    """The route before any decision has been answered."""
    return batch_route(rs, {}, mode)


def apply_answer(route: Route, rs: ResolvedSet, decision: str, label: str) -> Route:
    """Answer a pending decision; equals batch recomputation with the union."""
    pending = next((p for p in route.pending if p.node == decision), None)
    if pending is None:
        raise NotPendingError(f"decision {decision!r} is not pending")
    if label not in pending.options:
        raise InvalidLabelError(
            f"label {label!r} is not an option of {decision!r}; "
            f"options: {list(pending.options)}",
            pending.options,
        )
    assignment = route.assignment
    assignment[decision] = label
    return batch_route(rs, assignment, route.mode, route.withheld)


def retract_answer(route: Route, rs: ResolvedSet, decision: str) -> Route:
    """Remove a previously given answer (what-if support)."""
    assignment = route.assignment
    if decision not in assignment:
        raise NotAnsweredError(f"decision {decision!r} has not been answered")
    del assignment[decision]
    return batch_route(rs, assignment, route.mode, route.withheld)


def diff_routes(a: Route, b: Route) -> RouteDelta:
    """Set difference of completed nodes and reached exits between routes."""
    if a.set_signature != b.set_signature:
        raise ValueError("routes come from different lawmap sets")
    ca, cb = a.completed_ids(), b.completed_ids()
    ea = {e.node for e in a.reached_exits}
    eb = {e.node for e in b.reached_exits}
    return RouteDelta(
        only_in_a=frozenset(ca - cb),
        only_in_b=frozenset(cb - ca),
        common=frozenset(ca & cb),
        exits_only_in_a=frozenset(ea - eb),
        exits_only_in_b=frozenset(eb - ea),
    )


# ─── Flattening ──────────────────────────────────────────────────────────────


def flatten(rs: ResolvedSet, depth: int) -> LawmapDoc:
    """Inline nested maps up to ``depth`` levels into one document.

    Spliced node ids become path-qualified (``prep.inner``); sub-map entry
    and exit nodes turn into plain activities wired between the nested
    node's incoming and outgoing edges. A nested decision's branch edges are
    replaced by edges from the sub exit carrying the matching outcome label.
    Depth 0 is the identity on the root document.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    return _flatten_doc(rs, rs.root_doc, depth)


def _flatten_doc(rs: ResolvedSet, doc: LawmapDoc, depth: int) -> LawmapDoc:
    if depth == 0:
        return doc
    nodes: list[Node] = []
    raw_edges: list[Edge] = []
    entries_of: dict[str, list[str]] = {}
    exits_of: dict[str, list[tuple[str, str | None]]] = {}
    nested_here: dict[str, Node] = {}

    for node in doc.nodes:
        if node.kind not in NESTED_KINDS:
            nodes.append(node)
            continue
        nested_here[node.id] = node
        sub = _flatten_doc(rs, rs.doc(node.nested_ref or ""), depth - 1)
        entries_of[node.id] = [
            f"{node.id}.{n.id}" for n in sub.nodes if n.kind is NodeKind.ENTRY
        ]
        exits_of[node.id] = [
            (f"{node.id}.{n.id}", n.outcome_label)
            for n in sub.nodes
            if n.kind is NodeKind.EXIT
        ]
        for sn in sub.nodes:
            kind = sn.kind
            outcome = sn.outcome_label
            if kind in (NodeKind.ENTRY, NodeKind.EXIT):
                kind = NodeKind.ACTIVITY
                outcome = None
            nodes.append(
                Node(
                    id=f"{node.id}.{sn.id}",
                    kind=kind,
                    label=sn.label,
                    lane=node.lane,
                    prompt=sn.prompt,
                    nested_ref=f"{sn.nested_ref}" if sn.nested_ref else None,
                    outcome_label=outcome,
                    explanations=sn.explanations,
                    refs=sn.refs,
                )
            )
        for se in sub.edges:
            if se.kind is EdgeKind.MULTI_LEVEL:
                continue  # links live at set level; dropped on splice
            raw_edges.append(
                Edge(
                    id="tmp",
                    kind=se.kind,
                    from_id=f"{node.id}.{se.from_id}",
                    to_id=f"{node.id}.{se.to_id}",
                    criterion=se.criterion,
                    explanations=se.explanations,
                    refs=se.refs,
                )
            )

    for e in doc.edges:
        if e.kind is EdgeKind.MULTI_LEVEL:
            raw_edges.append(e)
            continue
        from_nested = nested_here.get(e.from_id)
        to_nested = nested_here.get(e.to_id)
        if from_nested is None and to_nested is None:
            raw_edges.append(e)
            continue
        if from_nested is not None and from_nested.kind is NodeKind.NESTED_DECISION and e.kind is EdgeKind.FLOW:
            matching = [
                exit_id
                for exit_id, outcome in exits_of[from_nested.id]
                if outcome == e.criterion
            ]
            sources = matching
            criterion = None
        elif from_nested is not None:
            sources = [exit_id for exit_id, _ in exits_of[from_nested.id]]
            criterion = e.criterion
        else:
            sources = [e.from_id]
            criterion = e.criterion
        if to_nested is not None:
            targets = entries_of[to_nested.id]
        else:
            targets = [e.to_id]
        for src in sources:
            for dst in targets:
                raw_edges.append(
                    Edge(
                        id="tmp",
                        kind=e.kind,
                        from_id=src,
                        to_id=dst,
                        criterion=criterion if e.kind is EdgeKind.FLOW else None,
                        explanations=e.explanations,
                        refs=e.refs,
                    )
                )

    edges = [
        Edge(
            id=f"e{i + 1}",
            kind=e.kind,
            from_id=e.from_id,
            to_id=e.to_id,
            criterion=e.criterion,
            explanations=e.explanations,
            refs=e.refs,
        )
        for i, e in enumerate(raw_edges)
    ]
    return LawmapDoc(
        id=doc.id,
        title=doc.title,
        lanes=tuple(Lane(lane.id, lane.label) for lane in doc.lanes),
        nodes=tuple(nodes),
        edges=tuple(edges),
        source_refs=doc.source_refs,
    )
