"""Core lawmap data model.

Immutable value types for lawmap documents (lanes, nodes, edges, source
references, explanations) plus the basic graph queries every other module
builds on. Semantic validation lives in :mod:`lawmap.validate`; this module
only enforces cheap local invariants so that broken documents can still be
constructed, inspected and diagnosed.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field


class NodeKind(enum.Enum):
    ENTRY = "Entry"
    EXIT = "Exit"
    ACTIVITY = "Activity"
    NESTED_ACTIVITY = "NestedActivity"
    DECISION = "Decision"
    NESTED_DECISION = "NestedDecision"


class EdgeKind(enum.Enum):
    FLOW = "Flow"
    DEPENDENCY = "Dependency"
    MULTI_LEVEL = "MultiLevel"


class ExplanationKind(enum.Enum):
    RATIONALE = "Rationale"
    TASK_DESCRIPTION = "TaskDescription"
    CLIENT_ADVICE = "ClientAdvice"
    RECORD_KEEPING = "RecordKeeping"
    CORRESPONDENCE = "Correspondence"
    OTHER = "Other"


class RefKind(enum.Enum):
    STATUTE = "Statute"
    CASE_LAW = "CaseLaw"
    PRACTICE_RULE = "PracticeRule"
    TEXT = "Text"


NESTED_KINDS = frozenset({NodeKind.NESTED_ACTIVITY, NodeKind.NESTED_DECISION})
DECISION_KINDS = frozenset({NodeKind.DECISION, NodeKind.NESTED_DECISION})


@dataclass(frozen=True)
class Span:
    """1-based source location range. Excluded from structural equality."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.end_line, self.end_col) < (self.start_line, self.start_col):
            raise ValueError("span end precedes start")


@dataclass(frozen=True)
class Explanation:
    kind: ExplanationKind
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("explanation text must be non-empty")


@dataclass(frozen=True)
class SourceRef:
    """Traceability citation back to statute, case law, practice rule or text."""

    kind: RefKind
    act: str | None = None
    year: int | None = None
    section_path: tuple[str, ...] = ()
    citation: str | None = None
    quote: str | None = None
    note: str | None = None

    def __post_init__(self) -> None:
        if self.kind is RefKind.STATUTE and (not self.act or not self.section_path):
            raise ValueError("statute ref requires act and section_path")
        if self.kind is RefKind.CASE_LAW and not self.citation:
            raise ValueError("case-law ref requires citation")

    def display(self) -> str:
        """Human-readable citation string (used in footnotes and the UI)."""
        if self.kind is RefKind.STATUTE:
            text = f"{self.act}, s {''.join(self.section_path)}"
        elif self.kind is RefKind.CASE_LAW:
            text = self.citation or ""
        else:
            text = self.note or ""
        if self.kind is RefKind.PRACTICE_RULE:
            text = f"Practice rule: {text}"
        if self.quote:
            text += f' — "{self.quote}"'
        return text


@dataclass(frozen=True)
class Lane:
    id: str
    label: str


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    label: str
    lane: str | None = None
    prompt: str | None = None
    nested_ref: str | None = None
    outcome_label: str | None = None
    explanations: tuple[Explanation, ...] = ()
    refs: tuple[SourceRef, ...] = ()
    span: Span | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if (self.nested_ref is not None) != (self.kind in NESTED_KINDS):
            raise ValueError(
                f"node {self.id!r}: nested_ref present iff kind is nested "
                f"(kind={self.kind.value}, nested_ref={self.nested_ref!r})"
            )
        if self.outcome_label is not None and self.kind is not NodeKind.EXIT:
            raise ValueError(f"node {self.id!r}: outcome_label only allowed on Exit nodes")


@dataclass(frozen=True)
class Edge:
    id: str
    kind: EdgeKind
    from_id: str
    to_id: str
    criterion: str | None = None
    explanations: tuple[Explanation, ...] = ()
    refs: tuple[SourceRef, ...] = ()
    span: Span | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind is EdgeKind.DEPENDENCY and self.criterion is not None:
            raise ValueError(f"edge {self.id!r}: dependency edges never carry a criterion")


def multilevel_endpoint(qualified: str) -> tuple[str, str]:
    """Split a MultiLevel endpoint ``doc.node`` into its parts."""
    doc_id, sep, node_id = qualified.partition(".")
    if not sep or not doc_id or not node_id:
        raise ValueError(f"multi-level endpoint must be 'doc.node', got {qualified!r}")
    return doc_id, node_id


@dataclass(frozen=True)
class LawmapDoc:
    """One named lawmap: lanes, nodes, edges and document-level provenance.

    Documents with dangling edge endpoints or duplicate ids are constructible
    (the validator reports them); lookup helpers resolve to the first
    declaration.
    """

    id: str
    title: str
    lanes: tuple[Lane, ...] = ()
    nodes: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()
    source_refs: tuple[SourceRef, ...] = ()
    origin_span: Span | None = field(default=None, compare=False)

    def node(self, node_id: str) -> Node | None:
        for n in self.nodes:
            if n.id == node_id:
                return n
        return None

    def lane_by_id(self, lane_id: str) -> Lane | None:
        for lane in self.lanes:
            if lane.id == lane_id:
                return lane
        return None

    def edge(self, edge_id: str) -> Edge | None:
        for e in self.edges:
            if e.id == edge_id:
                return e
        return None

    def out_edges(self, node_id: str, kind: EdgeKind | None = None) -> list[Edge]:
        return [
            e
            for e in self.edges
            if e.from_id == node_id and (kind is None or e.kind is kind)
        ]

    def in_edges(self, node_id: str, kind: EdgeKind | None = None) -> list[Edge]:
        return [
            e
            for e in self.edges
            if e.to_id == node_id and (kind is None or e.kind is kind)
        ]


@dataclass(frozen=True)
class LawmapSet:
    """A group of linked lawmap documents with a designated root."""

    docs: tuple[LawmapDoc, ...]
    root: str

    def __post_init__(self) -> None:
        if self.doc(self.root) is None:
            raise ValueError(f"root document {self.root!r} not present in set")

    def doc(self, doc_id: str) -> LawmapDoc | None:
        for d in self.docs:
            if d.id == doc_id:
                return d
        return None

    @property
    def root_doc(self) -> LawmapDoc:
        d = self.doc(self.root)
        assert d is not None
        return d


def entry_exit_sets(doc: LawmapDoc) -> tuple[list[str], list[str]]:
    """All Entry node ids and all Exit node ids, in declaration order."""
    entries = [n.id for n in doc.nodes if n.kind is NodeKind.ENTRY]
    exits = [n.id for n in doc.nodes if n.kind is NodeKind.EXIT]
    return entries, exits


def reachable_set(doc: LawmapDoc, start: list[str] | tuple[str, ...]) -> set[str]:
    """Transitive closure over Flow edges from ``start``.

    Dependency and MultiLevel edges do not convey reachability.

    Raises:
        KeyError: if a start id does not exist in the document.
    """
    known = {n.id for n in doc.nodes}
    for node_id in start:
        if node_id not in known:
            raise KeyError(f"unknown start node id: {node_id!r}")
    succ: dict[str, list[str]] = {}
    for e in doc.edges:
        if e.kind is EdgeKind.FLOW:
            succ.setdefault(e.from_id, []).append(e.to_id)
    seen = set(start)
    queue = deque(start)
    while queue:
        current = queue.popleft()
        for nxt in succ.get(current, []):
            if nxt in known and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen
