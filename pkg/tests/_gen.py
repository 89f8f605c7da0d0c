"""Seeded random generators for the property suites.

Everything takes an explicit ``random.Random`` so each suite pins its own
seed and the generated corpora stay byte-stable across runs.
"""

from __future__ import annotations

import random

from lawmap import (
    Edge,
    EdgeKind,
    Explanation,
    ExplanationKind,
    Lane,
    LawmapDoc,
    LawmapSet,
    Node,
    NodeKind,
    RefKind,
    SourceRef,
)

_WORDS = (
    "notice", "tenancy", "apply", "court", "serve", "grant", "review",
    "title", "deed", "contract", "rent", "hearing", "party", "client",
    "search", "register", "complete", "oppose", "term", "request",
)

_SPICE = ('with "quotes"', "a\\backslash", "tab\there", "line\nbreak", "trailing ")


def words(rng: random.Random, low: int = 1, high: int = 5) -> str:
    text = " ".join(rng.choice(_WORDS) for _ in range(rng.randint(low, high)))
    if rng.random() < 0.1:
        text += " " + rng.choice(_SPICE)
    return text


def _maybe_ref(rng: random.Random) -> tuple[SourceRef, ...]:
    roll = rng.random()
    if roll < 0.5:
        return ()
    if roll < 0.7:
        return (
            SourceRef(
                kind=RefKind.STATUTE,
                act=f"{words(rng, 1, 2).title()} Act",
                section_path=(str(rng.randint(1, 99)),)
                + ((f"({rng.randint(1, 9)})",) if rng.random() < 0.5 else ()),
                quote=words(rng) if rng.random() < 0.3 else None,
            ),
        )
    if roll < 0.8:
        return (SourceRef(kind=RefKind.CASE_LAW, citation=f"{words(rng, 1, 2)} [1990] 1 WLR {rng.randint(1, 999)}"),)
    if roll < 0.9:
        return (SourceRef(kind=RefKind.PRACTICE_RULE, note=words(rng)),)
    return (SourceRef(kind=RefKind.TEXT, note=words(rng), quote=words(rng)),)


def _maybe_notes(rng: random.Random) -> tuple[Explanation, ...]:
    if rng.random() < 0.6:
        return ()
    kinds = list(ExplanationKind)
    return tuple(
        Explanation(rng.choice(kinds), words(rng)) for _ in range(rng.randint(1, 2))
    )


def gen_doc(rng: random.Random, doc_id: str = "g", max_nodes: int = 40) -> LawmapDoc:
    """An arbitrary structurally well-formed document for round-trip tests.

    May be semantically broken (dangling nested refs, unreachable nodes);
    the round-trip property only needs parseability.
    """
    lanes = tuple(
        Lane(f"lane{i}", words(rng, 1, 2)) for i in range(rng.randint(0, 3))
    )
    lane_ids: tuple[str | None, ...] = tuple(lane.id for lane in lanes) or (None,)
    n = rng.randint(2, max_nodes)
    nodes: list[Node] = []
    for i in range(n):
        kind = rng.choice(list(NodeKind))
        nested_ref = f"sub{rng.randint(0, 5)}" if kind in (NodeKind.NESTED_ACTIVITY, NodeKind.NESTED_DECISION) else None
        nodes.append(
            Node(
                id=f"n{i}",
                kind=kind,
                label="" if (nested_ref is None and rng.random() < 0.2) else words(rng),
                lane=rng.choice(lane_ids) if rng.random() < 0.5 else None,
                prompt=words(rng) if kind in (NodeKind.DECISION, NodeKind.NESTED_DECISION) and rng.random() < 0.7 else None,
                nested_ref=nested_ref,
                outcome_label=words(rng, 1, 2) if kind is NodeKind.EXIT and rng.random() < 0.5 else None,
                explanations=_maybe_notes(rng),
                refs=_maybe_ref(rng),
            )
        )
    edges: list[Edge] = []
    for _ in range(rng.randint(1, 2 * n)):
        roll = rng.random()
        a, b = rng.choice(nodes).id, rng.choice(nodes).id
        if roll < 0.7:
            edges.append(
                Edge(
                    id="tmp",
                    kind=EdgeKind.FLOW,
                    from_id=a,
                    to_id=b,
                    criterion=words(rng, 1, 2) if rng.random() < 0.4 else None,
                    explanations=_maybe_notes(rng),
                    refs=_maybe_ref(rng),
                )
            )
        elif roll < 0.9:
            edges.append(Edge(id="tmp", kind=EdgeKind.DEPENDENCY, from_id=a, to_id=b))
        else:
            edges.append(
                Edge(
                    id="tmp",
                    kind=EdgeKind.MULTI_LEVEL,
                    from_id=f"{doc_id}.{a}",
                    to_id=f"sub{rng.randint(0, 5)}.{b}",
                )
            )
    renumbered = tuple(
        Edge(
            id=f"e{i + 1}",
            kind=e.kind,
            from_id=e.from_id,
            to_id=e.to_id,
            criterion=e.criterion,
            explanations=e.explanations,
            refs=e.refs,
        )
        for i, e in enumerate(edges)
    )
    return LawmapDoc(
        id=doc_id,
        title=words(rng),
        lanes=lanes,
        nodes=tuple(nodes),
        edges=renumbered,
        source_refs=_maybe_ref(rng),
    )


# ─── Error-free single-path maps for the traversal oracle ───────────────────


def _decision_ref(rng: random.Random) -> tuple[SourceRef, ...]:
    return (
        SourceRef(
            kind=RefKind.STATUTE,
            act="Test Act",
            section_path=(str(rng.randint(1, 60)),),
        ),
    )


def gen_clean_doc(
    rng: random.Random, doc_id: str = "m", max_nodes: int = 12
) -> LawmapDoc:
    """An Error-free map with one entry and no parallel splits.

    Every non-decision node has at most one outgoing flow edge, so each
    total assignment induces exactly one entry-to-exit path. Merges (nodes
    with several incoming edges) are allowed.
    """
    nodes: list[Node] = [Node(id="n0", kind=NodeKind.ENTRY, label="Start")]
    capacity: dict[str, int] = {"n0": 1}
    branch_labels: dict[str, list[str]] = {}
    edges: list[Edge] = []

    def add_flow(parent: str, child: str) -> None:
        criterion = None
        if parent in branch_labels:
            criterion = f"opt{len(branch_labels[parent]) + 1}"
            branch_labels[parent].append(criterion)
        edges.append(
            Edge(id="tmp", kind=EdgeKind.FLOW, from_id=parent, to_id=child, criterion=criterion)
        )
        capacity[parent] -= 1

    core = rng.randint(2, max(2, max_nodes - 3))
    for i in range(1, core + 1):
        parents = [p for p, cap in capacity.items() if cap > 0]
        if not parents:
            break
        node_id = f"n{i}"
        if rng.random() < 0.35:
            kind = NodeKind.DECISION
            capacity[node_id] = rng.randint(2, 3)
            branch_labels[node_id] = []
            node = Node(
                id=node_id,
                kind=kind,
                label=words(rng, 1, 3),
                prompt=words(rng, 2, 5) + "?",
                refs=_decision_ref(rng),
            )
        else:
            capacity[node_id] = 1
            node = Node(id=node_id, kind=NodeKind.ACTIVITY, label=words(rng, 1, 3))
        nodes.append(node)
        chosen = rng.sample(parents, 2) if len(parents) >= 2 and rng.random() < 0.2 else [rng.choice(parents)]
        for parent in chosen:
            add_flow(parent, node_id)

    exit_seq = 0

    def new_exit() -> str:
        nonlocal exit_seq
        exit_seq += 1
        exit_id = f"x{exit_seq}"
        nodes.append(
            Node(
                id=exit_id,
                kind=NodeKind.EXIT,
                label=words(rng, 1, 3),
                outcome_label=f"O{exit_seq}",
            )
        )
        capacity[exit_id] = 0
        return exit_id

    for node in list(nodes):
        while capacity.get(node.id, 0) > 0:
            # decisions keep at least two branches; everything else exactly one
            add_flow(node.id, new_exit())

    renumbered = tuple(
        Edge(id=f"e{i + 1}", kind=e.kind, from_id=e.from_id, to_id=e.to_id, criterion=e.criterion)
        for i, e in enumerate(edges)
    )
    return LawmapDoc(id=doc_id, title=words(rng), nodes=tuple(nodes), edges=renumbered)


def gen_clean_set(rng: random.Random, max_nodes: int = 12) -> LawmapSet:
    doc = gen_clean_doc(rng, "m", max_nodes)
    return LawmapSet(docs=(doc,), root="m")


def doc_decisions(doc: LawmapDoc) -> list[Node]:
    return [n for n in doc.nodes if n.kind in (NodeKind.DECISION, NodeKind.NESTED_DECISION)]


def decision_options(doc: LawmapDoc, node_id: str) -> list[str]:
    return [
        e.criterion or ""
        for e in doc.out_edges(node_id, EdgeKind.FLOW)
    ]


def oracle_walk(doc: LawmapDoc, assignment: dict[str, str]) -> tuple[list[str], str]:
    """Single-path reference walk: follow flow edges from the entry,
    branching by the assignment at decisions. Returns (visited ids, exit id)."""
    entry = next(n for n in doc.nodes if n.kind is NodeKind.ENTRY)
    visited: list[str] = []
    current = entry.id
    while True:
        visited.append(current)
        node = doc.node(current)
        assert node is not None
        if node.kind is NodeKind.EXIT:
            return visited, current
        outs = doc.out_edges(current, EdgeKind.FLOW)
        if node.kind is NodeKind.DECISION:
            edge = next(e for e in outs if e.criterion == assignment[current])
        else:
            assert len(outs) == 1, f"{current} has {len(outs)} out-flows"
            edge = outs[0]
        current = edge.to_id


# ─── Nested sets for flatten equivalence ────────────────────────────────────


def _sub_activity_doc(rng: random.Random, doc_id: str) -> LawmapDoc:
    length = rng.randint(1, 3)
    nodes = [Node(id="en", kind=NodeKind.ENTRY, label="Begin")]
    edges = []
    prev = "en"
    for i in range(length):
        node_id = f"a{i}"
        nodes.append(Node(id=node_id, kind=NodeKind.ACTIVITY, label=words(rng, 1, 3)))
        edges.append(Edge(id=f"e{len(edges) + 1}", kind=EdgeKind.FLOW, from_id=prev, to_id=node_id))
        prev = node_id
    nodes.append(Node(id="ex", kind=NodeKind.EXIT, label="Done"))
    edges.append(Edge(id=f"e{len(edges) + 1}", kind=EdgeKind.FLOW, from_id=prev, to_id="ex"))
    return LawmapDoc(id=doc_id, title=words(rng), nodes=tuple(nodes), edges=tuple(edges))


def _sub_decision_doc(rng: random.Random, doc_id: str, outcomes: list[str]) -> LawmapDoc:
    nodes = [
        Node(id="en", kind=NodeKind.ENTRY, label="Begin"),
        Node(
            id="d",
            kind=NodeKind.DECISION,
            label=words(rng, 1, 3),
            prompt=words(rng, 2, 4) + "?",
            refs=_decision_ref(rng),
        ),
    ]
    edges = [Edge(id="e1", kind=EdgeKind.FLOW, from_id="en", to_id="d")]
    for i, outcome in enumerate(outcomes):
        exit_id = f"x{i}"
        nodes.append(
            Node(id=exit_id, kind=NodeKind.EXIT, label=words(rng, 1, 2), outcome_label=outcome)
        )
        edges.append(
            Edge(
                id=f"e{len(edges) + 1}",
                kind=EdgeKind.FLOW,
                from_id="d",
                to_id=exit_id,
                criterion=outcome,
            )
        )
    return LawmapDoc(id=doc_id, title=words(rng), nodes=tuple(nodes), edges=tuple(edges))


def gen_nested_set(rng: random.Random, max_nodes: int = 10) -> LawmapSet:
    """A clean root whose activities/decisions are partly nested sub-maps."""
    root = gen_clean_doc(rng, "m", max_nodes)
    subs: list[LawmapDoc] = []
    new_nodes: list[Node] = []
    for node in root.nodes:
        if node.kind is NodeKind.ACTIVITY and rng.random() < 0.3:
            sub = _sub_activity_doc(rng, f"s{len(subs)}")
            subs.append(sub)
            new_nodes.append(
                Node(
                    id=node.id,
                    kind=NodeKind.NESTED_ACTIVITY,
                    label=node.label,
                    nested_ref=sub.id,
                )
            )
        elif node.kind is NodeKind.DECISION and rng.random() < 0.4:
            options = decision_options(root, node.id)
            sub = _sub_decision_doc(rng, f"s{len(subs)}", options)
            subs.append(sub)
            new_nodes.append(
                Node(
                    id=node.id,
                    kind=NodeKind.NESTED_DECISION,
                    label=node.label,
                    prompt=node.prompt,
                    nested_ref=sub.id,
                    refs=node.refs,
                )
            )
        else:
            new_nodes.append(node)
    new_root = LawmapDoc(
        id=root.id,
        title=root.title,
        nodes=tuple(new_nodes),
        edges=root.edges,
    )
    return LawmapSet(docs=(new_root, *subs), root="m")


# ─── Random outlines ────────────────────────────────────────────────────────


def _alpha_marker(i: int) -> str:
    return chr(ord("a") + i)


_ROMANS = ("i", "ii", "iii", "iv", "v")


def gen_outline_text(rng: random.Random) -> str:
    counter = [0]

    def item_lines(depth: int, index: int, sibling_count: int) -> list[str]:
        if depth == 0:
            counter[0] += 1
            marker = str(counter[0])
        elif depth == 1:
            marker = _alpha_marker(index)
        elif depth == 2:
            marker = _ROMANS[index]
        else:
            marker = str(index + 1)
        text = words(rng, 2, 6).replace("\n", " ").capitalize()
        tail = ""
        if index + 1 < sibling_count and rng.random() < 0.6:
            tail = "; or" if rng.random() < 0.5 else "; and"
        lines = ["  " * (depth + 1) + f"{marker}. {text}{tail}"]
        if depth < 3 and rng.random() < 0.3:
            child_count = rng.randint(1, 3)
            for ci in range(child_count):
                lines.extend(item_lines(depth + 1, ci, child_count))
        return lines

    lines: list[str] = ["Where:"]
    where_count = rng.randint(1, 4)
    for i in range(where_count):
        lines.extend(item_lines(0, i, where_count))
    if rng.random() < 0.7:
        lines.append("Unless:")
        unless_count = rng.randint(1, 2)
        for i in range(unless_count):
            lines.extend(item_lines(0, i, unless_count))
    if rng.random() < 0.7:
        lines.append("In which case:")
        counter[0] += 1
        lines.append(f"  {counter[0]}. " + words(rng, 2, 6).replace("\n", " ").capitalize())
    if rng.random() < 0.7:
        lines.append("Otherwise:")
        counter[0] += 1
        lines.append(f"  {counter[0]}. " + words(rng, 2, 6).replace("\n", " ").capitalize())
    return "\n".join(lines) + "\n"
