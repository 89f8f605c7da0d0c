"""Plain-language logic listings and their compilation to draft lawmaps.

A `.lwo` listing mirrors the layout lawyers use when simplifying a statute:
connective headers (``Where:``, ``Unless:``, ``In which case:``,
``Otherwise:``) followed by indented, enumerated items. Junction words
(``; or`` / ``; and``) at the end of an item relate it to its following
sibling, and ``_underscored_`` spans mark negative emphasis::

    Where:
      1. The first condition; or
      2. The second condition:
        a. With a sub-clause
    Otherwise:
      3. The default consequence.

``compile_outline`` turns a listing into a draft map: one decision per
top-level Where/Unless item (sub-clauses fold into the prompt), or-joined
conditions sharing a downstream merge, In-which-case and Otherwise items
becoming activities that feed distinct exits. Every generated node quotes
its outline item in a Text source reference, so nothing is silently
dropped.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .diagnostics import CODE_REGISTRY, Diagnostic, error, warning
from .model import (
    Edge,
    EdgeKind,
    Explanation,
    ExplanationKind,
    LawmapDoc,
    Node,
    NodeKind,
    RefKind,
    SourceRef,
    Span,
)

CODE_REGISTRY.setdefault("E103", "outline syntax error")
CODE_REGISTRY.setdefault("W101", "enumerator sequence break")


class Connective(enum.Enum):
    WHERE = "Where"
    UNLESS = "Unless"
    IN_WHICH_CASE = "InWhichCase"
    OTHERWISE = "Otherwise"


class Junction(enum.Enum):
    AND = "And"
    OR = "Or"


@dataclass(frozen=True)
class Item:
    marker: str  # "1", "a", "ii", ...
    text: str
    junction: Junction | None = None
    emphasis_not: bool = False
    children: tuple["Item", ...] = ()

    def leaves(self) -> list["Item"]:
        if not self.children:
            return [self]
        out = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def folded_text(self) -> str:
        """The item with its whole subtree concatenated, marker-prefixed."""
        parts = [self.text]
        for child in self.children:
            parts.append(f"{child.marker}. {child.folded_text()}")
        return " ".join(parts)


@dataclass(frozen=True)
class Block:
    connective: Connective
    items: tuple[Item, ...]


@dataclass(frozen=True)
class OutlineDoc:
    blocks: tuple[Block, ...]

    def block(self, connective: Connective) -> Block | None:
        for b in self.blocks:
            if b.connective is connective:
                return b
        return None

    def items_of(self, connective: Connective) -> tuple[Item, ...]:
        out: list[Item] = []
        for b in self.blocks:
            if b.connective is connective:
                out.extend(b.items)
        return tuple(out)


_CONNECTIVES = {
    "where:": Connective.WHERE,
    "unless:": Connective.UNLESS,
    "in which case:": Connective.IN_WHICH_CASE,
    "otherwise:": Connective.OTHERWISE,
}

_ENUM_RE = re.compile(r"^([0-9]+|[a-z]+)\.\s+(.*)$")
_ROMAN_RE = re.compile(r"^[ivxlcdm]+$")


def _roman_value(marker: str) -> int | None:
    if not _ROMAN_RE.match(marker):
        return None
    values = {"i": 1, "v": 5, "x": 10, "l": 50, "c": 100, "d": 500, "m": 1000}
    total = 0
    prev = 0
    for ch in reversed(marker):
        v = values[ch]
        total += v if v >= prev else -v
        prev = max(prev, v)
    return total


def _is_successor(prev: str, current: str) -> bool:
    """Best-effort check that ``current`` follows ``prev`` in some scheme."""
    if prev.isdigit() and current.isdigit():
        return int(current) == int(prev) + 1
    roman_prev, roman_cur = _roman_value(prev), _roman_value(current)
    if roman_prev is not None and roman_cur is not None and roman_cur == roman_prev + 1:
        return True
    if len(prev) == 1 and len(current) == 1 and prev.isalpha() and current.isalpha():
        return ord(current) == ord(prev) + 1
    return False


@dataclass
class _RawItem:
    marker: str
    text: str
    level: int
    line: int
    junction: Junction | None = None
    emphasis_not: bool = False
    children: list["_RawItem"] = field(default_factory=list)

    def freeze(self) -> Item:
        return Item(
            marker=self.marker,
            text=self.text,
            junction=self.junction,
            emphasis_not=self.emphasis_not,
            children=tuple(c.freeze() for c in self.children),
        )


def parse_outline(
    text: str, file_name: str = "<outline>"
) -> tuple[OutlineDoc | None, list[Diagnostic]]:
    """Parse a plain-language listing. Indentation is 2 spaces or one tab
    per level; enumerators are ``1.``, ``a.``, ``i.`` style."""
    diagnostics: list[Diagnostic] = []
    blocks: list[tuple[Connective, list[_RawItem]]] = []

    def span(line_no: int, col: int = 1) -> Span:
        return Span(file_name, line_no, col, line_no, col)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        stripped = raw.strip()
        connective = _CONNECTIVES.get(stripped.lower())
        if connective is not None:
            blocks.append((connective, []))
            continue
        if not blocks:
            diagnostics.append(
                error("E103", "item before any connective header", span(line_no))
            )
            continue
        indent = raw[: len(raw) - len(raw.lstrip(" \t"))]
        spaces = indent.count(" ")
        level = indent.count("\t") + spaces // 2
        if spaces % 2:
            diagnostics.append(
                error("E103", f"inconsistent indentation ({spaces} spaces)", span(line_no))
            )
            continue
        match = _ENUM_RE.match(stripped)
        if not match:
            diagnostics.append(
                error(
                    "E103",
                    f"expected enumerated item (like '1. ...'), got {stripped[:30]!r}",
                    span(line_no),
                )
            )
            continue
        marker, body = match.group(1), match.group(2).strip()
        junction = None
        lowered = body.lower()
        if lowered.endswith("; or"):
            junction = Junction.OR
            body = body[:-4].rstrip()
        elif lowered.endswith("; and"):
            junction = Junction.AND
            body = body[:-5].rstrip()
        emphasis = "_" in body and re.search(r"_[^_]+_", body) is not None
        body = re.sub(r"_([^_]+)_", r"\1", body)
        item = _RawItem(marker, body, level, line_no, junction, emphasis)

        _, items = blocks[-1]
        stack: list[_RawItem] = []
        cursor = items
        node: _RawItem | None = None
        while cursor:
            node = cursor[-1]
            stack.append(node)
            cursor = node.children
        # normalize: the block's first item defines level base 0
        base = items[0].level if items else level
        depth = level - base
        if depth < 0:
            diagnostics.append(
                error("E103", "item indented left of the block base", span(line_no))
            )
            continue
        if depth > len(stack):
            diagnostics.append(
                error(
                    "E103",
                    f"inconsistent indentation: jumped to depth {depth}",
                    span(line_no),
                )
            )
            continue
        siblings = items if depth == 0 else stack[depth - 1].children
        if siblings and not _is_successor(siblings[-1].marker, marker):
            diagnostics.append(
                warning(
                    "W101",
                    f"enumerator {marker!r} does not follow {siblings[-1].marker!r}",
                    span(line_no),
                )
            )
        siblings.append(item)

    if not any(c is Connective.WHERE for c, _ in blocks):
        diagnostics.append(error("E103", "listing has no 'Where:' block"))
    for connective, items in blocks:
        if connective in (Connective.IN_WHICH_CASE, Connective.OTHERWISE):
            for item in items:
                if item.children:
                    diagnostics.append(
                        error(
                            "E103",
                            f"{connective.value} item {item.marker!r} must be a leaf",
                            span(item.line),
                        )
                    )
    if any(d.severity.value == "error" for d in diagnostics):
        return None, diagnostics
    doc = OutlineDoc(
        tuple(Block(c, tuple(i.freeze() for i in items)) for c, items in blocks)
    )
    return doc, diagnostics


# ─── Compilation ─────────────────────────────────────────────────────────────


def _item_ref(item: Item) -> SourceRef:
    return SourceRef(
        kind=RefKind.TEXT,
        quote=item.folded_text(),
        note=f"outline item {item.marker}",
    )


def _safe_id(prefix: str, marker: str) -> str:
    return f"{prefix}_{re.sub('[^0-9a-zA-Z_]', '_', marker)}"


def compile_outline(outline: OutlineDoc, doc_id: str, title: str) -> LawmapDoc:
    """Compile a listing into a draft lawmap.

    Top-level Where/Unless items become decisions (yes/no branches, prompt
    = the item's folded subtree); or-joined conditions share a merge
    downstream of their yes-edges while and-joined conditions chain.
    Unless-yes routes toward the In-which-case activities; the final
    fall-through takes the Otherwise path. Conditions that fail outright
    reach a dedicated not-applicable exit.
    """
    where_items = outline.items_of(Connective.WHERE)
    unless_items = outline.items_of(Connective.UNLESS)
    iwc_items = outline.items_of(Connective.IN_WHICH_CASE)
    otherwise_items = outline.items_of(Connective.OTHERWISE)
    if not where_items:
        raise ValueError("empty outline: no Where items to compile")

    nodes: list[Node] = [Node(id="start", kind=NodeKind.ENTRY, label="Start")]
    edges: list[Edge] = []

    def add_edge(from_id: str, to_id: str, criterion: str | None = None) -> None:
        edges.append(
            Edge(
                id=f"e{len(edges) + 1}",
                kind=EdgeKind.FLOW,
                from_id=from_id,
                to_id=to_id,
                criterion=criterion,
            )
        )

    def chain_activities(items, prefix: str, exit_label: str) -> str:
        """Entry id of an activity chain ending in its own exit node."""
        first_id: str | None = None
        prev: str | None = None
        for item in items:
            node_id = _safe_id(prefix, item.marker)
            nodes.append(
                Node(
                    id=node_id,
                    kind=NodeKind.ACTIVITY,
                    label=item.text,
                    refs=(_item_ref(item),),
                )
            )
            if prev is not None:
                add_edge(prev, node_id)
            first_id = first_id or node_id
            prev = node_id
        exit_id = _safe_id("x", items[0].marker)
        nodes.append(Node(id=exit_id, kind=NodeKind.EXIT, label=exit_label))
        assert prev is not None and first_id is not None
        add_edge(prev, exit_id)
        return first_id

    # Outcome targets are created lazily so the draft has no orphan nodes.
    targets: dict[str, str] = {}

    def not_applicable_exit() -> str:
        if "na" not in targets:
            nodes.append(
                Node(id="x_na", kind=NodeKind.EXIT, label="Provision does not apply")
            )
            targets["na"] = "x_na"
        return targets["na"]

    def applies_exit() -> str:
        if "ok" not in targets:
            nodes.append(Node(id="x_ok", kind=NodeKind.EXIT, label="Provision applies"))
            targets["ok"] = "x_ok"
        return targets["ok"]

    def iwc_entry() -> str:
        if "iwc" not in targets:
            if iwc_items:
                targets["iwc"] = chain_activities(iwc_items, "a", "Determined accordingly")
            else:
                targets["iwc"] = not_applicable_exit()
        return targets["iwc"]

    def otherwise_entry() -> str:
        if "otherwise" not in targets:
            if otherwise_items:
                targets["otherwise"] = chain_activities(otherwise_items, "a", "Default outcome")
            else:
                targets["otherwise"] = applies_exit()
        return targets["otherwise"]

    def where_fail_target() -> str:
        # With an Unless block the Otherwise branch is reserved for the
        # unless-condition failing; a failed Where condition is simply out
        # of scope. Without one, Otherwise is the fallback for Where.
        if unless_items:
            return not_applicable_exit()
        if otherwise_items:
            return otherwise_entry()
        return not_applicable_exit()

    def where_success_target() -> str:
        if unless_items:
            return None  # type: ignore[return-value]  # filled by the unless chain
        if iwc_items:
            return iwc_entry()
        return applies_exit()

    def make_decision(item: Item, extra_notes: tuple[Explanation, ...] = ()) -> str:
        node_id = _safe_id("d", item.marker)
        nodes.append(
            Node(
                id=node_id,
                kind=NodeKind.DECISION,
                label=item.text,
                prompt=item.folded_text(),
                refs=(_item_ref(item),),
                explanations=extra_notes,
            )
        )
        return node_id

    # Group consecutive or-joined Where items; groups chain (and-join).
    groups: list[list[Item]] = []
    for item in where_items:
        if groups and groups[-1][-1].junction is Junction.OR:
            groups[-1].append(item)
        else:
            groups.append([item])

    where_decisions = [[make_decision(i) for i in group] for group in groups]
    merge_count = 0
    cursor = "start"
    criterion_from: str | None = None

    def connect(to_id: str) -> None:
        # Out of a decision the success edge carries "yes"; out of the
        # entry or a merge activity it is a plain flow.
        add_edge(cursor, to_id, "yes" if criterion_from == cursor else None)

    for gi, (group, decisions) in enumerate(zip(groups, where_decisions)):
        connect(decisions[0])
        if len(decisions) > 1:
            merge_count += 1
            merge_id = f"m{merge_count}"
            nodes.append(
                Node(id=merge_id, kind=NodeKind.ACTIVITY, label="Condition satisfied")
            )
            for di, decision_id in enumerate(decisions):
                add_edge(decision_id, merge_id, "yes")
                fail = (
                    decisions[di + 1]
                    if di + 1 < len(decisions)
                    else where_fail_target()
                )
                add_edge(decision_id, fail, "no")
            cursor = merge_id
            criterion_from = None
        else:
            cursor = decisions[0]
            criterion_from = cursor
            add_edge(cursor, where_fail_target(), "no")
            # the "yes" edge is added by the next connect() call

    # Unless chain: yes routes to In-which-case, final no to Otherwise.
    if unless_items:
        routing_note = Explanation(
            ExplanationKind.RATIONALE,
            "Draft routing: an unless-condition that holds leads to the "
            "in-which-case outcome; refine in the map source if the statute "
            "reads differently.",
        )
        unless_decisions = [make_decision(i, (routing_note,)) for i in unless_items]
        connect(unless_decisions[0])
        for di, decision_id in enumerate(unless_decisions):
            add_edge(decision_id, iwc_entry(), "yes")
            if di + 1 < len(unless_decisions):
                add_edge(decision_id, unless_decisions[di + 1], "no")
            else:
                add_edge(decision_id, otherwise_entry(), "no")
    else:
        connect(where_success_target())

    return LawmapDoc(
        id=doc_id,
        title=title,
        nodes=tuple(nodes),
        edges=tuple(edges),
    )
