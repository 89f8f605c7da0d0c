"""The `.lawmap` authoring language and JSON interchange.

Line-oriented, block-structured syntax::

    lawmap s24c "Application for interim rent" {
      lane court "The Court"

      entry start "Application made" in court
      decision opposed "Opposition" prompt "Has the landlord opposed?" {
        ref statute "Landlord and Tenant Act 1954" s "24C" "(1)"
        note rationale "Gateway condition for the section."
      }

      flow start -> opposed
      flow opposed -> granted [label "no"]
    }

A file may contain several ``lawmap`` blocks; the first is the root of the
set. ``#`` starts a comment. Edge ids are assigned by declaration order
(``e1``, ``e2``, ...), so authored text stays free of bookkeeping.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .diagnostics import Diagnostic, Severity, error
from .model import (
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
    Span,
)

NODE_KEYWORDS = {
    "entry": NodeKind.ENTRY,
    "exit": NodeKind.EXIT,
    "activity": NodeKind.ACTIVITY,
    "decision": NodeKind.DECISION,
}

NOTE_KINDWORDS = {
    "rationale": ExplanationKind.RATIONALE,
    "task": ExplanationKind.TASK_DESCRIPTION,
    "advice": ExplanationKind.CLIENT_ADVICE,
    "record": ExplanationKind.RECORD_KEEPING,
    "correspondence": ExplanationKind.CORRESPONDENCE,
}
KINDWORD_FOR_EXPLANATION = {v: k for k, v in NOTE_KINDWORDS.items()}


# ─── Lexer ───────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Token:
    type: str  # IDENT | STRING | PUNCT | EOF
    value: str
    line: int
    col: int
    end_line: int
    end_col: int

    def span(self, file: str) -> Span:
        return Span(file, self.line, self.col, self.end_line, self.end_col)


class LexError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col


_PUNCT = {"{", "}", "[", "]", ".", "->"}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch == '"':
            i += 1
            col += 1
            parts: list[str] = []
            while True:
                if i >= n:
                    raise LexError("unterminated string literal", start_line, start_col)
                c = text[i]
                if c == "\n":
                    raise LexError("unterminated string literal", start_line, start_col)
                if c == '"':
                    i += 1
                    col += 1
                    break
                if c == "\\":
                    if i + 1 >= n:
                        raise LexError("unterminated escape", line, col)
                    esc = text[i + 1]
                    mapped = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc)
                    if mapped is None:
                        raise LexError(f"unknown escape \\{esc}", line, col)
                    parts.append(mapped)
                    i += 2
                    col += 2
                    continue
                parts.append(c)
                i += 1
                col += 1
            tokens.append(Token("STRING", "".join(parts), start_line, start_col, line, col - 1))
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(Token("PUNCT", "->", line, col, line, col + 1))
            i += 2
            col += 2
            continue
        if ch in "{}[].":
            tokens.append(Token("PUNCT", ch, line, col, line, col))
            i += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(Token("IDENT", word, line, col, line, col + len(word) - 1))
            col += j - i
            i = j
            continue
        raise LexError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col, line, col))
    return tokens


# ─── Parser ──────────────────────────────────────────────────────────────────


@dataclass
class ParseResult:
    doc: LawmapDoc | None
    diagnostics: list[Diagnostic]
    docs: tuple[LawmapDoc, ...] = ()

    @property
    def ok(self) -> bool:
        return self.doc is not None


class _SyntaxError(Exception):
    def __init__(self, message: str, token: Token):
        super().__init__(message)
        self.message = message
        self.token = token


class _Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.tokens = tokens
        self.file = file
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []

    # token plumbing

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.type == "IDENT" and tok.value in words

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.type != "IDENT" or tok.value != word:
            raise _SyntaxError(f"expected '{word}', got {describe(tok)}", tok)
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.type != "IDENT":
            raise _SyntaxError(f"expected {what}, got {describe(tok)}", tok)
        return self.advance()

    def expect_string(self, what: str = "string") -> Token:
        tok = self.peek()
        if tok.type != "STRING":
            raise _SyntaxError(f"expected {what}, got {describe(tok)}", tok)
        return self.advance()

    def expect_punct(self, value: str) -> Token:
        tok = self.peek()
        if tok.type != "PUNCT" or tok.value != value:
            raise _SyntaxError(f"expected '{value}', got {describe(tok)}", tok)
        return self.advance()

    def opt_string(self) -> str | None:
        if self.peek().type == "STRING":
            return self.advance().value
        return None

    # grammar

    def parse_docs(self) -> list[LawmapDoc]:
        docs = []
        while self.peek().type != "EOF":
            docs.append(self.parse_doc())
        if not docs:
            raise _SyntaxError("expected 'lawmap', got end of input", self.peek())
        return docs

    def parse_doc(self) -> LawmapDoc:
        start = self.expect_keyword("lawmap")
        doc_id = self.expect_ident("lawmap id").value
        title = self.expect_string("lawmap title").value
        self.expect_punct("{")
        lanes: list[Lane] = []
        nodes: list[Node] = []
        edges: list[Edge] = []
        doc_refs: list[SourceRef] = []
        seen_ids: dict[str, Span] = {}
        edge_seq = 0
        while not (self.peek().type == "PUNCT" and self.peek().value == "}"):
            tok = self.peek()
            if tok.type != "IDENT":
                raise _SyntaxError(
                    f"expected lane, node, edge, ref or '}}', got {describe(tok)}", tok
                )
            if tok.value == "lane":
                lanes.append(self.parse_lane(seen_ids))
            elif tok.value in NODE_KEYWORDS or tok.value == "nested":
                nodes.append(self.parse_node(seen_ids))
            elif tok.value in ("flow", "depends", "link"):
                edge_seq += 1
                edges.append(self.parse_edge(edge_seq))
            elif tok.value == "ref":
                doc_refs.append(self.parse_ref())
            else:
                raise _SyntaxError(
                    f"expected lane, node, edge, ref or '}}', got {describe(tok)}", tok
                )
        end = self.expect_punct("}")
        return LawmapDoc(
            id=doc_id,
            title=title,
            lanes=tuple(lanes),
            nodes=tuple(nodes),
            edges=tuple(edges),
            source_refs=tuple(doc_refs),
            origin_span=Span(self.file, start.line, start.col, end.end_line, end.end_col),
        )

    def parse_lane(self, seen_ids: dict[str, Span]) -> Lane:
        self.expect_keyword("lane")
        ident = self.expect_ident("lane id")
        label = self.expect_string("lane label").value
        self.check_duplicate(ident, seen_ids)
        return Lane(ident.value, label)

    def parse_node(self, seen_ids: dict[str, Span]) -> Node:
        start = self.peek()
        nested_ref: str | None = None
        if self.at_keyword("nested"):
            self.advance()
            kind_tok = self.expect_ident("'activity' or 'decision'")
            if kind_tok.value == "activity":
                kind = NodeKind.NESTED_ACTIVITY
            elif kind_tok.value == "decision":
                kind = NodeKind.NESTED_DECISION
            else:
                raise _SyntaxError(
                    f"expected 'activity' or 'decision' after 'nested', got {describe(kind_tok)}",
                    kind_tok,
                )
            ident = self.expect_ident("node id")
            label = self.expect_string("node label").value
            self.expect_keyword("map")
            nested_ref = self.expect_ident("nested map id").value
        else:
            kind_tok = self.advance()
            kind = NODE_KEYWORDS[kind_tok.value]
            ident = self.expect_ident("node id")
            label = self.opt_string() or ""
        lane = None
        if self.at_keyword("in"):
            self.advance()
            lane = self.expect_ident("lane id").value
        prompt = None
        if self.at_keyword("prompt"):
            self.advance()
            prompt = self.expect_string("prompt text").value
        outcome = None
        if self.at_keyword("outcome"):
            outcome_tok = self.advance()
            outcome = self.expect_string("outcome text").value
            if kind is not NodeKind.EXIT:
                raise _SyntaxError("'outcome' is only allowed on exit nodes", outcome_tok)
        explanations, refs, end = self.parse_body()
        self.check_duplicate(ident, seen_ids)
        end_line, end_col = (end.end_line, end.end_col) if end else (ident.end_line, ident.end_col)
        return Node(
            id=ident.value,
            kind=kind,
            label=label,
            lane=lane,
            prompt=prompt,
            nested_ref=nested_ref,
            outcome_label=outcome,
            explanations=explanations,
            refs=refs,
            span=Span(self.file, start.line, start.col, end_line, end_col),
        )

    def parse_edge(self, seq: int) -> Edge:
        start = self.advance()  # flow | depends | link
        edge_id = f"e{seq}"
        if start.value == "link":
            from_doc = self.expect_ident("source document id").value
            self.expect_punct(".")
            from_node = self.expect_ident("source node id").value
            arrow = self.expect_punct("->")
            to_doc = self.expect_ident("target document id").value
            self.expect_punct(".")
            to_node = self.expect_ident("target node id")
            return Edge(
                id=edge_id,
                kind=EdgeKind.MULTI_LEVEL,
                from_id=f"{from_doc}.{from_node}",
                to_id=f"{to_doc}.{to_node.value}",
                span=Span(self.file, start.line, start.col, to_node.end_line, to_node.end_col),
            )
        from_id = self.expect_ident("source node id").value
        self.expect_punct("->")
        to_tok = self.expect_ident("target node id")
        end_line, end_col = to_tok.end_line, to_tok.end_col
        if start.value == "depends":
            return Edge(
                id=edge_id,
                kind=EdgeKind.DEPENDENCY,
                from_id=from_id,
                to_id=to_tok.value,
                span=Span(self.file, start.line, start.col, end_line, end_col),
            )
        criterion = None
        if self.peek().type == "PUNCT" and self.peek().value == "[":
            self.advance()
            self.expect_keyword("label")
            criterion = self.expect_string("criterion label").value
            close = self.expect_punct("]")
            end_line, end_col = close.end_line, close.end_col
        explanations, refs, end = self.parse_body()
        if end:
            end_line, end_col = end.end_line, end.end_col
        return Edge(
            id=edge_id,
            kind=EdgeKind.FLOW,
            from_id=from_id,
            to_id=to_tok.value,
            criterion=criterion,
            explanations=explanations,
            refs=refs,
            span=Span(self.file, start.line, start.col, end_line, end_col),
        )

    def parse_body(self) -> tuple[tuple[Explanation, ...], tuple[SourceRef, ...], Token | None]:
        if not (self.peek().type == "PUNCT" and self.peek().value == "{"):
            return (), (), None
        self.advance()
        explanations: list[Explanation] = []
        refs: list[SourceRef] = []
        while not (self.peek().type == "PUNCT" and self.peek().value == "}"):
            if self.at_keyword("ref"):
                refs.append(self.parse_ref())
            elif self.at_keyword("note"):
                explanations.append(self.parse_note())
            else:
                raise _SyntaxError(
                    f"expected 'ref', 'note' or '}}', got {describe(self.peek())}", self.peek()
                )
        end = self.expect_punct("}")
        return tuple(explanations), tuple(refs), end

    def parse_ref(self) -> SourceRef:
        self.expect_keyword("ref")
        kind_tok = self.expect_ident("'statute', 'case', 'rule' or 'text'")
        act = citation = note = None
        section: tuple[str, ...] = ()
        if kind_tok.value == "statute":
            kind = RefKind.STATUTE
            act = self.expect_string("act name").value
            self.expect_keyword("s")
            segments = [self.expect_string("section segment").value]
            while self.peek().type == "STRING":
                segments.append(self.advance().value)
            section = tuple(segments)
        elif kind_tok.value == "case":
            kind = RefKind.CASE_LAW
            citation = self.expect_string("case citation").value
        elif kind_tok.value == "rule":
            kind = RefKind.PRACTICE_RULE
            note = self.expect_string("rule text").value
        elif kind_tok.value == "text":
            kind = RefKind.TEXT
            note = self.expect_string("reference text").value
        else:
            raise _SyntaxError(
                f"expected 'statute', 'case', 'rule' or 'text', got {describe(kind_tok)}",
                kind_tok,
            )
        quote = None
        if self.at_keyword("quote"):
            self.advance()
            quote = self.expect_string("quote text").value
        return SourceRef(
            kind=kind, act=act, section_path=section, citation=citation, quote=quote, note=note
        )

    def parse_note(self) -> Explanation:
        self.expect_keyword("note")
        kind = ExplanationKind.OTHER
        if self.peek().type == "IDENT" and self.peek().value in NOTE_KINDWORDS:
            kind = NOTE_KINDWORDS[self.advance().value]
        text_tok = self.expect_string("note text")
        if not text_tok.value:
            raise _SyntaxError("note text must be non-empty", text_tok)
        return Explanation(kind, text_tok.value)

    def check_duplicate(self, ident: Token, seen_ids: dict[str, Span]) -> None:
        if ident.value in seen_ids:
            raise _DuplicateId(ident)
        seen_ids[ident.value] = ident.span(self.file)


class _DuplicateId(Exception):
    def __init__(self, token: Token):
        super().__init__(token.value)
        self.token = token


def describe(tok: Token) -> str:
    if tok.type == "EOF":
        return "end of input"
    if tok.type == "STRING":
        return f'string "{tok.value}"'
    return f"'{tok.value}'"


def parse(text: str | bytes, file_name: str = "<input>") -> ParseResult:
    """Parse DSL source into lawmap documents.

    Returns the first document as ``doc`` (the root when the file is a set)
    and all documents as ``docs``. Never raises on malformed input; all
    failures surface as Error diagnostics.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            diag = error("E100", f"input is not valid UTF-8: {exc.reason}")
            return ParseResult(None, [diag])
    try:
        tokens = tokenize(text)
    except LexError as exc:
        span = Span(file_name, exc.line, exc.col, exc.line, exc.col)
        return ParseResult(None, [error("E100", exc.message, span)])
    parser = _Parser(tokens, file_name)
    try:
        docs = parser.parse_docs()
    except _SyntaxError as exc:
        return ParseResult(None, [error("E101", exc.message, exc.token.span(file_name))])
    except _DuplicateId as exc:
        tok = exc.token
        diag = error(
            "E010", f"duplicate id {tok.value!r}", tok.span(file_name), ref=tok.value
        )
        return ParseResult(None, [diag])
    doc_ids = [d.id for d in docs]
    for doc in docs:
        if doc_ids.count(doc.id) > 1:
            diag = error("E010", f"duplicate document id {doc.id!r}", doc.origin_span, ref=doc.id)
            return ParseResult(None, [diag])
    return ParseResult(docs[0], parser.diagnostics, tuple(docs))


def parse_set(text: str | bytes, file_name: str = "<input>") -> tuple[LawmapSet | None, list[Diagnostic]]:
    """Parse a file of one or more ``lawmap`` blocks; the first block is root."""
    result = parse(text, file_name)
    if result.doc is None:
        return None, result.diagnostics
    return LawmapSet(docs=result.docs, root=result.doc.id), result.diagnostics


# ─── Canonical printer ──────────────────────────────────────────────────────


def _quote(text: str) -> str:
    escaped = (
        text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    )
    return f'"{escaped}"'


def _ref_line(ref: SourceRef) -> str:
    if ref.kind is RefKind.STATUTE:
        parts = ["ref statute", _quote(ref.act or ""), "s"]
        parts += [_quote(seg) for seg in ref.section_path]
        line = " ".join(parts)
    elif ref.kind is RefKind.CASE_LAW:
        line = f"ref case {_quote(ref.citation or '')}"
    elif ref.kind is RefKind.PRACTICE_RULE:
        line = f"ref rule {_quote(ref.note or '')}"
    else:
        line = f"ref text {_quote(ref.note or '')}"
    if ref.quote:
        line += f" quote {_quote(ref.quote)}"
    return line


def _note_line(expl: Explanation) -> str:
    kindword = KINDWORD_FOR_EXPLANATION.get(expl.kind)
    if kindword is None:
        return f"note {_quote(expl.text)}"
    return f"note {kindword} {_quote(expl.text)}"


def _body_lines(refs: tuple[SourceRef, ...], explanations: tuple[Explanation, ...]) -> list[str]:
    return [_ref_line(r) for r in refs] + [_note_line(e) for e in explanations]


def _with_body(head: str, body: list[str], indent: str) -> list[str]:
    if not body:
        return [indent + head]
    lines = [indent + head + " {"]
    lines += [indent + "  " + b for b in body]
    lines.append(indent + "}")
    return lines


def print_canonical(doc: LawmapDoc) -> str:
    """Deterministic DSL text; ``parse(print_canonical(d))`` round-trips."""
    lines = [f"lawmap {doc.id} {_quote(doc.title)} {{"]
    sections: list[list[str]] = []
    if doc.lanes:
        sections.append([f"  lane {lane.id} {_quote(lane.label)}" for lane in doc.lanes])
    node_lines: list[str] = []
    for node in doc.nodes:
        if node.kind in (NodeKind.NESTED_ACTIVITY, NodeKind.NESTED_DECISION):
            word = "activity" if node.kind is NodeKind.NESTED_ACTIVITY else "decision"
            head = f"nested {word} {node.id} {_quote(node.label)} map {node.nested_ref}"
        else:
            keyword = {
                NodeKind.ENTRY: "entry",
                NodeKind.EXIT: "exit",
                NodeKind.ACTIVITY: "activity",
                NodeKind.DECISION: "decision",
            }[node.kind]
            head = f"{keyword} {node.id}"
            if node.label:
                head += f" {_quote(node.label)}"
        if node.lane:
            head += f" in {node.lane}"
        if node.prompt is not None:
            head += f" prompt {_quote(node.prompt)}"
        if node.outcome_label is not None:
            head += f" outcome {_quote(node.outcome_label)}"
        node_lines += _with_body(head, _body_lines(node.refs, node.explanations), "  ")
    if node_lines:
        sections.append(node_lines)
    edge_lines: list[str] = []
    for edge in doc.edges:
        if edge.kind is EdgeKind.MULTI_LEVEL:
            fd, fn = edge.from_id.split(".", 1)
            td, tn = edge.to_id.split(".", 1)
            edge_lines.append(f"  link {fd}.{fn} -> {td}.{tn}")
            continue
        if edge.kind is EdgeKind.DEPENDENCY:
            edge_lines.append(f"  depends {edge.from_id} -> {edge.to_id}")
            continue
        head = f"flow {edge.from_id} -> {edge.to_id}"
        if edge.criterion is not None:
            head += f" [label {_quote(edge.criterion)}]"
        edge_lines += _with_body(head, _body_lines(edge.refs, edge.explanations), "  ")
    if edge_lines:
        sections.append(edge_lines)
    if doc.source_refs:
        sections.append(["  " + _ref_line(r) for r in doc.source_refs])
    for i, section in enumerate(sections):
        if i:
            lines.append("")
        lines += section
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_set_canonical(lawmap_set: LawmapSet) -> str:
    """Canonical DSL for a whole set: root document first, then the rest."""
    ordered = [lawmap_set.root_doc] + [d for d in lawmap_set.docs if d.id != lawmap_set.root]
    return "\n".join(print_canonical(d) for d in ordered)


# ─── JSON interchange ────────────────────────────────────────────────────────


def _ref_to_json(ref: SourceRef) -> dict:
    out: dict = {"kind": ref.kind.value}
    if ref.act is not None:
        out["act"] = ref.act
    if ref.year is not None:
        out["year"] = ref.year
    if ref.section_path:
        out["sectionPath"] = list(ref.section_path)
    if ref.citation is not None:
        out["citation"] = ref.citation
    if ref.quote is not None:
        out["quote"] = ref.quote
    if ref.note is not None:
        out["note"] = ref.note
    return out


def _doc_to_json(doc: LawmapDoc) -> dict:
    nodes = []
    for n in doc.nodes:
        item: dict = {"id": n.id, "kind": n.kind.value, "label": n.label}
        if n.lane is not None:
            item["lane"] = n.lane
        if n.prompt is not None:
            item["prompt"] = n.prompt
        if n.nested_ref is not None:
            item["nestedRef"] = n.nested_ref
        if n.outcome_label is not None:
            item["outcome"] = n.outcome_label
        item["explanations"] = [{"kind": e.kind.value, "text": e.text} for e in n.explanations]
        item["refs"] = [_ref_to_json(r) for r in n.refs]
        nodes.append(item)
    edges = []
    for e in doc.edges:
        item = {"id": e.id, "kind": e.kind.value, "from": e.from_id, "to": e.to_id}
        if e.criterion is not None:
            item["criterion"] = e.criterion
        item["explanations"] = [{"kind": x.kind.value, "text": x.text} for x in e.explanations]
        item["refs"] = [_ref_to_json(r) for r in e.refs]
        edges.append(item)
    return {
        "id": doc.id,
        "title": doc.title,
        "lanes": [{"id": lane.id, "label": lane.label} for lane in doc.lanes],
        "nodes": nodes,
        "edges": edges,
        "refs": [_ref_to_json(r) for r in doc.source_refs],
    }


def to_json(lawmap_set: LawmapSet) -> str:
    """Serialize a set as JSON with deterministic key and document order."""
    payload = {
        "root": lawmap_set.root,
        "docs": {doc.id: _doc_to_json(doc) for doc in lawmap_set.docs},
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


class _JsonShape(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _want(obj: dict, path: str, key: str, typ: type, required: bool = True, default=None):
    if key not in obj:
        if required:
            raise _JsonShape("E102", f"missing field: {path}{key}" if path else f"missing field: {key}")
        return default
    value = obj[key]
    if typ is int and isinstance(value, bool):
        raise _JsonShape("E102", f"{path}{key}: expected {typ.__name__}")
    if not isinstance(value, typ):
        raise _JsonShape("E102", f"{path}{key}: expected {typ.__name__}")
    return value


def _no_unknown(obj: dict, path: str, allowed: set[str]) -> None:
    for key in obj:
        if key not in allowed:
            raise _JsonShape("E102", f"unknown field: {path}{key}")


def _ref_from_json(obj, path: str) -> SourceRef:
    if not isinstance(obj, dict):
        raise _JsonShape("E102", f"{path}: expected object")
    _no_unknown(obj, path + ".", {"kind", "act", "year", "sectionPath", "citation", "quote", "note"})
    kind_str = _want(obj, path + ".", "kind", str)
    try:
        kind = RefKind(kind_str)
    except ValueError:
        raise _JsonShape("E102", f"{path}.kind: unknown ref kind {kind_str!r}") from None
    section = obj.get("sectionPath", [])
    if not isinstance(section, list) or not all(isinstance(s, str) for s in section):
        raise _JsonShape("E102", f"{path}.sectionPath: expected list of strings")
    try:
        return SourceRef(
            kind=kind,
            act=_want(obj, path + ".", "act", str, required=False),
            year=_want(obj, path + ".", "year", int, required=False),
            section_path=tuple(section),
            citation=_want(obj, path + ".", "citation", str, required=False),
            quote=_want(obj, path + ".", "quote", str, required=False),
            note=_want(obj, path + ".", "note", str, required=False),
        )
    except ValueError as exc:
        raise _JsonShape("E102", f"{path}: {exc}") from None


def _explanations_from_json(obj: dict, path: str) -> tuple[Explanation, ...]:
    raw = obj.get("explanations", [])
    if not isinstance(raw, list):
        raise _JsonShape("E102", f"{path}.explanations: expected list")
    out = []
    for i, item in enumerate(raw):
        ipath = f"{path}.explanations[{i}]"
        if not isinstance(item, dict):
            raise _JsonShape("E102", f"{ipath}: expected object")
        _no_unknown(item, ipath + ".", {"kind", "text"})
        kind_str = _want(item, ipath + ".", "kind", str)
        try:
            kind = ExplanationKind(kind_str)
        except ValueError:
            raise _JsonShape("E102", f"{ipath}.kind: unknown explanation kind {kind_str!r}") from None
        text = _want(item, ipath + ".", "text", str)
        try:
            out.append(Explanation(kind, text))
        except ValueError as exc:
            raise _JsonShape("E102", f"{ipath}: {exc}") from None
    return tuple(out)


def _refs_from_json(obj: dict, path: str) -> tuple[SourceRef, ...]:
    raw = obj.get("refs", [])
    if not isinstance(raw, list):
        raise _JsonShape("E102", f"{path}.refs: expected list")
    return tuple(_ref_from_json(item, f"{path}.refs[{i}]") for i, item in enumerate(raw))


def _doc_from_json(obj, path: str) -> LawmapDoc:
    if not isinstance(obj, dict):
        raise _JsonShape("E102", f"{path}: expected object")
    _no_unknown(obj, path + ".", {"id", "title", "lanes", "nodes", "edges", "refs"})
    doc_id = _want(obj, path + ".", "id", str)
    title = _want(obj, path + ".", "title", str)
    lanes_raw = _want(obj, path + ".", "lanes", list, required=False, default=[])
    lanes = []
    for i, item in enumerate(lanes_raw):
        lpath = f"{path}.lanes[{i}]"
        if not isinstance(item, dict):
            raise _JsonShape("E102", f"{lpath}: expected object")
        _no_unknown(item, lpath + ".", {"id", "label"})
        lanes.append(Lane(_want(item, lpath + ".", "id", str), _want(item, lpath + ".", "label", str)))
    nodes = []
    for i, item in enumerate(_want(obj, path + ".", "nodes", list)):
        npath = f"{path}.nodes[{i}]"
        if not isinstance(item, dict):
            raise _JsonShape("E102", f"{npath}: expected object")
        _no_unknown(
            item,
            npath + ".",
            {"id", "kind", "label", "lane", "prompt", "nestedRef", "outcome", "explanations", "refs"},
        )
        kind_str = _want(item, npath + ".", "kind", str)
        try:
            kind = NodeKind(kind_str)
        except ValueError:
            raise _JsonShape("E102", f"{npath}.kind: unknown node kind {kind_str!r}") from None
        try:
            nodes.append(
                Node(
                    id=_want(item, npath + ".", "id", str),
                    kind=kind,
                    label=_want(item, npath + ".", "label", str),
                    lane=_want(item, npath + ".", "lane", str, required=False),
                    prompt=_want(item, npath + ".", "prompt", str, required=False),
                    nested_ref=_want(item, npath + ".", "nestedRef", str, required=False),
                    outcome_label=_want(item, npath + ".", "outcome", str, required=False),
                    explanations=_explanations_from_json(item, npath),
                    refs=_refs_from_json(item, npath),
                )
            )
        except ValueError as exc:
            raise _JsonShape("E102", f"{npath}: {exc}") from None
    node_ids = {n.id for n in nodes}
    edges = []
    for i, item in enumerate(_want(obj, path + ".", "edges", list)):
        epath = f"{path}.edges[{i}]"
        if not isinstance(item, dict):
            raise _JsonShape("E102", f"{epath}: expected object")
        _no_unknown(item, epath + ".", {"id", "kind", "from", "to", "criterion", "explanations", "refs"})
        kind_str = _want(item, epath + ".", "kind", str)
        try:
            ekind = EdgeKind(kind_str)
        except ValueError:
            raise _JsonShape("E102", f"{epath}.kind: unknown edge kind {kind_str!r}") from None
        from_id = _want(item, epath + ".", "from", str)
        to_id = _want(item, epath + ".", "to", str)
        if ekind is not EdgeKind.MULTI_LEVEL:
            for endpoint in (from_id, to_id):
                if endpoint not in node_ids:
                    raise _JsonShape("E001", f"{epath}: edge endpoint names unknown node {endpoint!r}")
        try:
            edges.append(
                Edge(
                    id=_want(item, epath + ".", "id", str),
                    kind=ekind,
                    from_id=from_id,
                    to_id=to_id,
                    criterion=_want(item, epath + ".", "criterion", str, required=False),
                    explanations=_explanations_from_json(item, epath),
                    refs=_refs_from_json(item, epath),
                )
            )
        except ValueError as exc:
            raise _JsonShape("E102", f"{epath}: {exc}") from None
    return LawmapDoc(
        id=doc_id,
        title=title,
        lanes=tuple(lanes),
        nodes=tuple(nodes),
        edges=tuple(edges),
        source_refs=_refs_from_json(obj, path),
    )


def from_json(text: str) -> tuple[LawmapSet | None, list[Diagnostic]]:
    """Parse the JSON interchange format back into a :class:`LawmapSet`.

    Unknown fields and schema violations are rejected with an Error naming
    the offending JSON path.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [error("E102", f"malformed JSON: {exc.msg} at line {exc.lineno}")]
    try:
        if not isinstance(payload, dict):
            raise _JsonShape("E102", "top level: expected object")
        _no_unknown(payload, "", {"root", "docs"})
        root = _want(payload, "", "root", str)
        docs_obj = _want(payload, "", "docs", dict)
        docs = []
        for key, value in docs_obj.items():
            doc = _doc_from_json(value, f"docs.{key}")
            if doc.id != key:
                raise _JsonShape("E102", f"docs.{key}: document id {doc.id!r} does not match key")
            docs.append(doc)
        if root not in docs_obj:
            raise _JsonShape("E102", f"root: document {root!r} not present in docs")
        return LawmapSet(docs=tuple(docs), root=root), []
    except _JsonShape as exc:
        return None, [error(exc.code, exc.message)]
