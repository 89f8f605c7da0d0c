"""Coded diagnostics shared by the parser, JSON loader and validator."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import Span


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


#: Registry of every diagnostic code the toolchain can emit. E1xx codes are
#: produced while reading input (lexing, syntax, JSON schema); E0xx/W0xx are
#: the semantic rule set.
CODE_REGISTRY: dict[str, str] = {
    "E001": "edge endpoint names an unknown node",
    "E002": "decision has fewer than two outgoing flow edges",
    "E003": "duplicate criterion label on one decision",
    "E004": "missing criterion on a decision's outgoing flow",
    "E005": "entry with incoming flow or exit with outgoing flow",
    "E006": "unresolved nested map or link target",
    "E007": "cyclic nesting between documents",
    "E008": "flow-edge cycle within one document",
    "E010": "duplicate id",
    "E011": "nested-decision sub-map outcomes do not match the decision's criteria",
    "W001": "node unreachable from entries",
    "W002": "decision without a source reference",
    "W003": "dependency edge within a single lane",
    "W004": "criterion label on a non-decision's out-edge",
    "W005": "activity with two or more criterion-labelled out-edges",
    "E100": "lexical error",
    "E101": "syntax error",
    "E102": "JSON schema violation",
}


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: Span | None = None
    node_or_edge: str | None = None

    def __post_init__(self) -> None:
        if self.code not in CODE_REGISTRY:
            raise ValueError(f"unknown diagnostic code: {self.code}")

    def render(self) -> str:
        """One-line text form: ``<file>:<line>:<col>: <severity> <code>: <message>``."""
        prefix = ""
        if self.span is not None:
            prefix = f"{self.span.file}:{self.span.start_line}:{self.span.start_col}: "
        return f"{prefix}{self.severity.value} {self.code}: {self.message}"

    def to_json(self) -> dict:
        out: dict = {
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
        }
        if self.span is not None:
            out["span"] = {
                "file": self.span.file,
                "startLine": self.span.start_line,
                "startCol": self.span.start_col,
                "endLine": self.span.end_line,
                "endCol": self.span.end_col,
            }
        if self.node_or_edge is not None:
            out["nodeOrEdge"] = self.node_or_edge
        return out


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


def error(code: str, message: str, span: Span | None = None, ref: str | None = None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, span, ref)


def warning(code: str, message: str, span: Span | None = None, ref: str | None = None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, span, ref)
