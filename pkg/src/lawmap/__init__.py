"""Toolchain for legislative process maps.

A lawmap is a flowchart model of a legal process: activities and decisions
arranged in party lanes, criterion-labelled branches, cross-lane
dependencies, nested sub-maps, and source references back to the statute,
case or practice rule each element came from. This package provides the
document model, an authoring DSL with JSON interchange, a semantic
validator, a traversal engine for interactive walkthroughs, deterministic
DOT/SVG rendering, and a compiler from plain-language logic listings to
draft maps. The :mod:`lawmap.cli` and :mod:`lawmap.server` modules wrap it
all as a command line tool and an HTTP session service.
"""

from .diagnostics import CODE_REGISTRY, Diagnostic, Severity, has_errors
from .dsl import (
    ParseResult,
    from_json,
    parse,
    parse_set,
    print_canonical,
    print_set_canonical,
    to_json,
)
from .model import (
    DECISION_KINDS,
    NESTED_KINDS,
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
    entry_exit_sets,
    multilevel_endpoint,
    reachable_set,
)
from .outline import Block, Connective, Item, Junction, OutlineDoc, compile_outline, parse_outline
from .render import LayoutGraph, doc_is_connected, emit_dot, emit_svg, layout
from .traverse import (
    InvalidLabelError,
    NotAnsweredError,
    NotPendingError,
    Route,
    RouteDelta,
    RouteStatus,
    TraversalError,
    UnknownDecisionError,
    ValidationFailedError,
    apply_answer,
    batch_route,
    decision_paths,
    diff_routes,
    flatten,
    init_route,
    retract_answer,
    route_to_json,
    serialize_route,
)
from .validate import ResolvedSet, check, check_doc, check_set, resolve_set

__version__ = "0.1.0"

__all__ = [
    "CODE_REGISTRY",
    "DECISION_KINDS",
    "NESTED_KINDS",
    "Block",
    "Connective",
    "Diagnostic",
    "Edge",
    "EdgeKind",
    "Explanation",
    "ExplanationKind",
    "InvalidLabelError",
    "Item",
    "Junction",
    "Lane",
    "LawmapDoc",
    "LawmapSet",
    "LayoutGraph",
    "Node",
    "NodeKind",
    "NotAnsweredError",
    "NotPendingError",
    "OutlineDoc",
    "ParseResult",
    "RefKind",
    "ResolvedSet",
    "Route",
    "RouteDelta",
    "RouteStatus",
    "Severity",
    "SourceRef",
    "Span",
    "TraversalError",
    "UnknownDecisionError",
    "ValidationFailedError",
    "apply_answer",
    "batch_route",
    "check",
    "check_doc",
    "check_set",
    "compile_outline",
    "decision_paths",
    "diff_routes",
    "doc_is_connected",
    "emit_dot",
    "emit_svg",
    "entry_exit_sets",
    "flatten",
    "from_json",
    "has_errors",
    "init_route",
    "layout",
    "multilevel_endpoint",
    "parse",
    "parse_outline",
    "parse_set",
    "print_canonical",
    "print_set_canonical",
    "reachable_set",
    "resolve_set",
    "retract_answer",
    "route_to_json",
    "serialize_route",
    "to_json",
]
