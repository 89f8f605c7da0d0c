"""Command line front end.

Subcommands: ``check`` (diagnostics), ``fmt`` (canonical DSL), ``render``
(DOT or SVG), ``trace`` (route for a batch of answers), ``outline``
(compile a plain-language listing to draft DSL) and ``serve`` (HTTP
session service). Exit codes: 0 success, 1 validation failure, 2 usage
error.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .diagnostics import Diagnostic, has_errors
from .dsl import from_json, parse_set, print_canonical, print_set_canonical
from .model import LawmapSet
from .outline import compile_outline, parse_outline
from .render import emit_dot, emit_svg
from .traverse import TraversalError, batch_route, flatten, serialize_route
from .validate import ResolvedSet, check, resolve_set


def _emit_diagnostics(diagnostics: list[Diagnostic], fmt: str, stream) -> None:
    if not diagnostics:
        return
    if fmt == "json":
        click.echo(json.dumps([d.to_json() for d in diagnostics], indent=2), file=stream)
    else:
        for d in diagnostics:
            click.echo(d.render(), file=stream)


def _load_set(path: str) -> tuple[LawmapSet | None, list[Diagnostic]]:
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        return from_json(text)
    lawmap_set, diagnostics = parse_set(text, path)
    return lawmap_set, diagnostics


def _resolve_or_fail(path: str, fmt: str = "text") -> ResolvedSet:
    """Load, resolve and validate; on any Error print to stderr and exit 1."""
    lawmap_set, diagnostics = _load_set(path)
    if lawmap_set is not None and not has_errors(diagnostics):
        rs, resolve_diags = resolve_set(lawmap_set)
        diagnostics += resolve_diags
        if rs is not None:
            diagnostics += check(rs)
            if not has_errors(diagnostics):
                return rs
    _emit_diagnostics(diagnostics, fmt, sys.stderr)
    raise SystemExit(1)


def _parse_answers(value: str | None) -> dict[str, str]:
    if not value:
        return {}
    raw = value.strip()
    if not raw.startswith("{"):
        raw = Path(value).read_text(encoding="utf-8")
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"--answers is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in obj.items()
    ):
        raise click.UsageError("--answers must be a JSON object of strings")
    return obj


def _write_output(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@click.group()
@click.version_option(package_name="lawmap")
def main() -> None:
    """Parse, validate, render and walk through legislative process maps."""


@main.command("check")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def check_cmd(files: tuple[str, ...], fmt: str) -> None:
    """Validate map files and print diagnostics."""
    all_diags: list[Diagnostic] = []
    for path in files:
        lawmap_set, diagnostics = _load_set(path)
        if lawmap_set is not None and not has_errors(diagnostics):
            rs, resolve_diags = resolve_set(lawmap_set)
            diagnostics += resolve_diags
            if rs is not None:
                diagnostics += check(rs)
        all_diags += diagnostics
    _emit_diagnostics(all_diags, fmt, sys.stdout)
    if has_errors(all_diags):
        raise SystemExit(1)



@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", default=None, help="Output path (default stdout).")
def fmt(file: str, out: str | None) -> None:
    """Print the canonical form of a map file."""
    lawmap_set, diagnostics = _load_set(file)
    if lawmap_set is None or has_errors(diagnostics):
        _emit_diagnostics(diagnostics, "text", sys.stderr)
        raise SystemExit(1)
    _write_output(print_set_canonical(lawmap_set), out)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--to", "target", type=click.Choice(["dot", "svg"]), default="svg")
@click.option("--route", "route_answers", default=None,
              help="Answers (inline JSON or a file) to highlight on the SVG.")
@click.option("--mode", type=click.Choice(["atomic", "descend"]), default="atomic")
@click.option("--flatten", "flatten_depth", type=int, default=0,
              help="Inline nested maps to this depth before rendering.")
@click.option("-o", "--out", default=None, help="Output path (default stdout).")
def render(file: str, target: str, route_answers: str | None, mode: str,
           flatten_depth: int, out: str | None) -> None:
    """Render a map to Graphviz DOT or standalone SVG."""
    rs = _resolve_or_fail(file)
    doc = flatten(rs, flatten_depth) if flatten_depth else rs.root_doc
    if target == "dot":
        _write_output(emit_dot(doc), out)
        return
    highlight = None
    if route_answers is not None:
        try:
            highlight = batch_route(rs, _parse_answers(route_answers), mode)
        except TraversalError as exc:
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(1) from exc
    _write_output(emit_svg(doc, highlight=highlight), out)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--answers", default=None, help="Decision answers, inline JSON or a file.")
@click.option("--mode", type=click.Choice(["atomic", "descend"]), default="atomic")
@click.option("--withhold", multiple=True,
              help="Node path-id to treat as not yet done (repeatable).")
def trace(file: str, answers: str | None, mode: str, withhold: tuple[str, ...]) -> None:
    """Compute and print the route for a batch of answers."""
    rs = _resolve_or_fail(file)
    try:
        route = batch_route(rs, _parse_answers(answers), mode, frozenset(withhold))
    except TraversalError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(1) from exc
    click.echo(serialize_route(route), nl=False)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--id", "doc_id", default=None, help="Id for the generated map (default: file stem).")
@click.option("--title", default=None, help="Title for the generated map.")
@click.option("-o", "--out", default=None, help="Output path (default stdout).")
def outline(file: str, doc_id: str | None, title: str | None, out: str | None) -> None:
    """Compile a plain-language logic listing into draft map DSL."""
    text = Path(file).read_text(encoding="utf-8")
    parsed, diagnostics = parse_outline(text, file)
    if parsed is None:
        _emit_diagnostics(diagnostics, "text", sys.stderr)
        raise SystemExit(1)
    _emit_diagnostics(diagnostics, "text", sys.stderr)  # warnings only
    stem = Path(file).stem.replace("-", "_")
    doc = compile_outline(parsed, doc_id or stem, title or stem.replace("_", " "))
    _write_output(print_canonical(doc), out)


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--maps-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Directory of .lawmap files to serve (default: bundled fixtures).")
@click.option("--state-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for session snapshots; sessions survive restarts.")
def serve(port: int, host: str, maps_dir: str | None, state_dir: str | None) -> None:
    """Run the HTTP walkthrough session service."""
    import uvicorn

    from .server import create_app

    env_port = os.environ.get("LAWMAP_PORT")
    if env_port:
        try:
            port = int(env_port)
        except ValueError as exc:
            raise click.UsageError(f"LAWMAP_PORT is not an integer: {env_port!r}") from exc
    app = create_app(maps_dir, state_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
