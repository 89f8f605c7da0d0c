"""HTTP session service for interactive walkthroughs.

Serves a directory of map files read-only and keeps walkthrough sessions
in memory (optionally snapshotted to ``state_dir`` as JSON so a restart
can replay them). A session is just a map id, a mode and the answers given
so far; every served route is recomputed from those, so the service never
drifts from the batch engine. Errors are JSON ``{code, message, details?}``.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .diagnostics import has_errors
from .dsl import parse_set, to_json
from .render import emit_svg
from .traverse import (
    InvalidLabelError,
    NotAnsweredError,
    NotPendingError,
    Route,
    apply_answer,
    batch_route,
    retract_answer,
    route_to_json,
)
from .validate import ResolvedSet, check, resolve_set

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@dataclass
class MapEntry:
    id: str
    title: str
    rs: ResolvedSet
    source_path: str


@dataclass
class Session:
    id: str
    map_id: str
    mode: str
    assignment: dict[str, str]
    created: str
    updated: str
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def load_maps(maps_dir: str | Path) -> dict[str, MapEntry]:
    """Parse and validate every ``.lawmap`` file in the directory.

    Only Error-free sets are served; a file with errors is skipped (the CLI
    ``check`` command is the place to see why).
    """
    maps: dict[str, MapEntry] = {}
    for path in sorted(Path(maps_dir).glob("*.lawmap")):
        lawmap_set, diagnostics = parse_set(path.read_text(encoding="utf-8"), str(path))
        if lawmap_set is None or has_errors(diagnostics):
            continue
        rs, resolve_diags = resolve_set(lawmap_set)
        if rs is None or has_errors(resolve_diags + check(rs)):
            continue
        root = rs.root_doc
        maps[root.id] = MapEntry(root.id, root.title, rs, str(path))
    return maps


class OpenSessionBody(BaseModel):
    mapId: str
    mode: str = "atomic"


class AnswerBody(BaseModel):
    decision: str
    label: str


def _error(status: int, code: str, message: str, details: dict | None = None) -> JSONResponse:
    body: dict = {"code": code, "message": message}
    if details is not None:
        body["details"] = details
    return JSONResponse(body, status_code=status)


def _assignment_etag(map_id: str, mode: str, assignment: dict[str, str]) -> str:
    payload = json.dumps([map_id, mode, sorted(assignment.items())])
    return '"' + hashlib.sha256(payload.encode()).hexdigest()[:32] + '"'


def create_app(maps_dir: str | Path | None = None, state_dir: str | Path | None = None) -> FastAPI:
    maps = load_maps(maps_dir or FIXTURES_DIR)
    sessions: dict[str, Session] = {}
    sessions_lock = threading.Lock()
    snapshot_path = Path(state_dir) / "sessions.json" if state_dir else None

    def snapshot() -> None:
        if snapshot_path is None:
            return
        snapshot_path.parent.mkdir(parents=True, exist_ok=True)
        with sessions_lock:
            payload = [
                {
                    "id": s.id,
                    "mapId": s.map_id,
                    "mode": s.mode,
                    "assignment": s.assignment,
                    "created": s.created,
                    "updated": s.updated,
                }
                for s in sessions.values()
            ]
        snapshot_path.write_text(json.dumps(payload, indent=2), encoding="utf-8")

    if snapshot_path is not None and snapshot_path.exists():
        for entry in json.loads(snapshot_path.read_text(encoding="utf-8")):
            if entry["mapId"] in maps:
                sessions[entry["id"]] = Session(
                    id=entry["id"],
                    map_id=entry["mapId"],
                    mode=entry["mode"],
                    assignment=dict(entry["assignment"]),
                    created=entry["created"],
                    updated=entry["updated"],
                )

    app = FastAPI(title="lawmap", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def session_route(session: Session) -> Route:
        entry = maps[session.map_id]
        return batch_route(entry.rs, session.assignment, session.mode)

    @app.get("/maps")
    def list_maps() -> dict:
        return {
            "maps": [
                {"id": m.id, "title": m.title} for m in sorted(maps.values(), key=lambda m: m.id)
            ]
        }

    @app.get("/maps/{map_id}")
    def get_map(map_id: str):
        entry = maps.get(map_id)
        if entry is None:
            return _error(404, "map_not_found", f"unknown map id: {map_id!r}")
        return json.loads(to_json(entry.rs.set))

    @app.get("/maps/{map_id}/svg")
    def get_map_svg(map_id: str):
        entry = maps.get(map_id)
        if entry is None:
            return _error(404, "map_not_found", f"unknown map id: {map_id!r}")
        return Response(emit_svg(entry.rs.root_doc), media_type="image/svg+xml")

    @app.post("/sessions", status_code=201)
    def open_session(body: OpenSessionBody):
        if body.mapId not in maps:
            return _error(404, "map_not_found", f"unknown map id: {body.mapId!r}")
        if body.mode not in ("atomic", "descend"):
            return _error(422, "invalid_mode", f"unknown mode: {body.mode!r}")
        now = _now()
        session = Session(
            id=secrets.token_urlsafe(12),
            map_id=body.mapId,
            mode=body.mode,
            assignment={},
            created=now,
            updated=now,
        )
        with sessions_lock:
            sessions[session.id] = session
        snapshot()
        return JSONResponse(
            {
                "sessionId": session.id,
                "mapId": session.map_id,
                "mode": session.mode,
                "route": route_to_json(session_route(session)),
            },
            status_code=201,
        )

    def find_session(session_id: str) -> Session | None:
        with sessions_lock:
            return sessions.get(session_id)

    @app.get("/sessions/{session_id}/route")
    def get_route(session_id: str):
        session = find_session(session_id)
        if session is None:
            return _error(404, "session_not_found", f"unknown session id: {session_id!r}")
        return route_to_json(session_route(session))

    @app.post("/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: AnswerBody):
        session = find_session(session_id)
        if session is None:
            return _error(404, "session_not_found", f"unknown session id: {session_id!r}")
        with session.lock:
            if session.assignment.get(body.decision) == body.label:
                return route_to_json(session_route(session))
            route = session_route(session)
            try:
                route = apply_answer(route, maps[session.map_id].rs, body.decision, body.label)
            except NotPendingError:
                return _error(
                    409,
                    "decision_not_pending",
                    f"decision {body.decision!r} is not pending",
                    {"pending": [p.node for p in route.pending]},
                )
            except InvalidLabelError as exc:
                return _error(
                    422,
                    "invalid_label",
                    f"label {body.label!r} is not an option of {body.decision!r}",
                    {"options": list(exc.options)},
                )
            session.assignment[body.decision] = body.label
            session.updated = _now()
        snapshot()
        return route_to_json(route)

    @app.delete("/sessions/{session_id}/answers/{decision:path}")
    def delete_answer(session_id: str, decision: str):
        session = find_session(session_id)
        if session is None:
            return _error(404, "session_not_found", f"unknown session id: {session_id!r}")
        with session.lock:
            route = session_route(session)
            try:
                route = retract_answer(route, maps[session.map_id].rs, decision)
            except NotAnsweredError:
                return _error(
                    409, "decision_not_answered", f"decision {decision!r} has not been answered"
                )
            del session.assignment[decision]
            session.updated = _now()
        snapshot()
        return route_to_json(route)

    @app.get("/sessions/{session_id}/svg")
    def get_session_svg(session_id: str, request: Request):
        session = find_session(session_id)
        if session is None:
            return _error(404, "session_not_found", f"unknown session id: {session_id!r}")
        with session.lock:
            etag = _assignment_etag(session.map_id, session.mode, session.assignment)
            if request.headers.get("if-none-match") == etag:
                return Response(status_code=304, headers={"ETag": etag})
            route = session_route(session)
        svg = emit_svg(maps[session.map_id].rs.root_doc, highlight=route)
        return Response(svg, media_type="image/svg+xml", headers={"ETag": etag})

    return app
