"""HTTP JSON API over the stepping sessions.

Snapshot bodies are returned as the session's canonical bytes rather
than re-encoded, so two requests that reach the same snapshot get
byte-identical responses.
"""
from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .engine import RULESET_NAMES, UnknownRuleSet
from .session import Session, SessionStore, UnknownSession, canonical_json


class CreateSessionBody(BaseModel):
    source: str
    rules: str = "interleaving"


class ResetBody(BaseModel):
    rules: Optional[str] = None


def _snapshot_response(data: bytes) -> Response:
    return Response(content=data, media_type="application/json")


def create_app(store: Optional[SessionStore] = None,
               static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="mkstepper", version="1")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # local visualizer tool; UI may be served separately
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions = store if store is not None else SessionStore()
    app.state.sessions = sessions

    def get_session(session_id: str) -> Session:
        try:
            return sessions.get(session_id)
        except UnknownSession:
            raise HTTPException(status_code=404, detail="unknown session") from None

    @app.post("/api/session")
    def create_session(body: CreateSessionBody) -> Response:
        try:
            session, diags = sessions.create(body.source, body.rules)
        except UnknownRuleSet as err:
            raise HTTPException(status_code=400, detail=str(err)) from None
        if session is None:
            return Response(
                content=canonical_json({"diagnostics": [d.to_json() for d in diags]}),
                media_type="application/json",
                status_code=422,
            )
        envelope = {"id": session.id, "snapshot": session.focus.doc}
        return _snapshot_response(canonical_json(envelope))

    @app.get("/api/session/{session_id}")
    def current(session_id: str) -> Response:
        session = get_session(session_id)
        with session.lock:
            return _snapshot_response(session.focus.data)

    @app.post("/api/session/{session_id}/step")
    def step_forward(session_id: str) -> Response:
        session = get_session(session_id)
        with session.lock:
            return _snapshot_response(session.step_forward().data)

    @app.post("/api/session/{session_id}/back")
    def step_back(session_id: str) -> Response:
        session = get_session(session_id)
        with session.lock:
            return _snapshot_response(session.step_back().data)

    @app.post("/api/session/{session_id}/reset")
    def reset(session_id: str, body: Optional[ResetBody] = None) -> Response:
        session = get_session(session_id)
        ruleset = None
        if body is not None and body.rules is not None:
            try:
                from .engine import resolve_ruleset

                ruleset = resolve_ruleset(body.rules)
            except UnknownRuleSet as err:
                raise HTTPException(status_code=400, detail=str(err)) from None
        with session.lock:
            return _snapshot_response(session.reset(ruleset).data)

    @app.get("/api/rulesets")
    def rulesets() -> list[str]:
        return list(RULESET_NAMES)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
