"""HTTP service exposing tutoring sessions.

Endpoints:
    POST /sessions              {intake_text}          -> 201 {session_id, profile}
    POST /sessions/{id}/turns   {writing, question}    -> turn outputs
    GET  /sessions/{id}                                -> full session
    GET  /healthz                                      -> {ok, backend_reachable}

Errors use one envelope: {"error": {"code", "message", "retryable"}}.
Turns within one session are serialized behind a per-session lock; distinct
sessions run concurrently. /healthz never calls the generation backend.
"""
from __future__ import annotations

import threading
from collections import defaultdict

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .gateway import GatewayError
from .tutor import (
    SessionNotFound,
    SessionState,
    SessionStore,
    TurnInput,
    TutorPipeline,
    turn_record_dict,
)

API_SCHEMA_VERSION = 1


class ApiFault(Exception):
    def __init__(self, status: int, code: str, message: str, retryable: bool = False):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.retryable = retryable


class IntakeBody(BaseModel):
    intake_text: str = ""


class TurnBody(BaseModel):
    writing: str = ""
    question: str = ""


def _profile_dict(session: SessionState) -> dict:
    profile = session.profile
    return {
        "demographic": profile.demographic,
        "proficiency": profile.proficiency,
        "preferences": profile.preferences,
        "context": profile.context,
    }


def _turn_payload(record) -> dict:
    data = turn_record_dict(record)
    return {
        "v": API_SCHEMA_VERSION,
        "turn_index": data["turn_index"],
        "stage": data["stage"],
        "writing": data["writing"],
        "question": data["question"],
        "vocab": data["vocab"],
        "feedback": data["feedback"],
        "response": data["response"],
    }


def create_app(
    tutor: TutorPipeline,
    store: SessionStore | None = None,
    *,
    allowed_origins: tuple[str, ...] = ("*",),
    backend_reachable: bool = True,
) -> FastAPI:
    store = store if store is not None else tutor.store
    if store is None:
        raise ValueError("the tutor pipeline needs a session store to serve sessions")
    app = FastAPI(title="tutor-api")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(allowed_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    session_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
    locks_guard = threading.Lock()

    def session_lock(session_id: str) -> threading.Lock:
        with locks_guard:
            return session_locks[session_id]

    @app.exception_handler(ApiFault)
    async def fault_handler(_request: Request, fault: ApiFault) -> JSONResponse:
        return JSONResponse(
            status_code=fault.status,
            content={
                "error": {
                    "code": fault.code,
                    "message": fault.message,
                    "retryable": fault.retryable,
                }
            },
        )

    @app.post("/sessions", status_code=201)
    def create_session(body: IntakeBody) -> dict:
        if not body.intake_text.strip():
            raise ApiFault(400, "BadRequest", "intake_text must be non-empty")
        try:
            session = tutor.start_session(body.intake_text)
        except GatewayError as exc:
            raise ApiFault(502, "UpstreamError", f"generation backend failed: {exc}", retryable=True)
        return {
            "v": API_SCHEMA_VERSION,
            "session_id": session.session_id,
            "profile": _profile_dict(session),
        }

    @app.post("/sessions/{session_id}/turns")
    def post_turn(session_id: str, body: TurnBody) -> dict:
        if not body.writing.strip() and not body.question.strip():
            raise ApiFault(400, "BadRequest", "turn needs writing or a question")
        with session_lock(session_id):
            try:
                session = store.load(session_id)
            except SessionNotFound:
                raise ApiFault(404, "NotFound", f"no session '{session_id}'") from None
            turn = TurnInput(
                writing=body.writing,
                question=body.question,
                turn_index=session.next_turn_index,
            )
            try:
                _updated, record = tutor.run_turn(session, turn)
            except GatewayError as exc:
                raise ApiFault(
                    502, "UpstreamError", f"generation backend failed: {exc}", retryable=True
                )
        return _turn_payload(record)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        try:
            session = store.load(session_id)
        except SessionNotFound:
            raise ApiFault(404, "NotFound", f"no session '{session_id}'") from None
        return {
            "v": API_SCHEMA_VERSION,
            "session_id": session.session_id,
            "created_at": session.created_at,
            "profile": _profile_dict(session),
            "turns": [_turn_payload(record) for record in session.turns],
        }

    @app.get("/healthz")
    def healthz() -> dict:
        return {"ok": True, "backend_reachable": backend_reachable}

    return app
