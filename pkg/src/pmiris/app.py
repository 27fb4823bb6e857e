"""HTTP surface over the experiment store."""

from __future__ import annotations

from typing import Any, Optional

from fastapi import FastAPI, HTTPException, Request, Response
from pydantic import BaseModel

from .errors import (
    CapacityError,
    ConflictError,
    GridDomainError,
    GridFormatError,
    NotFoundError,
    SequenceError,
)
from .service import ExperimentStore


class CreateSessionRequest(BaseModel):
    subject_id: str
    k: Optional[int] = None
    seed: Optional[int] = None


class DecisionRequest(BaseModel):
    pair_id: str
    verdict: str
    elapsed_ms: float = 0.0
    pointer_trace: Optional[str] = None


def create_app(store: ExperimentStore) -> FastAPI:
    app = FastAPI(title="pmiris experiment service")
    app.state.store = store

    @app.get("/health")
    def health() -> dict[str, Any]:
        return {"ok": True, "pairs": len(store.pool)}

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest) -> dict[str, Any]:
        try:
            state = store.create_session(req.subject_id, k=req.k, seed=req.seed)
        except CapacityError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {
            "session_id": state.session_id,
            "subject_id": state.subject_id,
            "k": len(state.schedule),
        }

    @app.get("/sessions/{session_id}/next")
    def next_pair(session_id: str) -> dict[str, Any]:
        try:
            pair = store.next_pair(session_id)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        if pair is None:
            return {"complete": True}
        return {"complete": False, "pair": pair.public_payload()}

    @app.post("/sessions/{session_id}/decisions")
    def record_decision(session_id: str, req: DecisionRequest) -> dict[str, Any]:
        try:
            return store.record_decision(
                session_id,
                req.pair_id,
                req.verdict,
                elapsed_ms=req.elapsed_ms,
                pointer_trace=req.pointer_trace,
            )
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except SequenceError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/sessions/{session_id}/report")
    def session_report(session_id: str) -> dict[str, Any]:
        try:
            return store.session_report(session_id)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.put("/pairs/{pair_id}/grids/{name}")
    async def put_grid(pair_id: str, name: str, request: Request):
        body = (await request.body()).decode("utf-8")
        try:
            store.put_grid(pair_id, name, body)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (GridFormatError, GridDomainError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"stored": True}

    @app.get("/pairs/{pair_id}/grids/{name}")
    def get_grid(pair_id: str, name: str) -> Response:
        try:
            return Response(content=store.get_grid(pair_id, name), media_type="application/json")
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.put("/pairs/{pair_id}/gaze")
    async def put_gaze(pair_id: str, request: Request):
        body = (await request.body()).decode("utf-8")
        try:
            store.put_gaze_log(pair_id, body)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"stored": True}

    @app.get("/pairs/{pair_id}/gaze")
    def get_gaze(pair_id: str) -> Response:
        try:
            return Response(content=store.get_gaze_log(pair_id), media_type="text/csv")
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/pairs/{pair_id}/q")
    def pair_q(pair_id: str) -> dict[str, Any]:
        try:
            return store.pair_overlap(pair_id)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    return app
