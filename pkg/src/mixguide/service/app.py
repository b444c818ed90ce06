"""HTTP boundary: ingestion, guide compilation, session turns, twin
actions, media with range requests, and a per-session SSE event stream.

Wire shapes are documented next to each handler; everything the UI renders
comes either from a REST response or from the stream, with stream events
carrying gapless per-session sequence numbers so clients can reconcile the
two without double-rendering.
"""

from __future__ import annotations

import asyncio
import json
import re
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.responses import StreamingResponse
from fastapi.staticfiles import StaticFiles

from ..engine import SessionCompleted
from ..providers import AudioRejected
from ..transcript import (
    InvariantViolation,
    MalformedDocument,
    SegmentationRules,
    parse_subtitle,
    parse_transcript_json,
    segment_into_steps,
)
from .config import ServiceConfig
from .manager import NoTwinBound, SessionBusy, SessionManager, StaleClock, twin_payload
from .store import ArtifactStore, UnknownArtifact

STREAM_POLL_S = 0.05

_RANGE = re.compile(r"bytes=(\d*)-(\d*)")


def _session_snapshot(runtime) -> dict:
    session = runtime.session
    return {
        "id": session.id,
        "transcript_id": runtime.transcript_id,
        "guide_id": runtime.guide_id,
        "task_id": session.transcript.task_id,
        "current_step": session.current_step,
        "stage": session.stage.value,
        "step_count": session.step_count(),
        "steps": [step.to_dict() for step in session.guide.steps],
        "history": [turn.to_dict() for turn in session.history],
        "twin": twin_payload(runtime.twin) if runtime.twin is not None else None,
        "last_seq": runtime.seq,
    }


def create_app(config: ServiceConfig) -> FastAPI:
    store = ArtifactStore(config.data_dir)
    manager = SessionManager(store, config)
    app = FastAPI(title="mixguide", version="0.1.0")
    app.state.manager = manager
    app.state.store = store

    if config.auth_token:

        @app.middleware("http")
        async def check_token(request: Request, call_next):
            if request.headers.get("x-auth-token") != config.auth_token:
                return Response(
                    content=json.dumps({"detail": "missing or bad token"}),
                    status_code=401,
                    media_type="application/json",
                )
            return await call_next(request)

    # -- ingestion ---------------------------------------------------------

    @app.post("/transcripts", status_code=201)
    async def ingest_transcript(
        request: Request,
        format: str = Query("json", pattern="^(json|srt|vtt)$"),
        task_id: str = Query("task"),
        language_tag: str = Query("und"),
    ):
        body = await request.body()
        if len(body) > config.max_upload_bytes:
            raise HTTPException(413, detail="upload exceeds size limit")
        try:
            if format == "json":
                transcript = parse_transcript_json(body)
            else:
                transcript = parse_subtitle(
                    body, format, task_id=task_id, language_tag=language_tag
                )
        except InvariantViolation as exc:
            raise HTTPException(
                400, detail={"error": str(exc), "segment_id": exc.segment_id}
            )
        except MalformedDocument as exc:
            raise HTTPException(400, detail={"error": str(exc), "segment_id": None})
        transcript_id = store.save_transcript(transcript)
        return {
            "id": transcript_id,
            "task_id": transcript.task_id,
            "segments": len(transcript.segments),
            "duration_ms": transcript.duration_ms,
        }

    @app.post("/transcripts/{transcript_id}/guide", status_code=201)
    async def compile_guide(transcript_id: str, body: dict | None = None):
        try:
            transcript = store.load_transcript(transcript_id)
        except UnknownArtifact:
            raise HTTPException(404, detail=f"unknown transcript {transcript_id}")
        body = body or {}
        if body.get("markers") or body.get("boundaries"):
            raw_markers = body.get("markers")
            if isinstance(raw_markers, dict):
                rules = SegmentationRules(
                    markers=raw_markers,
                    boundary_ids=frozenset(body.get("boundaries", ())),
                )
            else:
                rules = SegmentationRules.from_phrases(
                    list(raw_markers or []),
                    set(body.get("boundaries", ())),
                )
        else:
            rules = None
        guide = segment_into_steps(transcript, rules)
        guide_id = store.save_guide(guide)
        return {"id": guide_id, "transcript_id": transcript_id, "guide": guide.to_dict()}

    # -- sessions ------------------------------------------------------------

    @app.post("/sessions", status_code=201)
    async def open_session(body: dict):
        try:
            transcript_id = body["transcript_id"]
            guide_id = body["guide_id"]
        except KeyError as exc:
            raise HTTPException(422, detail=f"missing field {exc}")
        try:
            runtime = await asyncio.to_thread(
                manager.create, transcript_id, guide_id, bool(body.get("twin", False))
            )
        except UnknownArtifact as exc:
            raise HTTPException(404, detail=str(exc))
        return _session_snapshot(runtime)

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        return _session_snapshot(_get_runtime(session_id))

    def _get_runtime(session_id: str):
        try:
            return manager.get(session_id)
        except UnknownArtifact:
            raise HTTPException(404, detail=f"unknown session {session_id}")

    @app.post("/sessions/{session_id}/turns")
    async def text_turn(session_id: str, body: dict):
        text = (body or {}).get("text", "")
        if not isinstance(text, str) or not text.strip():
            raise HTTPException(422, detail="text must be non-empty")
        _get_runtime(session_id)
        return await _run_turn(lambda: manager.text_turn(session_id, text))

    @app.post("/sessions/{session_id}/audio-turns")
    async def audio_turn(session_id: str, request: Request):
        body = await request.body()
        if len(body) > config.max_upload_bytes:
            raise HTTPException(413, detail="upload exceeds size limit")
        _get_runtime(session_id)

        def run():
            return manager.audio_turn(session_id, body)

        return await _run_turn(run)

    async def _run_turn(fn):
        try:
            return await asyncio.to_thread(fn)
        except SessionBusy:
            raise HTTPException(
                409, detail="a turn for this session is still processing"
            )
        except SessionCompleted:
            raise HTTPException(
                409, detail="session is completed; only queries are accepted"
            )
        except AudioRejected as exc:
            raise HTTPException(415, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(422, detail=str(exc))

    # -- twin ---------------------------------------------------------------

    @app.post("/sessions/{session_id}/twin/actions")
    async def twin_action(session_id: str, body: dict):
        _get_runtime(session_id)
        at_ms = body.get("at_ms")
        try:
            result = await asyncio.to_thread(
                manager.twin_action, session_id, body, at_ms
            )
        except NoTwinBound:
            raise HTTPException(409, detail="session has no twin bound")
        except StaleClock as exc:
            raise HTTPException(422, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(422, detail=str(exc))
        if "rejected" in result:
            raise HTTPException(409, detail=result["rejected"])
        return result

    # -- stream ------------------------------------------------------------------

    @app.get("/sessions/{session_id}/stream")
    async def stream(
        session_id: str,
        request: Request,
        after: int = 0,
        limit: int | None = Query(None, gt=0),
        tail: bool = True,
    ):
        """SSE tail of the session's event log, starting after ``after``
        (or the Last-Event-ID header on reconnect). ``limit`` closes the
        response after that many events and ``tail=false`` closes it once
        caught up — reload-style consumers and buffering test clients use
        those; the live panel tails with neither."""
        runtime = _get_runtime(session_id)
        last_id = request.headers.get("last-event-id")
        start_after = int(last_id) if last_id and last_id.isdigit() else after

        async def gen():
            delivered = start_after
            sent = 0
            while True:
                for event in runtime.events_after(delivered):
                    delivered = event["seq"]
                    payload = json.dumps(event, separators=(",", ":"))
                    yield (
                        f"id: {event['seq']}\nevent: {event['type']}\n"
                        f"data: {payload}\n\n"
                    )
                    sent += 1
                    if limit is not None and sent >= limit:
                        return
                if not tail:
                    return
                if await request.is_disconnected():
                    return
                await asyncio.sleep(STREAM_POLL_S)

        return StreamingResponse(
            gen(),
            media_type="text/event-stream",
            headers={"cache-control": "no-cache", "x-accel-buffering": "no"},
        )

    # -- media -----------------------------------------------------------------

    @app.get("/media/{media_id}")
    async def media(media_id: str, request: Request):
        try:
            path, content_type = store.media_path(media_id)
        except UnknownArtifact:
            raise HTTPException(404, detail=f"unknown media {media_id}")
        data = path.read_bytes()
        range_header = request.headers.get("range")
        if range_header:
            m = _RANGE.match(range_header)
            if not m:
                raise HTTPException(416, detail="unsatisfiable range")
            start = int(m.group(1)) if m.group(1) else 0
            end = int(m.group(2)) if m.group(2) else len(data) - 1
            if start >= len(data) or start > end:
                raise HTTPException(416, detail="unsatisfiable range")
            end = min(end, len(data) - 1)
            chunk = data[start : end + 1]
            return Response(
                content=chunk,
                status_code=206,
                media_type=content_type,
                headers={
                    "content-range": f"bytes {start}-{end}/{len(data)}",
                    "accept-ranges": "bytes",
                },
            )
        return Response(
            content=data,
            media_type=content_type,
            headers={"accept-ranges": "bytes"},
        )

    # Serve the trainer panel when a build is present (demo convenience).
    frontend_dist = Path(__file__).resolve().parents[3] / "frontend" / "dist"
    if frontend_dist.is_dir():
        app.mount("/", StaticFiles(directory=frontend_dist, html=True), name="ui")

    return app
