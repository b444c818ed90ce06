"""Runtime session registry: turn serialization, events, twin binding,
and crash recovery from the append-only event log.

Each live session owns a non-blocking lock (a second concurrent turn is
refused, not queued), an in-memory copy of its stream events, and its twin
instance when one was requested. Everything emitted on the stream is also
appended to the session's log first, so a restarted service rebuilds the
exact same state from disk.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field, replace

from ..engine import (
    AssistantTurn,
    Modality,
    Responder,
    SCRIPTED,
    Session,
    Stage,
    UserTurn,
    create_session,
    handle_turn,
)
from ..providers import (
    AudioBlob,
    AudioFormat,
    MockChat,
    MockSpeechToText,
    MockTextToSpeech,
    ProviderResponder,
    decode_wav,
)
from ..twin import (
    Action,
    Rejection,
    TwinConfig,
    TwinState,
    apply_action,
    legal_actions,
    new_twin,
    phase_of,
    tick,
)
from .config import ServiceConfig
from .store import ArtifactStore, UnknownArtifact


class SessionBusy(Exception):
    """A turn arrived while a previous turn for the session is processing."""


class NoTwinBound(Exception):
    """Twin action sent to a session created without a twin."""


class StaleClock(Exception):
    """A twin action's at_ms lies before the twin clock."""


@dataclass
class _Runtime:
    session: Session
    transcript_id: str
    guide_id: str
    twin: TwinState | None
    seq: int = 0
    events: list[dict] = field(default_factory=list)
    turn_lock: threading.Lock = field(default_factory=threading.Lock)
    # Reentrant: twin_action emits events while holding it.
    state_lock: threading.RLock = field(default_factory=threading.RLock)

    def events_after(self, after_seq: int) -> list[dict]:
        with self.state_lock:
            return [e for e in self.events if e["seq"] > after_seq]


def _now_ms() -> int:
    return int(time.time() * 1000)


def twin_payload(state: TwinState) -> dict:
    return {
        "state": state.to_dict(),
        "phase": phase_of(state).label,
        "legal_actions": sorted(
            (a.to_dict() for a in legal_actions(state)),
            key=lambda d: (d["action"], str(d.get("params", ""))),
        ),
    }


class SessionManager:
    def __init__(self, store: ArtifactStore, config: ServiceConfig):
        self.store = store
        self.config = config
        self._runtimes: dict[str, _Runtime] = {}
        self._registry_lock = threading.Lock()
        self.stt = MockSpeechToText()
        self.tts = MockTextToSpeech()

    def _responder(self, on_fallback) -> Responder:
        if self.config.provider == "mock":
            return ProviderResponder(
                MockChat(), self.config.policy, on_fallback=on_fallback
            )
        if self.config.provider == "live":
            from ..providers import LiveChat

            return ProviderResponder(
                LiveChat(policy=self.config.policy),
                self.config.policy,
                on_fallback=on_fallback,
            )
        return SCRIPTED

    # -- lifecycle -----------------------------------------------------------

    def create(
        self, transcript_id: str, guide_id: str, twin: bool = False
    ) -> _Runtime:
        transcript = self.store.load_transcript(transcript_id)
        guide = self.store.load_guide(guide_id)
        session_id = uuid.uuid4().hex[:12]
        session, greeting = create_session(
            transcript,
            guide,
            session_id=session_id,
            twin_binding=session_id if twin else None,
        )
        greeting = self._with_tts(greeting)
        session = replace(session, history=(greeting,))

        runtime = _Runtime(
            session=session,
            transcript_id=transcript_id,
            guide_id=guide_id,
            twin=new_twin(self.config.twin) if twin else None,
        )
        with self._registry_lock:
            self._runtimes[session_id] = runtime

        self.store.append_session_event(
            session_id,
            {
                "type": "session_created",
                "session_id": session_id,
                "transcript_id": transcript_id,
                "guide_id": guide_id,
                "twin": twin,
                "twin_config": self.config.twin.to_dict() if twin else None,
                "strict_gating": self.config.strict_gating,
                "created_at_ms": _now_ms(),
            },
        )
        self._emit_turn_event(runtime, user=None, turn=greeting, transcription=None)
        if runtime.twin is not None:
            self._emit_twin_event(runtime, action=None)
        return runtime

    def get(self, session_id: str) -> _Runtime:
        with self._registry_lock:
            runtime = self._runtimes.get(session_id)
        if runtime is not None:
            return runtime
        return self._recover(session_id)

    # -- turns -----------------------------------------------------------------

    def text_turn(
        self,
        session_id: str,
        text: str,
        modality: Modality = Modality.TEXT,
        transcription: str | None = None,
    ) -> dict:
        runtime = self.get(session_id)
        if not runtime.turn_lock.acquire(blocking=False):
            raise SessionBusy(session_id)
        try:
            fallbacks: list[str] = []
            responder = self._responder(fallbacks.append)
            user = UserTurn(text=text, modality=modality, received_at_ms=_now_ms())
            session, turn = handle_turn(
                runtime.session,
                user,
                responder,
                twin_state=runtime.twin,
                strict_gating=self.config.strict_gating,
            )
            turn = self._with_tts(turn)
            session = replace(session, history=session.history[:-1] + (turn,))
            with runtime.state_lock:
                runtime.session = session
            for message in fallbacks:
                self._emit_error_event(runtime, message)
            event = self._emit_turn_event(
                runtime, user=user, turn=turn, transcription=transcription
            )
            return event
        finally:
            runtime.turn_lock.release()

    def audio_turn(self, session_id: str, wav_bytes: bytes) -> dict:
        _, duration_ms, sample_rate = decode_wav(wav_bytes)
        blob = AudioBlob(
            format=AudioFormat.WAV_PCM16,
            sample_rate_hz=sample_rate,
            data=wav_bytes,
            duration_ms=max(1, duration_ms),
        )
        segments = self.stt.transcribe(blob)
        transcription = " ".join(seg.text for seg in segments).strip()
        if not transcription:
            raise ValueError("audio carried no transcribable speech")
        return self.text_turn(
            session_id,
            transcription,
            modality=Modality.SPEECH,
            transcription=transcription,
        )

    # -- twin ---------------------------------------------------------------------

    def twin_action(
        self, session_id: str, action_body: dict, at_ms: int | None = None
    ) -> dict:
        runtime = self.get(session_id)
        if runtime.twin is None:
            raise NoTwinBound(session_id)
        with runtime.state_lock:
            state = runtime.twin
            if at_ms is not None:
                if at_ms < state.clock_ms:
                    raise StaleClock(
                        f"at_ms {at_ms} is before twin clock {state.clock_ms}"
                    )
                if at_ms > state.clock_ms:
                    state = tick(state, at_ms - state.clock_ms)

            if action_body.get("action") == "tick":
                runtime.twin = state
                return self._emit_twin_event(
                    runtime, action={"action": "tick", "at_ms": at_ms}
                )

            action = Action.from_dict(action_body)
            outcome = apply_action(state, action)
            if isinstance(outcome, Rejection):
                # State (including any tick) is kept; the rejection is not
                # an event, it is the caller's problem.
                runtime.twin = state
                return {"rejected": outcome.to_dict(), **twin_payload(state)}
            runtime.twin = outcome
            return self._emit_twin_event(
                runtime,
                action={**action.to_dict(), "at_ms": at_ms},
            )

    # -- events -------------------------------------------------------------------

    def _emit(self, runtime: _Runtime, body: dict) -> dict:
        """Allocate the next seq and append to log + memory atomically, so
        the stream order always matches seq order with no gaps."""
        with runtime.state_lock:
            runtime.seq += 1
            event = {"seq": runtime.seq, **body}
            self.store.append_session_event(runtime.session.id, event)
            runtime.events.append(event)
        return event

    def _emit_turn_event(
        self,
        runtime: _Runtime,
        user: UserTurn | None,
        turn: AssistantTurn,
        transcription: str | None,
    ) -> dict:
        session = runtime.session
        return self._emit(
            runtime,
            {
                "type": "assistant_turn",
                "user": user.to_dict() if user else None,
                "transcription": transcription,
                "turn": turn.to_dict(),
                "session": {
                    "current_step": session.current_step,
                    "stage": session.stage.value,
                    "step_count": session.step_count(),
                },
            },
        )

    def _emit_twin_event(self, runtime: _Runtime, action: dict | None) -> dict:
        return self._emit(
            runtime,
            {"type": "twin_state", "action": action, **twin_payload(runtime.twin)},
        )

    def _emit_error_event(self, runtime: _Runtime, message: str) -> dict:
        return self._emit(runtime, {"type": "error", "message": message})

    # -- recovery -----------------------------------------------------------------

    def _recover(self, session_id: str) -> _Runtime:
        """Rebuild runtime state from the event log after a restart."""
        entries = self.store.read_session_log(session_id)
        header = entries[0]
        if header.get("type") != "session_created":
            raise UnknownArtifact(f"session {session_id}: malformed log")

        transcript = self.store.load_transcript(header["transcript_id"])
        guide = self.store.load_guide(header["guide_id"])

        twin_state = (
            new_twin(TwinConfig.from_dict(header["twin_config"]))
            if header.get("twin")
            else None
        )

        history: list = []
        current_step, stage_value = 0, "greeting_sent"
        seq = 0
        events: list[dict] = []
        for entry in entries[1:]:
            events.append(entry)
            seq = max(seq, entry.get("seq", 0))
            if entry["type"] == "assistant_turn":
                if entry["user"] is not None:
                    history.append(UserTurn.from_dict(entry["user"]))
                history.append(AssistantTurn.from_dict(entry["turn"]))
                current_step = entry["session"]["current_step"]
                stage_value = entry["session"]["stage"]
            elif entry["type"] == "twin_state" and twin_state is not None:
                action = entry.get("action")
                if action is None:
                    continue
                at_ms = action.get("at_ms")
                if at_ms is not None and at_ms > twin_state.clock_ms:
                    twin_state = tick(twin_state, at_ms - twin_state.clock_ms)
                if action.get("action") != "tick":
                    outcome = apply_action(twin_state, Action.from_dict(action))
                    if isinstance(outcome, Rejection):  # pragma: no cover
                        raise RuntimeError(
                            f"session {session_id}: logged action replays as "
                            f"rejection {outcome.reason.value}"
                        )
                    twin_state = outcome

        session = Session(
            id=session_id,
            transcript=transcript,
            guide=guide,
            current_step=current_step,
            stage=Stage(stage_value),
            history=tuple(history),
            twin_binding=session_id if header.get("twin") else None,
        )
        runtime = _Runtime(
            session=session,
            transcript_id=header["transcript_id"],
            guide_id=header["guide_id"],
            twin=twin_state,
            seq=seq,
            events=events,
        )
        with self._registry_lock:
            return self._runtimes.setdefault(session_id, runtime)

    # -- helpers ------------------------------------------------------------

    def _with_tts(self, turn: AssistantTurn) -> AssistantTurn:
        if not self.config.tts:
            return turn
        blob = self.tts.synthesize(turn.text)
        media_id = self.store.save_media(blob.data, "audio/wav", ".wav")
        return replace(turn, audio_ref=media_id)
