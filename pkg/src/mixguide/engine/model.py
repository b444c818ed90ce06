"""Session types for the training assistant.

A Session is an immutable value: every processed turn yields a new Session
with the turn pair appended to history. The engine owner must process turns
for one session strictly sequentially; distinct sessions are independent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..transcript import PlaybackWindow, StepGuide, Transcript


class EngineError(Exception):
    """Base class for session-engine failures."""


class TaskMismatch(EngineError):
    """Transcript and guide belong to different tasks."""


class SessionCompleted(EngineError):
    """A mutating turn was submitted to a finished session."""


class Stage(str, enum.Enum):
    GREETING_SENT = "greeting_sent"
    INSTRUCTING = "instructing"
    AWAITING_CONFIRMATION = "awaiting_confirmation"
    COMPLETED = "completed"


class TurnKind(str, enum.Enum):
    GREETING = "greeting"
    INSTRUCTION = "instruction"
    ANSWER = "answer"
    TROUBLESHOOT = "troubleshoot"
    CONFIRMATION_PROMPT = "confirmation_prompt"
    COMPLETION = "completion"
    CLARIFICATION = "clarification"


# Turn kinds that must carry a playback window.
WINDOWED_KINDS = frozenset(
    {TurnKind.INSTRUCTION, TurnKind.ANSWER, TurnKind.TROUBLESHOOT}
)


class Modality(str, enum.Enum):
    TEXT = "text"
    SPEECH = "speech"


@dataclass(frozen=True, slots=True)
class UserTurn:
    text: str
    modality: Modality = Modality.TEXT
    received_at_ms: int = 0

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("user turn text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "modality": self.modality.value,
            "received_at_ms": self.received_at_ms,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UserTurn":
        return cls(
            text=d["text"],
            modality=Modality(d.get("modality", "text")),
            received_at_ms=int(d.get("received_at_ms", 0)),
        )


@dataclass(frozen=True, slots=True)
class AssistantTurn:
    kind: TurnKind
    text: str
    step_index: int
    window: PlaybackWindow | None = None
    audio_ref: str | None = None

    def __post_init__(self):
        if self.kind in WINDOWED_KINDS and self.window is None:
            raise ValueError(f"{self.kind.value} turns must carry a window")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "text": self.text,
            "step_index": self.step_index,
            "window": self.window.to_dict() if self.window else None,
            "audio_ref": self.audio_ref,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AssistantTurn":
        window = d.get("window")
        return cls(
            kind=TurnKind(d["kind"]),
            text=d["text"],
            step_index=int(d["step_index"]),
            window=PlaybackWindow(window["start_ms"], window["end_ms"])
            if window
            else None,
            audio_ref=d.get("audio_ref"),
        )


class IntentKind(str, enum.Enum):
    START_TASK = "start_task"
    CONFIRM_DONE = "confirm_done"
    QUERY = "query"
    TROUBLE = "trouble"
    REPEAT = "repeat"
    GOTO_STEP = "goto_step"
    UNKNOWN = "unknown"


@dataclass(frozen=True, slots=True)
class Intent:
    kind: IntentKind
    text: str | None = None  # carried by Query and Trouble
    step_index: int | None = None  # carried by GotoStep, already 0-based


@dataclass(frozen=True)
class Session:
    """Live training session state."""

    id: str
    transcript: Transcript
    guide: StepGuide
    current_step: int = 0
    stage: Stage = Stage.GREETING_SENT
    history: tuple = ()
    twin_binding: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "history", tuple(self.history))
        n = self.guide.step_count()
        if not 0 <= self.current_step <= n:
            raise ValueError(f"current_step {self.current_step} out of [0, {n}]")
        if (self.stage is Stage.COMPLETED) != (self.current_step == n):
            raise ValueError("stage is completed iff current_step equals step count")
        self._check_alternation()

    def _check_alternation(self):
        if not self.history:
            return
        if not (
            isinstance(self.history[0], AssistantTurn)
            and self.history[0].kind is TurnKind.GREETING
        ):
            raise ValueError("history must open with the greeting turn")
        for i, turn in enumerate(self.history[1:], start=1):
            expect_user = i % 2 == 1
            if expect_user != isinstance(turn, UserTurn):
                raise ValueError("history must alternate roles after the greeting")

    @property
    def completed(self) -> bool:
        return self.stage is Stage.COMPLETED

    def step_count(self) -> int:
        return self.guide.step_count()
