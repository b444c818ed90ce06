"""Parse raw chat-backend output into the structured reply contract."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .model import EngineError, TurnKind


class UnparseableReply(EngineError):
    """No JSON reply object could be extracted from the provider output."""


@dataclass(frozen=True, slots=True)
class ProviderReply:
    reply_text: str
    start_ms: int | None = None
    end_ms: int | None = None
    step_done: bool = False
    kind_hint: TurnKind | None = None

    @property
    def has_window(self) -> bool:
        return self.start_ms is not None and self.end_ms is not None


def _candidate_objects(raw: str):
    """Yield balanced JSON objects found anywhere in the text."""
    decoder = json.JSONDecoder()
    pos = raw.find("{")
    while pos != -1:
        try:
            value, _ = decoder.raw_decode(raw, pos)
        except json.JSONDecodeError:
            pass
        else:
            if isinstance(value, dict):
                yield value
        pos = raw.find("{", pos + 1)


def parse_provider_reply(raw: str) -> ProviderReply:
    """Extract the first balanced JSON object carrying a "reply" string.

    Tolerant of surrounding prose. Absent or invalid timestamps are dropped
    (the caller substitutes a fallback window); a missing reply object
    raises UnparseableReply so the caller can degrade to the scripted
    responder.
    """
    for obj in _candidate_objects(raw):
        reply = obj.get("reply")
        if not isinstance(reply, str) or not reply.strip():
            continue

        start_ms = obj.get("start_ms")
        end_ms = obj.get("end_ms")
        valid_times = (
            isinstance(start_ms, int)
            and isinstance(end_ms, int)
            and not isinstance(start_ms, bool)
            and not isinstance(end_ms, bool)
            and 0 <= start_ms < end_ms
        )
        if not valid_times:
            start_ms = end_ms = None

        step_done = obj.get("step_done") is True

        kind_hint = None
        raw_hint = obj.get("kind_hint")
        if isinstance(raw_hint, str):
            try:
                kind_hint = TurnKind(raw_hint)
            except ValueError:
                kind_hint = None

        return ProviderReply(
            reply_text=reply,
            start_ms=start_ms,
            end_ms=end_ms,
            step_done=step_done,
            kind_hint=kind_hint,
        )
    raise UnparseableReply("no JSON reply object found in provider output")
