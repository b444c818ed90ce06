"""Deterministic offline backends for speech-to-text, text-to-speech, chat.

Every mock is a pure function of its inputs: the whole test suite and the
demo run on these, and live adapters are optional drop-ins behind the same
interfaces.
"""

from __future__ import annotations

import json
import math

from ..engine.grounding import NoMatch, ground_answer
from ..engine.intents import classify_intent
from ..engine.model import IntentKind
from ..engine.prompts import PromptBundle
from ..transcript import TimedSegment, parse_transcript_json
from .audio import AudioBlob, AudioFormat, decode_wav, encode_wav
from .base import AudioRejected, ProviderPolicy

SEGMENT_SPAN_MS = 3_000
MS_PER_WORD = 60
DEFAULT_VOICE = "trainer"


class MockSpeechToText:
    """Reads the text side-channel of a WAV blob and times it out evenly."""

    def transcribe(self, blob: AudioBlob) -> list[TimedSegment]:
        if blob.format is not AudioFormat.WAV_PCM16:
            raise AudioRejected(f"unsupported audio format: {blob.format.value}")
        text, _, _ = decode_wav(blob.data)
        words = text.split()
        if not words:
            return []

        count = min(
            math.ceil(blob.duration_ms / SEGMENT_SPAN_MS), len(words)
        )
        base, extra = divmod(len(words), count)
        segments = []
        taken = 0
        for i in range(count):
            size = base + (1 if i < extra else 0)
            chunk = words[taken : taken + size]
            taken += size
            segments.append(
                TimedSegment(
                    id=f"u{i + 1}",
                    start_ms=i * SEGMENT_SPAN_MS,
                    end_ms=min((i + 1) * SEGMENT_SPAN_MS, blob.duration_ms),
                    text=" ".join(chunk),
                )
            )
        return segments


class MockTextToSpeech:
    """Silent PCM at 60 ms per word, with the text embedded for round-trips."""

    def synthesize(self, text: str, voice: str = DEFAULT_VOICE) -> AudioBlob:
        if not text.strip():
            raise ValueError("text must be non-empty")
        duration_ms = MS_PER_WORD * len(text.split())
        return AudioBlob(
            format=AudioFormat.WAV_PCM16,
            sample_rate_hz=16_000,
            data=encode_wav(text, duration_ms),
            duration_ms=duration_ms,
        )


_CANNED = {
    IntentKind.CONFIRM_DONE: "Confirmed — moving on.",
    IntentKind.START_TASK: "Let's begin with the first step.",
    IntentKind.REPEAT: "Here is the current step again.",
    IntentKind.GOTO_STEP: "Jumping to the step you asked for.",
    IntentKind.UNKNOWN: "Could you put that another way?",
}


class MockChat:
    """Maps the classified intent of the bundle's user text to a canned
    reply conforming to the reply JSON contract, with timestamps taken
    from grounding the query against the bundle's own context."""

    def __init__(self, policy: ProviderPolicy | None = None):
        self.policy = policy or ProviderPolicy()

    def complete(self, bundle: PromptBundle) -> str:
        intent = classify_intent(bundle.user_text, None)
        if intent.kind in (IntentKind.QUERY, IntentKind.TROUBLE):
            transcript = parse_transcript_json(bundle.context_transcript)
            grounded = ground_answer(transcript, bundle.user_text)
            if isinstance(grounded, NoMatch):
                body = {
                    "reply": "That isn't covered in the expert walkthrough.",
                    "step_done": False,
                }
            else:
                body = {
                    "reply": " ".join(seg.text for seg in grounded.segments),
                    "start_ms": grounded.window.start_ms,
                    "end_ms": grounded.window.end_ms,
                    "step_done": False,
                }
        else:
            body = {
                "reply": _CANNED[intent.kind],
                "step_done": intent.kind is IntentKind.CONFIRM_DONE,
            }
        return json.dumps(body, sort_keys=True)
