"""Prompt assembly for LLM-backed sessions.

The bundle's context is exactly the serialized transcript: the assistant
must not receive any other knowledge source, so grounding violations are a
construction-time impossibility rather than a policy hope.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..transcript import serialize_transcript
from .model import AssistantTurn, Session, UserTurn

HISTORY_EXCERPT_TURNS = 10

REPLY_SCHEMA = (
    '{"reply": "<string>", "start_ms": <int, optional>, '
    '"end_ms": <int, optional>, "step_done": <bool>}'
)

SYSTEM_INSTRUCTION = (
    "You are a training assistant walking one trainee through a narrated "
    "machine-operation task. Your three jobs: "
    "(1) Guide: present the task steps one at a time, in order, and wait for "
    "the trainee to confirm completion before moving on to the next step. "
    "(2) Answer: answer questions using only the timestamped walkthrough "
    "transcript provided as context, citing the time range that covers the "
    "answer. "
    "(3) Troubleshoot: when the trainee reports a problem, suggest a fix "
    "drawn from the walkthrough content. "
    "You have no knowledge beyond the transcript; if it does not cover "
    "something, say so instead of inventing an answer. "
    f"Respond with a single JSON object of the form {REPLY_SCHEMA}. "
    "start_ms and end_ms bound the video playback window demonstrating your "
    "reply; omit them when no window applies. Set step_done to true only "
    "when the trainee confirmed the current step is complete."
)


@dataclass(frozen=True, slots=True)
class PromptBundle:
    """Contract between the engine and any chat backend, real or mock."""

    system_instruction: str
    context_transcript: str
    history_excerpt: tuple[tuple[str, str], ...]  # (role, text) pairs
    user_text: str
    reply_schema: str = REPLY_SCHEMA


def build_prompt(session: Session, turn: UserTurn) -> PromptBundle:
    """Assemble the bundle: full transcript context, last 10 turns, query."""
    excerpt = []
    for past in session.history[-HISTORY_EXCERPT_TURNS:]:
        if isinstance(past, AssistantTurn):
            excerpt.append(("assistant", past.text))
        else:
            excerpt.append(("user", past.text))
    return PromptBundle(
        system_instruction=SYSTEM_INSTRUCTION,
        context_transcript=serialize_transcript(session.transcript).decode("utf-8"),
        history_excerpt=tuple(excerpt),
        user_text=turn.text,
    )
