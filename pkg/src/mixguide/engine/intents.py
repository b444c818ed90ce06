"""Deterministic intent classification for user turns.

Rules fire in a fixed order so that classification never depends on model
behavior: confirmation words win over trouble words, which win over repeat,
step jumps, task start, and finally question detection.
"""

from __future__ import annotations

import re

from .model import Intent, IntentKind, Session

CONFIRM_LEXICON = ("done", "finished", "next", "completed", "ok next")
TROUBLE_LEXICON = ("stuck", "wrong", "won't", "error", "problem", "help")
REPEAT_LEXICON = ("again", "repeat")
START_LEXICON = ("start", "begin")

_INTERROGATIVES = frozenset(
    {
        "what", "which", "when", "where", "who", "whom", "whose", "why", "how",
        "can", "could", "do", "does", "did", "is", "are", "am", "will", "would",
        "should", "shall", "may", "might",
    }
)

_GOTO_STEP = re.compile(r"\b(?:go\s+to\s+)?step\s+(\d+)\b")


def _contains_any(text: str, lexicon: tuple[str, ...]) -> bool:
    return any(
        re.search(rf"\b{re.escape(word)}\b", text) is not None for word in lexicon
    )


def classify_intent(text: str, session: Session | None = None) -> Intent:
    """Map free text to an Intent using the fixed rule order.

    ``session`` bounds GotoStep resolution; passing None skips the bounds
    check (used by the mock chat backend, which has no session).
    """
    if not text.strip():
        raise ValueError("text must be non-empty")
    lowered = text.lower().replace("’", "'")

    if _contains_any(lowered, CONFIRM_LEXICON):
        return Intent(IntentKind.CONFIRM_DONE)
    if _contains_any(lowered, TROUBLE_LEXICON):
        return Intent(IntentKind.TROUBLE, text=text)
    if _contains_any(lowered, REPEAT_LEXICON):
        return Intent(IntentKind.REPEAT)
    goto = _GOTO_STEP.search(lowered)
    if goto:
        index = int(goto.group(1)) - 1  # spoken step numbers are 1-based
        if index < 0 or (
            session is not None and index >= session.guide.step_count()
        ):
            return Intent(IntentKind.UNKNOWN)
        return Intent(IntentKind.GOTO_STEP, step_index=index)
    if _contains_any(lowered, START_LEXICON):
        return Intent(IntentKind.START_TASK)
    first_token = re.findall(r"[0-9a-z']+", lowered)
    if "?" in text or (first_token and first_token[0] in _INTERROGATIVES):
        return Intent(IntentKind.QUERY, text=text)
    return Intent(IntentKind.UNKNOWN)
