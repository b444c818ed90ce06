"""Training-session engine: intents, grounding, prompts, turn handling."""

from .grounding import GROUNDING_TOP_K, GroundedAnswer, NoMatch, ground_answer
from .intents import classify_intent
from .model import (
    AssistantTurn,
    EngineError,
    Intent,
    IntentKind,
    Modality,
    Session,
    SessionCompleted,
    Stage,
    TaskMismatch,
    TurnKind,
    UserTurn,
    WINDOWED_KINDS,
)
from .prompts import (
    HISTORY_EXCERPT_TURNS,
    PromptBundle,
    REPLY_SCHEMA,
    SYSTEM_INSTRUCTION,
    build_prompt,
)
from .replies import ProviderReply, UnparseableReply, parse_provider_reply
from .turns import (
    Responder,
    SCRIPTED,
    clamp_window,
    create_session,
    handle_turn,
    plan_turn,
    scripted_responder,
)

__all__ = [
    "AssistantTurn",
    "EngineError",
    "GROUNDING_TOP_K",
    "GroundedAnswer",
    "HISTORY_EXCERPT_TURNS",
    "Intent",
    "IntentKind",
    "Modality",
    "NoMatch",
    "PromptBundle",
    "ProviderReply",
    "REPLY_SCHEMA",
    "Responder",
    "SCRIPTED",
    "SYSTEM_INSTRUCTION",
    "Session",
    "SessionCompleted",
    "Stage",
    "TaskMismatch",
    "TurnKind",
    "UnparseableReply",
    "UserTurn",
    "WINDOWED_KINDS",
    "build_prompt",
    "clamp_window",
    "classify_intent",
    "create_session",
    "ground_answer",
    "handle_turn",
    "parse_provider_reply",
    "plan_turn",
    "scripted_responder",
]
