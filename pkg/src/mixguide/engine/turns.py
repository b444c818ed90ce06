"""Session turn processing: greeting, step gating, grounding, templates.

handle_turn owns the state machine. Responders only supply reply content:
the scripted responder renders fixed templates over transcript and guide
text (bit-reproducible, fully offline), while a provider-backed responder
may substitute its own wording and playback window for the planned turn.
Any provider failure silently degrades to the scripted rendering so a
training session never stalls.
"""

from __future__ import annotations

import logging
import uuid
from dataclasses import dataclass, replace

from ..transcript import PlaybackWindow, StepGuide, Transcript
from ..twin import TwinState, is_step_complete
from .grounding import NoMatch, ground_answer
from .intents import classify_intent
from .model import (
    AssistantTurn,
    Intent,
    IntentKind,
    Session,
    SessionCompleted,
    Stage,
    TaskMismatch,
    TurnKind,
    UserTurn,
)
from .replies import ProviderReply

logger = logging.getLogger(__name__)

# Every sentence the scripted responder can say starts from one of these
# templates; the rest is transcript or guide text. Tests audit this.
TPL_GREETING = (
    "Hello! I'm your training assistant for '{task}'. I'll walk you through "
    "its {n} steps, answer questions about the walkthrough, and help you "
    "troubleshoot. Say 'start' when you're ready for the first step."
)
TPL_INSTRUCTION = (
    "Step {num} of {n} — {title}. {instruction} Say 'done' when you've "
    "finished this step."
)
TPL_COMPLETION = (
    "That was the final step, so the task is complete. Nice work! I can "
    "still answer questions about the walkthrough."
)
TPL_ANSWER = "Here's the part of the walkthrough that covers that: {excerpt}"
TPL_TROUBLESHOOT = "Let's sort that out. The walkthrough says: {excerpt}"
TPL_GATE_NUDGE = (
    "The machine state shows step {num} ({title}) isn't finished yet. "
    "{hint} Say 'done' once that's the case."
)
TPL_CLARIFICATION = (
    "I didn't catch that. Ask me a question about the task, say 'repeat' to "
    "hear the current step again, or 'done' when you've finished it."
)
TPL_NO_MATCH = "That isn't covered in the expert walkthrough."


def create_session(
    transcript: Transcript,
    guide: StepGuide,
    *,
    session_id: str | None = None,
    twin_binding: str | None = None,
) -> tuple[Session, AssistantTurn]:
    """Open a session at step 0 and produce the greeting turn."""
    if transcript.task_id != guide.task_id:
        raise TaskMismatch(
            f"transcript task {transcript.task_id!r} != guide task {guide.task_id!r}"
        )
    greeting = AssistantTurn(
        kind=TurnKind.GREETING,
        text=TPL_GREETING.format(task=transcript.task_id, n=guide.step_count()),
        step_index=0,
    )
    session = Session(
        id=session_id or uuid.uuid4().hex[:12],
        transcript=transcript,
        guide=guide,
        current_step=0,
        stage=Stage.GREETING_SENT,
        history=(greeting,),
        twin_binding=twin_binding,
    )
    return session, greeting


@dataclass(frozen=True, slots=True)
class _Plan:
    current_step: int
    stage: Stage
    turn: AssistantTurn
    gate_vetoed: bool = False  # twin refused the confirmation


def _instruction_turn(session: Session, step_index: int) -> AssistantTurn:
    step = session.guide.steps[step_index]
    return AssistantTurn(
        kind=TurnKind.INSTRUCTION,
        text=TPL_INSTRUCTION.format(
            num=step_index + 1,
            n=session.step_count(),
            title=step.title,
            instruction=step.instruction,
        ),
        step_index=step_index,
        window=step.window,
    )


def _completion_turn(session: Session) -> AssistantTurn:
    return AssistantTurn(
        kind=TurnKind.COMPLETION,
        text=TPL_COMPLETION,
        step_index=session.step_count() - 1,
    )


def _greeting_turn(session: Session) -> AssistantTurn:
    return AssistantTurn(
        kind=TurnKind.GREETING,
        text=TPL_GREETING.format(
            task=session.transcript.task_id, n=session.step_count()
        ),
        step_index=0,
    )


def _grounded_turn(session: Session, kind: TurnKind, query: str) -> AssistantTurn:
    grounded = ground_answer(session.transcript, query)
    if isinstance(grounded, NoMatch):
        return AssistantTurn(
            kind=TurnKind.CLARIFICATION,
            text=TPL_NO_MATCH,
            step_index=min(session.current_step, session.step_count() - 1),
        )
    template = TPL_ANSWER if kind is TurnKind.ANSWER else TPL_TROUBLESHOOT
    excerpt = " ".join(seg.text for seg in grounded.segments)
    return AssistantTurn(
        kind=kind,
        text=template.format(excerpt=excerpt),
        step_index=min(session.current_step, session.step_count() - 1),
        window=grounded.window,
    )


def _repeat_turn(session: Session) -> AssistantTurn:
    if session.stage is Stage.GREETING_SENT:
        return _greeting_turn(session)
    if session.stage is Stage.COMPLETED:
        return _completion_turn(session)
    return _instruction_turn(session, session.current_step)


def plan_turn(
    session: Session,
    intent: Intent,
    *,
    twin_state: TwinState | None = None,
    strict_gating: bool = True,
) -> _Plan:
    """Pure per-intent transition: next step pointer, stage, and turn."""
    cs, stage, n = session.current_step, session.stage, session.step_count()

    if stage is Stage.COMPLETED and intent.kind not in (
        IntentKind.QUERY,
        IntentKind.REPEAT,
    ):
        raise SessionCompleted(f"session {session.id} is completed")

    if intent.kind is IntentKind.CONFIRM_DONE:
        if stage is Stage.GREETING_SENT:
            # Nothing issued yet: treat as a request to start.
            return _Plan(cs, Stage.INSTRUCTING, _instruction_turn(session, cs))
        gated = (
            twin_state is not None
            and strict_gating
            and cs <= 3
            and not is_step_complete(twin_state, cs)
        )
        if gated:
            step = session.guide.steps[cs]
            nudge = AssistantTurn(
                kind=TurnKind.TROUBLESHOOT,
                text=TPL_GATE_NUDGE.format(
                    num=cs + 1, title=step.title, hint=step.completion_hint
                ),
                step_index=cs,
                window=step.window,
            )
            return _Plan(cs, Stage.AWAITING_CONFIRMATION, nudge, gate_vetoed=True)
        if cs + 1 == n:
            done = replace(session, current_step=cs + 1, stage=Stage.COMPLETED)
            return _Plan(cs + 1, Stage.COMPLETED, _completion_turn(done))
        return _Plan(
            cs + 1, Stage.INSTRUCTING, _instruction_turn(session, cs + 1)
        )

    if intent.kind is IntentKind.START_TASK:
        return _Plan(cs, Stage.INSTRUCTING, _instruction_turn(session, cs))

    if intent.kind is IntentKind.GOTO_STEP:
        target = intent.step_index
        assert target is not None and 0 <= target < n
        return _Plan(target, Stage.INSTRUCTING, _instruction_turn(session, target))

    if intent.kind is IntentKind.REPEAT:
        return _Plan(cs, stage, _repeat_turn(session))

    if intent.kind in (IntentKind.QUERY, IntentKind.TROUBLE):
        kind = (
            TurnKind.ANSWER if intent.kind is IntentKind.QUERY else TurnKind.TROUBLESHOOT
        )
        turn = _grounded_turn(session, kind, intent.text or "")
        next_stage = (
            Stage.AWAITING_CONFIRMATION if stage is Stage.INSTRUCTING else stage
        )
        return _Plan(cs, next_stage, turn)

    # Unknown: state-preserving clarification.
    clarification = AssistantTurn(
        kind=TurnKind.CLARIFICATION,
        text=TPL_CLARIFICATION,
        step_index=min(cs, n - 1),
    )
    return _Plan(cs, stage, clarification)


def scripted_responder(session: Session, intent: Intent) -> AssistantTurn:
    """Deterministic template rendering of the per-intent turn contract."""
    return plan_turn(session, intent).turn


class Responder:
    """Supplies reply content for a turn. The scripted base never consults
    anything beyond the session itself."""

    def consult(self, session: Session, turn: UserTurn) -> ProviderReply | None:
        return None


SCRIPTED = Responder()


def clamp_window(
    start_ms: int, end_ms: int, duration_ms: int
) -> PlaybackWindow | None:
    """Clamp a provider-sourced window to the transcript duration."""
    start = max(0, min(start_ms, duration_ms))
    end = max(0, min(end_ms, duration_ms))
    if start >= end:
        return None
    return PlaybackWindow(start_ms=start, end_ms=end)


def _merge_provider_content(
    planned: AssistantTurn, reply: ProviderReply, duration_ms: int
) -> AssistantTurn:
    window = planned.window
    if reply.has_window:
        window = clamp_window(reply.start_ms, reply.end_ms, duration_ms) or window
    # Planned kind and step index stand: the provider words the turn, the
    # engine owns the state machine.
    return replace(planned, text=reply.reply_text, window=window)


def handle_turn(
    session: Session,
    turn: UserTurn,
    responder: Responder = SCRIPTED,
    *,
    twin_state: TwinState | None = None,
    strict_gating: bool = True,
) -> tuple[Session, AssistantTurn]:
    """Process one user turn and return the new session plus the reply.

    Raises SessionCompleted for mutating turns on a finished session
    (queries and repeats stay allowed).
    """
    intent = classify_intent(turn.text, session)

    reply: ProviderReply | None = None
    if not session.completed:
        reply = responder.consult(session, turn)
        if reply is not None and reply.step_done and intent.kind in (
            IntentKind.QUERY,
            IntentKind.TROUBLE,
            IntentKind.UNKNOWN,
        ):
            # The provider recognized a confirmation the lexicon missed.
            intent = Intent(IntentKind.CONFIRM_DONE)

    plan = plan_turn(
        session, intent, twin_state=twin_state, strict_gating=strict_gating
    )

    out = plan.turn
    if reply is not None and not plan.gate_vetoed:
        out = _merge_provider_content(
            plan.turn, reply, session.transcript.duration_ms
        )

    new_session = replace(
        session,
        current_step=plan.current_step,
        stage=plan.stage,
        history=session.history + (turn, out),
    )
    return new_session, out
