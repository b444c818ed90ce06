"""Session lifecycle: greeting, gated progression, grounding, replay."""

import pytest

from mixguide.engine import (
    AssistantTurn,
    Modality,
    SessionCompleted,
    Stage,
    TaskMismatch,
    TurnKind,
    UserTurn,
    create_session,
    handle_turn,
    scripted_responder,
    classify_intent,
)
from mixguide.engine.turns import (
    TPL_ANSWER,
    TPL_CLARIFICATION,
    TPL_COMPLETION,
    TPL_GATE_NUDGE,
    TPL_GREETING,
    TPL_INSTRUCTION,
    TPL_NO_MATCH,
    TPL_TROUBLESHOOT,
)
from mixguide.transcript import segment_into_steps
from mixguide.twin import Action, ActionType, apply_action, new_twin, tick

from conftest import make_transcript


def drive(session, texts, **kwargs):
    turns = []
    for text in texts:
        session, turn = handle_turn(session, UserTurn(text=text), **kwargs)
        turns.append(turn)
    return session, turns


def test_create_session_greeting(transcript, guide):
    session, greeting = create_session(transcript, guide)
    assert greeting.kind is TurnKind.GREETING
    assert greeting.window is None
    assert "juice-mixing" in greeting.text
    assert session.current_step == 0
    assert session.stage is Stage.GREETING_SENT
    assert session.history == (greeting,)


def test_task_mismatch(transcript, guide):
    other = make_transcript([("a", 0, 5, "hello there")], task_id="other-task")
    with pytest.raises(TaskMismatch):
        create_session(other, guide)


def test_full_scripted_session(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, turns = drive(session, ["start", "done", "done", "done", "done"])

    kinds = [t.kind for t in turns]
    assert kinds == [TurnKind.INSTRUCTION] * 4 + [TurnKind.COMPLETION]
    assert [t.step_index for t in turns] == [0, 1, 2, 3, 3]
    for i, turn in enumerate(turns[:4]):
        assert turn.window == guide.steps[i].window
    assert session.stage is Stage.COMPLETED
    assert session.current_step == 4


def test_done_from_awaiting_confirmation_advances(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, _ = drive(session, ["start"])
    assert session.stage is Stage.INSTRUCTING
    # a query moves the session to awaiting_confirmation
    session, _ = drive(session, ["which sensors do I attach?"])
    assert session.stage is Stage.AWAITING_CONFIRMATION
    session, (turn,) = drive(session, ["done"])
    assert session.current_step == 1
    assert turn.kind is TurnKind.INSTRUCTION
    assert turn.window == guide.steps[1].window


def test_query_answer_covers_sensor_segment(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, _ = drive(session, ["start"])
    session, (answer,) = drive(session, ["which sensors do I attach?"])
    assert answer.kind is TurnKind.ANSWER
    sensor_seg = transcript.segment("s07")
    assert answer.window.start_ms <= sensor_seg.start_ms
    assert sensor_seg.end_ms <= answer.window.end_ms
    assert "temperature and pH sensors" in answer.text


def test_trouble_turn(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, (turn,) = drive(session, ["the pump won't start"])
    assert turn.kind is TurnKind.TROUBLESHOOT
    assert turn.window is not None
    assert "tube is seated" in turn.text


def test_unknown_is_state_preserving(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, _ = drive(session, ["start"])
    before = (session.current_step, session.stage)
    session, (turn,) = drive(session, ["asdfgh"])
    assert turn.kind is TurnKind.CLARIFICATION
    assert (session.current_step, session.stage) == before


def test_repeat_reemits_instruction(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, (first,) = drive(session, ["start"])
    session, (again,) = drive(session, ["repeat"])
    assert again == first


def test_goto_step_both_directions(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, (turn,) = drive(session, ["go to step 3"])
    assert session.current_step == 2
    assert turn.window == guide.steps[2].window
    session, (turn,) = drive(session, ["go to step 1"])
    assert session.current_step == 0
    assert turn.step_index == 0


def test_nomatch_reply(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, (turn,) = drive(session, ["what about zebras?"])
    assert turn.kind is TurnKind.CLARIFICATION
    assert turn.text == TPL_NO_MATCH


def test_completed_session_accepts_only_query_and_repeat(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, _ = drive(session, ["start", "done", "done", "done", "done"])
    assert session.completed

    session, (answer,) = drive(session, ["where does the tube connect?"])
    assert answer.kind is TurnKind.ANSWER
    session, (again,) = drive(session, ["repeat"])
    assert again.kind is TurnKind.COMPLETION

    for text in ["done", "start", "go to step 2"]:
        with pytest.raises(SessionCompleted):
            handle_turn(session, UserTurn(text=text))


def test_greeting_done_behaves_like_start(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, (turn,) = drive(session, ["done"])
    assert turn.kind is TurnKind.INSTRUCTION
    assert session.current_step == 0  # confirming nothing: step 0 instruction


def test_history_alternates(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, _ = drive(session, ["start", "done", "what next?"])
    history = session.history
    assert isinstance(history[0], AssistantTurn)
    for i, item in enumerate(history[1:], start=1):
        assert isinstance(item, UserTurn if i % 2 else AssistantTurn)


def test_twin_gating_blocks_unconfirmed_step(transcript, guide):
    twin = new_twin()
    session, _ = create_session(transcript, guide, twin_binding="tw")
    session, _ = drive(session, ["start"], twin_state=twin)
    session, (nudge,) = drive(session, ["done"], twin_state=twin)
    assert nudge.kind is TurnKind.TROUBLESHOOT
    assert session.current_step == 0
    assert session.stage is Stage.AWAITING_CONFIRMATION
    assert nudge.window == guide.steps[0].window

    # do the work: pick, place, fill
    twin = apply_action(twin, Action(ActionType.PICK_CONTAINER))
    twin = apply_action(twin, Action(ActionType.PLACE_UNDER_SPOUT, "orange"))
    twin = tick(twin, 4000)
    session, (turn,) = drive(session, ["done"], twin_state=twin)
    assert turn.kind is TurnKind.INSTRUCTION
    assert session.current_step == 1


def test_twin_gating_off_by_flag(transcript, guide):
    twin = new_twin()
    session, _ = create_session(transcript, guide, twin_binding="tw")
    session, _ = drive(session, ["start"], twin_state=twin, strict_gating=False)
    session, (turn,) = drive(session, ["done"], twin_state=twin, strict_gating=False)
    assert turn.kind is TurnKind.INSTRUCTION
    assert session.current_step == 1


def test_replay_determinism(transcript, guide):
    script = [
        "start",
        "which sensors do I attach?",
        "done",
        "the pump won't start",
        "repeat",
        "done",
        "done",
        "done",
    ]

    def run():
        session, greeting = create_session(transcript, guide, session_id="fixed")
        turns = [greeting]
        for text in script:
            session, turn = handle_turn(
                session, UserTurn(text=text, received_at_ms=0)
            )
            turns.append(turn)
        return turns

    assert run() == run()


def test_windows_always_inside_duration(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, turns = drive(
        session,
        ["start", "how do I fill the container", "done", "repeat", "step 4", "done"],
    )
    for turn in turns:
        if turn.window is not None:
            assert 0 <= turn.window.start_ms < turn.window.end_ms
            assert turn.window.end_ms <= transcript.duration_ms


def test_closed_world_templates(transcript, guide):
    """Every scripted sentence must come from the fixed templates plus
    transcript/guide text."""
    session, greeting = create_session(transcript, guide)
    n = guide.step_count()
    allowed = {TPL_GREETING.format(task=transcript.task_id, n=n)}
    allowed.add(TPL_COMPLETION)
    allowed.add(TPL_CLARIFICATION)
    allowed.add(TPL_NO_MATCH)
    for step in guide.steps:
        allowed.add(
            TPL_INSTRUCTION.format(
                num=step.index + 1, n=n, title=step.title, instruction=step.instruction
            )
        )
        allowed.add(
            TPL_GATE_NUDGE.format(
                num=step.index + 1, title=step.title, hint=step.completion_hint
            )
        )
    # grounded turns: template over any contiguous run of segment texts
    texts = [seg.text for seg in transcript.segments]
    for i in range(len(texts)):
        for j in range(i, len(texts)):
            excerpt = " ".join(texts[i : j + 1])
            allowed.add(TPL_ANSWER.format(excerpt=excerpt))
            allowed.add(TPL_TROUBLESHOOT.format(excerpt=excerpt))

    script = [
        "start", "which sensors do I attach?", "done", "the pump won't start",
        "asdfgh", "repeat", "what about zebras?", "done", "go to step 1",
        "done", "done", "done",
    ]
    turns = [greeting]
    for text in script:
        session, turn = handle_turn(session, UserTurn(text=text))
        turns.append(turn)
    for turn in turns:
        assert turn.text in allowed, f"unexpected wording: {turn.text!r}"


def test_scripted_responder_matches_handle_turn(transcript, guide):
    session, _ = create_session(transcript, guide)
    session, _ = drive(session, ["start"])
    for text in ["done", "which sensors do I attach?", "repeat", "asdfgh"]:
        intent = classify_intent(text, session)
        expected = scripted_responder(session, intent)
        _, actual = handle_turn(session, UserTurn(text=text))
        assert actual == expected
