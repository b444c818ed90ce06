"""Re-run a recorded session log against the scripted responder.

Replays every logged user turn (and twin event) in order and diffs the
regenerated assistant turns against the recorded ones, field by field.
Scripted sessions must replay with zero differences; provider-backed
sessions may legitimately diverge in wording, which the diff makes
visible. audio_ref is excluded: speech synthesis happens after the engine
and is re-derivable from the text.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..engine import AssistantTurn, SCRIPTED, UserTurn, create_session, handle_turn
from ..twin import Action, Rejection, TwinConfig, apply_action, new_twin, tick
from .store import ArtifactStore

DIFF_FIELDS = ("kind", "text", "step_index", "window")


@dataclass
class TurnDiff:
    seq: int
    field: str
    recorded: object
    replayed: object


@dataclass
class ReplayReport:
    session_id: str
    turns_replayed: int = 0
    twin_events_replayed: int = 0
    diffs: list[TurnDiff] = field(default_factory=list)

    @property
    def identical(self) -> bool:
        return not self.diffs


def _diff_turn(seq: int, recorded: dict, replayed: AssistantTurn) -> list[TurnDiff]:
    replayed_dict = replayed.to_dict()
    return [
        TurnDiff(seq, name, recorded.get(name), replayed_dict.get(name))
        for name in DIFF_FIELDS
        if recorded.get(name) != replayed_dict.get(name)
    ]


def replay_session_log(entries: list[dict], store: ArtifactStore) -> ReplayReport:
    header = entries[0]
    if header.get("type") != "session_created":
        raise ValueError("log does not start with a session_created entry")

    transcript = store.load_transcript(header["transcript_id"])
    guide = store.load_guide(header["guide_id"])
    strict_gating = header.get("strict_gating", True)

    twin_state = (
        new_twin(TwinConfig.from_dict(header["twin_config"]))
        if header.get("twin")
        else None
    )

    session, greeting = create_session(
        transcript,
        guide,
        session_id=header["session_id"],
        twin_binding=header["session_id"] if header.get("twin") else None,
    )
    report = ReplayReport(session_id=header["session_id"])

    for entry in entries[1:]:
        kind = entry.get("type")
        seq = entry.get("seq", 0)
        if kind == "twin_state":
            action = entry.get("action")
            if twin_state is None or action is None:
                continue
            at_ms = action.get("at_ms")
            if at_ms is not None and at_ms > twin_state.clock_ms:
                twin_state = tick(twin_state, at_ms - twin_state.clock_ms)
            if action.get("action") != "tick":
                outcome = apply_action(twin_state, Action.from_dict(action))
                if isinstance(outcome, Rejection):
                    raise ValueError(
                        f"seq {seq}: logged action replays as rejection "
                        f"{outcome.reason.value}"
                    )
                twin_state = outcome
            report.twin_events_replayed += 1
        elif kind == "assistant_turn":
            if entry["user"] is None:
                report.turns_replayed += 1
                report.diffs.extend(_diff_turn(seq, entry["turn"], greeting))
                continue
            user = UserTurn.from_dict(entry["user"])
            session, turn = handle_turn(
                session,
                user,
                SCRIPTED,
                twin_state=twin_state,
                strict_gating=strict_gating,
            )
            report.turns_replayed += 1
            report.diffs.extend(_diff_turn(seq, entry["turn"], turn))
    return report
