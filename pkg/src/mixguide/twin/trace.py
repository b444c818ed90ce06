"""Action trace files: JSON lines, one ``{at_ms, action, params}`` per line.

A trace replays deterministically: before each action the twin is ticked up
to the action's at_ms, so the same file always produces the same final
state. at_ms values must be non-decreasing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .machine import apply_action, new_twin, tick
from .model import Action, Rejection, TwinConfig, TwinState


class TraceError(Exception):
    """A trace line is unreadable or out of order."""


@dataclass(frozen=True, slots=True)
class TraceEntry:
    at_ms: int
    action: Action

    def to_line(self) -> str:
        body = {"at_ms": self.at_ms, **self.action.to_dict()}
        return json.dumps(body, sort_keys=True, separators=(",", ":"))


def parse_trace(lines: Iterable[str]) -> Iterator[TraceEntry]:
    last_at = 0
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            doc = json.loads(line)
            at_ms = int(doc["at_ms"])
            action = Action.from_dict(doc)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise TraceError(f"line {lineno}: {exc}") from None
        if at_ms < last_at:
            raise TraceError(f"line {lineno}: at_ms {at_ms} decreases")
        last_at = at_ms
        yield TraceEntry(at_ms=at_ms, action=action)


@dataclass(frozen=True, slots=True)
class ReplayStep:
    """One applied trace entry together with the state it produced."""

    entry: TraceEntry
    outcome: TwinState | Rejection
    state: TwinState


def replay_trace(
    lines: Iterable[str], config: TwinConfig | None = None
) -> list[ReplayStep]:
    """Run a trace from a fresh twin; rejections are recorded, not fatal."""
    state = new_twin(config)
    steps: list[ReplayStep] = []
    for entry in parse_trace(lines):
        if entry.at_ms > state.clock_ms:
            state = tick(state, entry.at_ms - state.clock_ms)
        outcome = apply_action(state, entry.action)
        if not isinstance(outcome, Rejection):
            state = outcome
        steps.append(ReplayStep(entry=entry, outcome=outcome, state=state))
    return steps
