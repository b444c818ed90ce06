"""Ground an answer in transcript segments and a playback window.

Takes the top-k lexical matches, keeps the best-scoring run of segments
that are adjacent in transcript order, and returns that run with its hull
window. Everything the assistant says about the task traces back to one of
these runs.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..transcript import PlaybackWindow, TimedSegment, Transcript, find_segments
from ..transcript.steps import window_for_segments

GROUNDING_TOP_K = 3


@dataclass(frozen=True, slots=True)
class NoMatch:
    """The query shares no token with any segment; not an error."""


@dataclass(frozen=True, slots=True)
class GroundedAnswer:
    segments: tuple[TimedSegment, ...]
    window: PlaybackWindow


def ground_answer(
    t: Transcript, query: str, k: int = GROUNDING_TOP_K
) -> GroundedAnswer | NoMatch:
    matches = find_segments(t, query, k=k)
    if not matches:
        return NoMatch()

    scores = dict(matches)
    positions = sorted(t.position(seg_id) for seg_id, _ in matches)

    runs: list[list[int]] = [[positions[0]]]
    for pos in positions[1:]:
        if pos == runs[-1][-1] + 1:
            runs[-1].append(pos)
        else:
            runs.append([pos])

    def run_score(run: list[int]) -> float:
        return sum(scores[t.segments[pos].id] for pos in run)

    best = max(runs, key=lambda run: (run_score(run), -run[0]))
    segments = tuple(t.segments[pos] for pos in best)
    return GroundedAnswer(
        segments=segments,
        window=window_for_segments(t, [seg.id for seg in segments]),
    )
