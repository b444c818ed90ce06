"""Compile a transcript into an ordered step guide.

A new step begins at every segment whose text matches a marker phrase
(whole-word, case-insensitive) or whose id is listed as an explicit
boundary. Step 0 always begins at segment 0, so the result is a partition
of the whole transcript no matter what the rules say.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .model import PlaybackWindow, Step, StepGuide, Transcript

# The four phases narrated in the expert walkthrough, in task order.
DEFAULT_MARKER_TITLES: dict[str, str] = {
    "preparation": "Preparation",
    "assembly": "Assembly",
    "mixing": "Mixing",
    "final": "Final Steps",
}

_STEP_PREFIX = re.compile(r"^\s*step\b", re.IGNORECASE)


@dataclass(frozen=True)
class SegmentationRules:
    """Marker phrases and/or explicit boundary segment ids.

    ``markers`` maps a phrase to the step title it produces; build one from
    a plain phrase list with :meth:`from_phrases`. A segment whose text
    begins with the word "step" also opens a step titled "Step <n>".
    """

    markers: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_MARKER_TITLES)
    )
    boundary_ids: frozenset[str] = frozenset()

    @classmethod
    def from_phrases(
        cls, phrases: list[str], boundary_ids: set[str] | None = None
    ) -> "SegmentationRules":
        markers = {p.lower(): p.strip().title() for p in phrases}
        return cls(markers=markers, boundary_ids=frozenset(boundary_ids or ()))

    def matched_title(self, text: str) -> str | None:
        for phrase, title in self.markers.items():
            if re.search(rf"\b{re.escape(phrase)}\b", text, re.IGNORECASE):
                return title
        if _STEP_PREFIX.search(text):
            return ""  # placeholder title, filled in as "Step <n>"
        return None


def window_for_segments(t: Transcript, ids: list[str]) -> PlaybackWindow:
    """Hull window over the referenced segments (gaps included).

    The hull is a single contiguous range because the video player seeks
    one range per turn. Raises UnknownSegment for ids not in ``t`` and
    ValueError when ``ids`` is empty.
    """
    if not ids:
        raise ValueError("ids must be non-empty")
    segments = [t.segment(i) for i in ids]
    return PlaybackWindow(
        start_ms=min(s.start_ms for s in segments),
        end_ms=max(s.end_ms for s in segments),
    )


def segment_into_steps(
    t: Transcript, rules: SegmentationRules | None = None
) -> StepGuide:
    """Partition the transcript into ordered steps per the rules.

    No boundary matches is not an error: the result is a single step
    spanning the whole transcript.
    """
    rules = rules or SegmentationRules()

    boundaries: list[tuple[int, str | None]] = []  # (segment position, title)
    for pos, seg in enumerate(t.segments):
        title = rules.matched_title(seg.text)
        if seg.id in rules.boundary_ids and title is None:
            title = ""
        if pos == 0 and title is None:
            title = ""  # step 0 always begins at segment 0
        if title is not None:
            boundaries.append((pos, title or None))

    steps: list[Step] = []
    for index, (start_pos, title) in enumerate(boundaries):
        end_pos = (
            boundaries[index + 1][0] if index + 1 < len(boundaries) else len(t.segments)
        )
        members = t.segments[start_pos:end_pos]
        steps.append(
            Step(
                id=f"step-{index}",
                index=index,
                title=title or f"Step {index + 1}",
                instruction=members[0].text,
                segment_ids=tuple(seg.id for seg in members),
                window=window_for_segments(t, [seg.id for seg in members]),
                completion_hint=members[-1].text,
            )
        )
    return StepGuide(task_id=t.task_id, steps=tuple(steps))
