"""Domain types for timestamped narration transcripts and compiled step guides.

All types are immutable (frozen dataclasses with tuple fields) and validate
their invariants at construction time, so a value that exists is a valid one.
Times are integer milliseconds throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class TranscriptError(Exception):
    """Base class for transcript ingestion and lookup failures."""


class MalformedDocument(TranscriptError):
    """Input is not parseable at all (bad JSON, bad timecode, missing fields)."""


class InvariantViolation(TranscriptError):
    """Input parsed but violates a structural invariant. Never repaired.

    ``segment_id`` names the first offending segment when one can be blamed.
    """

    def __init__(self, message: str, segment_id: str | None = None):
        super().__init__(message)
        self.segment_id = segment_id


class UnknownSegment(TranscriptError):
    """A referenced segment id does not exist in the transcript."""

    def __init__(self, segment_id: str):
        super().__init__(f"unknown segment id: {segment_id!r}")
        self.segment_id = segment_id


@dataclass(frozen=True, slots=True)
class TimedSegment:
    """One narration unit with its position on the recording timeline."""

    id: str
    start_ms: int
    end_ms: int
    text: str

    def __post_init__(self):
        if not self.id:
            raise InvariantViolation("segment id must be non-empty", self.id)
        if self.start_ms < 0:
            raise InvariantViolation(
                f"segment {self.id}: start_ms must be >= 0", self.id
            )
        if self.end_ms <= self.start_ms:
            raise InvariantViolation(
                f"segment {self.id}: end_ms must be greater than start_ms", self.id
            )
        if not self.text.strip():
            raise InvariantViolation(
                f"segment {self.id}: text is empty", self.id
            )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "start_ms": self.start_ms,
            "end_ms": self.end_ms,
            "text": self.text,
        }


@dataclass(frozen=True, slots=True)
class PlaybackWindow:
    """Interval of the expert video that demonstrates a step or answer."""

    start_ms: int
    end_ms: int

    def __post_init__(self):
        if self.start_ms < 0:
            raise InvariantViolation("window start_ms must be >= 0")
        if self.end_ms <= self.start_ms:
            raise InvariantViolation("window end_ms must be greater than start_ms")

    def contains(self, other: "PlaybackWindow") -> bool:
        return self.start_ms <= other.start_ms and other.end_ms <= self.end_ms

    def to_dict(self) -> dict:
        return {"start_ms": self.start_ms, "end_ms": self.end_ms}


@dataclass(frozen=True)
class Transcript:
    """Ordered, non-overlapping narration segments for one task.

    The segment list is the assistant's only knowledge source; ``source``
    carries free-form recording metadata and is never interpreted.
    """

    task_id: str
    language_tag: str
    segments: tuple[TimedSegment, ...]
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise InvariantViolation("transcript has no segments")
        seen: set[str] = set()
        prev: TimedSegment | None = None
        for seg in self.segments:
            if seg.id in seen:
                raise InvariantViolation(
                    f"duplicate segment id {seg.id!r}", seg.id
                )
            seen.add(seg.id)
            if prev is not None:
                if seg.start_ms <= prev.start_ms:
                    raise InvariantViolation(
                        f"segment {seg.id}: start_ms not strictly increasing", seg.id
                    )
                if seg.start_ms < prev.end_ms:
                    raise InvariantViolation(
                        f"segment {seg.id}: overlaps previous segment {prev.id}",
                        seg.id,
                    )
            prev = seg
        index = {seg.id: i for i, seg in enumerate(self.segments)}
        object.__setattr__(self, "_index", index)

    @property
    def duration_ms(self) -> int:
        return self.segments[-1].end_ms

    def segment(self, segment_id: str) -> TimedSegment:
        try:
            return self.segments[self._index[segment_id]]
        except KeyError:
            raise UnknownSegment(segment_id) from None

    def position(self, segment_id: str) -> int:
        try:
            return self._index[segment_id]
        except KeyError:
            raise UnknownSegment(segment_id) from None

    def __contains__(self, segment_id: str) -> bool:
        return segment_id in self._index

    def to_dict(self) -> dict:
        return {
            "version": "1",
            "task_id": self.task_id,
            "language_tag": self.language_tag,
            "segments": [seg.to_dict() for seg in self.segments],
            "source": dict(self.source),
        }


@dataclass(frozen=True, slots=True)
class Step:
    """One confirmable task step owning a slice of the transcript."""

    id: str
    index: int
    title: str
    instruction: str
    segment_ids: tuple[str, ...]
    window: PlaybackWindow
    completion_hint: str

    def __post_init__(self):
        object.__setattr__(self, "segment_ids", tuple(self.segment_ids))
        if not self.segment_ids:
            raise InvariantViolation(f"step {self.id}: no segments assigned")
        if self.index < 0:
            raise InvariantViolation(f"step {self.id}: negative index")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "index": self.index,
            "title": self.title,
            "instruction": self.instruction,
            "segment_ids": list(self.segment_ids),
            "window": self.window.to_dict(),
            "completion_hint": self.completion_hint,
        }


@dataclass(frozen=True, slots=True)
class StepGuide:
    """Ordered decomposition of a transcript into steps."""

    task_id: str
    steps: tuple[Step, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise InvariantViolation("guide has no steps")
        for i, step in enumerate(self.steps):
            if step.index != i:
                raise InvariantViolation(
                    f"step {step.id}: index {step.index} not contiguous (expected {i})"
                )
            if i > 0 and step.window.start_ms < self.steps[i - 1].window.end_ms:
                raise InvariantViolation(
                    f"step {step.id}: window overlaps previous step"
                )

    def step_count(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict:
        return {
            "version": "1",
            "task_id": self.task_id,
            "steps": [step.to_dict() for step in self.steps],
        }
