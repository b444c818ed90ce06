"""Timestamped transcript parsing, step segmentation, and lexical search."""

from .model import (
    InvariantViolation,
    MalformedDocument,
    PlaybackWindow,
    Step,
    StepGuide,
    TimedSegment,
    Transcript,
    TranscriptError,
    UnknownSegment,
)
from .parse import parse_guide_json, parse_subtitle, parse_transcript_json
from .search import find_segments, tokenize
from .serialize import canonical_json_bytes, serialize_guide, serialize_transcript
from .steps import (
    DEFAULT_MARKER_TITLES,
    SegmentationRules,
    segment_into_steps,
    window_for_segments,
)

__all__ = [
    "DEFAULT_MARKER_TITLES",
    "InvariantViolation",
    "MalformedDocument",
    "PlaybackWindow",
    "SegmentationRules",
    "Step",
    "StepGuide",
    "TimedSegment",
    "Transcript",
    "TranscriptError",
    "UnknownSegment",
    "canonical_json_bytes",
    "find_segments",
    "parse_guide_json",
    "parse_subtitle",
    "parse_transcript_json",
    "segment_into_steps",
    "serialize_guide",
    "serialize_transcript",
    "tokenize",
    "window_for_segments",
]
