"""Parsers for the transcript JSON schema and SRT/WebVTT subtitle files.

Invalid input is always rejected with the first violation, never repaired:
ingestion failures must be visible to the expert who recorded the video.
"""

from __future__ import annotations

import json
import re

from .model import (
    InvariantViolation,
    MalformedDocument,
    PlaybackWindow,
    Step,
    StepGuide,
    TimedSegment,
    Transcript,
)

SUBTITLE_FORMATS = ("srt", "vtt")

# SRT uses "HH:MM:SS,mmm"; WebVTT uses "HH:MM:SS.mmm" or "MM:SS.mmm".
_SRT_TIME = re.compile(r"^(\d{2,}):([0-5]\d):([0-5]\d),(\d{3})$")
_VTT_TIME = re.compile(r"^(?:(\d{2,}):)?([0-5]\d):([0-5]\d)\.(\d{3})$")
_TAG = re.compile(r"<[^>]*>")


def parse_transcript_json(data: bytes | str) -> Transcript:
    """Parse the canonical transcript JSON document.

    Raises MalformedDocument for non-JSON or missing/badly-typed fields and
    InvariantViolation (with the offending segment id) for structural
    violations such as overlap, zero-length cues, or empty text.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedDocument("top-level JSON value must be an object")

    version = doc.get("version")
    if version != "1":
        raise MalformedDocument(f"unsupported transcript version: {version!r}")
    for key in ("task_id", "language_tag", "segments"):
        if key not in doc:
            raise MalformedDocument(f"missing required field: {key}")
    if not isinstance(doc["segments"], list):
        raise MalformedDocument("segments must be a list")

    segments = []
    for i, raw in enumerate(doc["segments"]):
        if not isinstance(raw, dict):
            raise MalformedDocument(f"segment #{i} is not an object")
        try:
            seg_id = raw["id"]
            start_ms = raw["start_ms"]
            end_ms = raw["end_ms"]
            text = raw["text"]
        except KeyError as exc:
            raise MalformedDocument(f"segment #{i} missing field {exc}") from None
        if (
            not isinstance(seg_id, str)
            or not isinstance(text, str)
            or isinstance(start_ms, bool)
            or isinstance(end_ms, bool)
            or not isinstance(start_ms, int)
            or not isinstance(end_ms, int)
        ):
            raise MalformedDocument(f"segment #{i} has badly typed fields")
        segments.append(TimedSegment(id=seg_id, start_ms=start_ms, end_ms=end_ms, text=text))

    source = doc.get("source", {})
    if not isinstance(source, dict):
        raise MalformedDocument("source must be an object")
    return Transcript(
        task_id=str(doc["task_id"]),
        language_tag=str(doc["language_tag"]),
        segments=tuple(segments),
        source=source,
    )


def parse_subtitle(
    data: bytes | str,
    format: str,
    *,
    task_id: str = "task",
    language_tag: str = "und",
) -> Transcript:
    """Parse an SRT or WebVTT document into a Transcript.

    Cue timings map to integer milliseconds; cue ids are synthesized as
    ``c<ordinal>`` (1-based) when the format carries none. The resulting
    transcript is held to the same invariants as parse_transcript_json.
    """
    if format not in SUBTITLE_FORMATS:
        raise ValueError(f"format must be one of {SUBTITLE_FORMATS}, got {format!r}")
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"not valid UTF-8: {exc}") from None

    cues = _parse_vtt_cues(data) if format == "vtt" else _parse_srt_cues(data)
    segments = []
    for ordinal, (cue_id, start_ms, end_ms, text) in enumerate(cues, start=1):
        seg_id = cue_id if cue_id else f"c{ordinal}"
        segments.append(
            TimedSegment(id=seg_id, start_ms=start_ms, end_ms=end_ms, text=text)
        )
    return Transcript(
        task_id=task_id,
        language_tag=language_tag,
        segments=tuple(segments),
        source={"format": format},
    )


def _srt_timecode_ms(token: str) -> int:
    m = _SRT_TIME.match(token.strip())
    if not m:
        raise MalformedDocument(f"bad SRT timecode: {token.strip()!r}")
    h, mi, s, ms = (int(g) for g in m.groups())
    return ((h * 60 + mi) * 60 + s) * 1000 + ms


def _vtt_timecode_ms(token: str) -> int:
    m = _VTT_TIME.match(token.strip())
    if not m:
        raise MalformedDocument(f"bad WebVTT timecode: {token.strip()!r}")
    h = int(m.group(1)) if m.group(1) is not None else 0
    mi, s, ms = int(m.group(2)), int(m.group(3)), int(m.group(4))
    return ((h * 60 + mi) * 60 + s) * 1000 + ms


def _cue_timing(line: str, to_ms) -> tuple[int, int]:
    if "-->" not in line:
        raise MalformedDocument(f"bad cue timing line: {line!r}")
    left, _, right = line.partition("-->")
    # WebVTT allows cue settings after the end timecode.
    right = right.strip().split(" ")[0] if right.strip() else right
    start_ms = to_ms(left)
    end_ms = to_ms(right)
    if end_ms < start_ms:
        raise MalformedDocument(
            f"cue end before start: {line.strip()!r}"
        )
    return start_ms, end_ms


def _cue_text(lines: list[str]) -> str:
    text = " ".join(_TAG.sub("", line).strip() for line in lines)
    return re.sub(r"\s+", " ", text).strip()


def _blocks(data: str) -> list[list[str]]:
    blocks: list[list[str]] = []
    current: list[str] = []
    for line in data.replace("\r\n", "\n").replace("\r", "\n").split("\n"):
        if line.strip() == "":
            if current:
                blocks.append(current)
                current = []
        else:
            current.append(line)
    if current:
        blocks.append(current)
    return blocks


def _parse_srt_cues(data: str) -> list[tuple[str | None, int, int, str]]:
    cues = []
    for block in _blocks(data):
        lines = block
        # Leading numeric counter is sequence sugar, not a stable id.
        if lines and lines[0].strip().isdigit():
            lines = lines[1:]
        if not lines:
            raise MalformedDocument("SRT cue with no timing line")
        start_ms, end_ms = _cue_timing(lines[0], _srt_timecode_ms)
        cues.append((None, start_ms, end_ms, _cue_text(lines[1:])))
    return cues


def _parse_vtt_cues(data: str) -> list[tuple[str | None, int, int, str]]:
    blocks = _blocks(data)
    if not blocks or not blocks[0][0].startswith("WEBVTT"):
        raise MalformedDocument("missing WEBVTT header")
    # Drop the header block (which may carry metadata lines under it).
    blocks = blocks[1:]
    cues = []
    for block in blocks:
        if block[0].startswith(("NOTE", "STYLE", "REGION")):
            continue
        cue_id: str | None = None
        lines = block
        if "-->" not in lines[0]:
            cue_id = lines[0].strip()
            lines = lines[1:]
            if not lines:
                raise MalformedDocument(f"cue {cue_id!r} has no timing line")
        start_ms, end_ms = _cue_timing(lines[0], _vtt_timecode_ms)
        cues.append((cue_id, start_ms, end_ms, _cue_text(lines[1:])))
    return cues


def parse_guide_json(data: bytes | str) -> StepGuide:
    """Parse a StepGuide JSON document (inverse of serialize_guide)."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("version") != "1":
        raise MalformedDocument("unsupported guide document")
    try:
        steps = tuple(
            Step(
                id=raw["id"],
                index=raw["index"],
                title=raw["title"],
                instruction=raw["instruction"],
                segment_ids=tuple(raw["segment_ids"]),
                window=PlaybackWindow(
                    start_ms=raw["window"]["start_ms"],
                    end_ms=raw["window"]["end_ms"],
                ),
                completion_hint=raw["completion_hint"],
            )
            for raw in doc["steps"]
        )
        return StepGuide(task_id=doc["task_id"], steps=steps)
    except (KeyError, TypeError) as exc:
        raise MalformedDocument(f"bad guide document: {exc}") from None
