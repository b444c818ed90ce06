"""Canonical JSON serialization for transcripts and guides.

Canonical form: UTF-8, sorted keys, no insignificant whitespace. Two
serializations of equal values are byte-identical, and parse of serialize
is the identity.
"""

from __future__ import annotations

import json

from .model import StepGuide, Transcript


def canonical_json_bytes(value: dict) -> bytes:
    return json.dumps(
        value, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def serialize_transcript(t: Transcript) -> bytes:
    return canonical_json_bytes(t.to_dict())


def serialize_guide(g: StepGuide) -> bytes:
    return canonical_json_bytes(g.to_dict())
