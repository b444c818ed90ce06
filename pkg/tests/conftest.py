"""Shared fixtures: the narrated juice-mixing walkthrough and twin scripts."""

from __future__ import annotations

import json

import pytest

from mixguide.transcript import Transcript, parse_transcript_json, segment_into_steps
from mixguide.twin import Action, ActionType

# The narrated walkthrough used across the suite. Narration follows the
# four task phases (preparation, assembly, mixing, final) with one marker
# segment opening each phase, plus explicit trouble-handling sentences so
# the troubleshoot path has material to ground against.
FIXTURE_SEGMENTS = [
    ("s01", 0, 4000, "Welcome to the walkthrough. We begin with the preparation phase, getting a container ready for juice."),
    ("s02", 4000, 9000, "Pick up an empty container from the rack beside the station."),
    ("s03", 9000, 15000, "Place the container under the spout and it will fill with your chosen juice automatically."),
    ("s04", 15000, 21000, "Watch the fill level indicator and wait until it reaches the top."),
    ("s05", 21000, 26000, "Now we move on to assembly of the mixing hardware."),
    ("s06", 26000, 32000, "Take it away from the spout and press the lid firmly onto the rim."),
    ("s07", 32000, 39000, "Attach the temperature and pH sensors to the sockets on the lid."),
    ("s08", 39000, 45000, "Connect the tube from the pump outlet to the inlet on the lid."),
    ("s09", 45000, 50000, "With everything attached we can start mixing the juice."),
    ("s10", 50000, 57000, "Set the pump strength to medium and leave the mode on continuous for a smooth blend."),
    ("s11", 57000, 64000, "Start the pump and let it run until the progress gauge reaches the end."),
    ("s12", 64000, 70000, "If the pump won't start, check that the tube is seated and the lid is sealed."),
    ("s13", 70000, 75000, "The final check is all that remains."),
    ("s14", 75000, 81000, "Stop the pump, then inspect the mixture and confirm the juice looks evenly blended."),
]

FIXTURE_TASK_ID = "juice-mixing"


def fixture_document() -> dict:
    return {
        "version": "1",
        "task_id": FIXTURE_TASK_ID,
        "language_tag": "en-US",
        "segments": [
            {"id": seg_id, "start_ms": start, "end_ms": end, "text": text}
            for seg_id, start, end, text in FIXTURE_SEGMENTS
        ],
        "source": {"recording_id": "expert-take-1", "duration_ms": 81000},
    }


@pytest.fixture
def fixture_bytes() -> bytes:
    return json.dumps(fixture_document()).encode("utf-8")


@pytest.fixture
def transcript(fixture_bytes) -> Transcript:
    return parse_transcript_json(fixture_bytes)


@pytest.fixture
def guide(transcript):
    return segment_into_steps(transcript)


def make_transcript(segments, task_id="t", language_tag="en") -> Transcript:
    doc = {
        "version": "1",
        "task_id": task_id,
        "language_tag": language_tag,
        "segments": [
            {"id": s, "start_ms": a, "end_ms": b, "text": t} for s, a, b, t in segments
        ],
        "source": {},
    }
    return parse_transcript_json(json.dumps(doc).encode())


# Canonical twin happy path: (tick-to ms before acting, action). Fill takes
# 4 s at the default 0.25/s; mixing takes 10 s at high/continuous.
HAPPY_PATH = [
    (0, Action(ActionType.PICK_CONTAINER)),
    (0, Action(ActionType.PLACE_UNDER_SPOUT, "orange")),
    (4000, Action(ActionType.REMOVE_FROM_SPOUT)),
    (4000, Action(ActionType.ATTACH_LID)),
    (4000, Action(ActionType.ATTACH_SENSOR, "temperature")),
    (4000, Action(ActionType.ATTACH_SENSOR, "ph")),
    (4000, Action(ActionType.CONNECT_TUBE)),
    (4000, Action(ActionType.SET_PUMP_STRENGTH, "high")),
    (4000, Action(ActionType.SET_PUMP_MODE, "continuous")),
    (4000, Action(ActionType.START_PUMP)),
    (14000, Action(ActionType.STOP_PUMP)),
    (14000, Action(ActionType.INSPECT_MIXTURE)),
]
