"""Acceptance criteria, one test per criterion, offline with mock backends.

Each test prints a PASS/FAIL line (run with ``pytest -s`` to see them all).
Oracles here are independent reimplementations: they share no code with the
paths they check.
"""

from __future__ import annotations

import json
import random
import re
import threading
import time

import pytest
from fastapi.testclient import TestClient

from mixguide.engine import (
    Intent,
    IntentKind,
    TurnKind,
    UserTurn,
    build_prompt,
    create_session,
    handle_turn,
    parse_provider_reply,
    scripted_responder,
)
from mixguide.providers import (
    MockChat,
    ProviderPolicy,
    ProviderResponder,
    ProviderUnavailable,
    Timeout,
    call_with_policy,
)
from mixguide.service import ArtifactStore, ServiceConfig, create_app, replay_session_log
from mixguide.transcript import (
    InvariantViolation,
    parse_transcript_json,
    segment_into_steps,
    serialize_transcript,
)
from mixguide.twin import (
    Action,
    ActionType,
    MixStatus,
    Phase,
    Rejection,
    TwinConfig,
    apply_action,
    legal_actions,
    new_twin,
    phase_of,
    tick,
)

from conftest import HAPPY_PATH, fixture_document


def report(name: str, elapsed: float | None = None):
    suffix = f" ({elapsed:.2f}s)" if elapsed is not None else ""
    print(f"PASS  {name}{suffix}")


WORDS = (
    "pick container place spout fill lid sensor tube pump mix juice inspect "
    "level watch press connect temperature ph strength mode knob blend rack "
    "station gauge seal rim top indicator"
).split()


def random_valid_document(rng: random.Random, max_segments: int = 12) -> dict:
    n = rng.randint(1, max_segments)
    segments = []
    clock = rng.randint(0, 3000)
    for i in range(n):
        start = clock + rng.randint(0, 2000)
        end = start + rng.randint(1, 8000)
        text = " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 8)))
        segments.append(
            {"id": f"g{i}", "start_ms": start, "end_ms": end, "text": text}
        )
        clock = end
    return {
        "version": "1",
        "task_id": f"task-{rng.randint(0, 99)}",
        "language_tag": "en",
        "segments": segments,
        "source": {},
    }


# --------------------------------------------------------------------------
# Criterion 1: transcript round-trip over 1,000 generated transcripts
# --------------------------------------------------------------------------

def test_transcript_round_trip_1000():
    rng = random.Random(20_240_601)
    started = time.perf_counter()

    for _ in range(1000):
        doc = random_valid_document(rng)
        t = parse_transcript_json(json.dumps(doc).encode())

        # invariants hold on the parsed value
        starts = [s.start_ms for s in t.segments]
        assert starts == sorted(starts) and len(set(starts)) == len(starts)
        for a, b in zip(t.segments, t.segments[1:]):
            assert a.end_ms <= b.start_ms
        assert len({s.id for s in t.segments}) == len(t.segments)
        assert all(s.end_ms > s.start_ms and s.text.strip() for s in t.segments)

        # parse . serialize is the identity, bytes and value alike
        data = serialize_transcript(t)
        again = parse_transcript_json(data)
        assert again == t
        assert serialize_transcript(again) == data

    # generated violations are rejected with the offending segment named
    rejected = 0
    for _ in range(250):
        doc = random_valid_document(rng, max_segments=8)
        segs = doc["segments"]
        choices = ["zero", "empty_text", "negative", "none"]
        if len(segs) >= 2:
            choices += ["overlap", "dup"]
        kind = rng.choice(choices)
        expect_id = None
        if kind == "overlap":
            j = rng.randrange(1, len(segs))
            prev = segs[j - 1]
            if prev["end_ms"] - prev["start_ms"] < 2:
                prev["end_ms"] = prev["start_ms"] + 2  # widen so overlap fits
            segs[j]["start_ms"] = prev["end_ms"] - 1
            segs[j]["end_ms"] = max(segs[j]["end_ms"], segs[j]["start_ms"] + 1)
            expect_id = segs[j]["id"]
        elif kind == "zero":
            j = rng.randrange(len(segs))
            segs[j]["end_ms"] = segs[j]["start_ms"]
            expect_id = segs[j]["id"]
        elif kind == "empty_text":
            j = rng.randrange(len(segs))
            segs[j]["text"] = "   "
            expect_id = segs[j]["id"]
        elif kind == "dup":
            j = rng.randrange(1, len(segs))
            segs[j]["id"] = segs[0]["id"]
            expect_id = segs[0]["id"]
        elif kind == "negative":
            segs[0]["start_ms"] = -1
            expect_id = segs[0]["id"]
        else:
            doc["segments"] = []

        with pytest.raises(InvariantViolation) as err:
            parse_transcript_json(json.dumps(doc).encode())
        if expect_id is not None:
            assert err.value.segment_id == expect_id
        rejected += 1

    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"runtime budget exceeded: {elapsed:.2f}s"
    assert rejected == 250
    report("transcript round-trip: 1000 valid + 250 mutated documents", elapsed)


# --------------------------------------------------------------------------
# Criterion 2: guide partition property over 500 generated transcripts
# --------------------------------------------------------------------------

def test_guide_partition_500():
    rng = random.Random(77)
    started = time.perf_counter()
    marker_pool = ["preparation", "assembly", "mixing", "final", "step one"]

    for _ in range(500):
        doc = random_valid_document(rng, max_segments=14)
        # sprinkle marker phrases into some segments
        for seg in doc["segments"]:
            if rng.random() < 0.25:
                seg["text"] = f"{rng.choice(marker_pool)} {seg['text']}"
        t = parse_transcript_json(json.dumps(doc).encode())
        g = segment_into_steps(t)

        # exact partition, in transcript order
        assigned = [sid for step in g.steps for sid in step.segment_ids]
        assert assigned == [s.id for s in t.segments]
        # contiguous indices, ordered/non-overlapping hull windows
        for i, step in enumerate(g.steps):
            assert step.index == i
            members = [t.segment(sid) for sid in step.segment_ids]
            assert step.window.start_ms == min(m.start_ms for m in members)
            assert step.window.end_ms == max(m.end_ms for m in members)
            if i > 0:
                assert step.window.start_ms >= g.steps[i - 1].window.end_ms

    fixture = parse_transcript_json(json.dumps(fixture_document()).encode())
    titles = [s.title for s in segment_into_steps(fixture).steps]
    assert titles == ["Preparation", "Assembly", "Mixing", "Final Steps"]

    elapsed = time.perf_counter() - started
    report(
        "guide partition: 500 generated transcripts + four-phase fixture", elapsed
    )


# --------------------------------------------------------------------------
# Criterion 3: twin exhaustiveness, random walk, canonical script
# --------------------------------------------------------------------------

def _independent_alphabet(config: TwinConfig) -> list[Action]:
    actions = [
        Action(ActionType.PICK_CONTAINER),
        Action(ActionType.REMOVE_FROM_SPOUT),
        Action(ActionType.ATTACH_LID),
        Action(ActionType.CONNECT_TUBE),
        Action(ActionType.START_PUMP),
        Action(ActionType.STOP_PUMP),
        Action(ActionType.INSPECT_MIXTURE),
    ]
    actions += [Action(ActionType.PLACE_UNDER_SPOUT, k) for k in config.juice_kinds]
    actions += [Action(ActionType.ATTACH_SENSOR, k) for k in ("temperature", "ph")]
    actions += [Action(ActionType.SET_PUMP_STRENGTH, v) for v in ("low", "medium", "high")]
    actions += [Action(ActionType.SET_PUMP_MODE, v) for v in ("continuous", "pulsed")]
    return actions


def _check_twin_invariants(state):
    if state.container is not None:
        assert 0.0 <= state.container.fill_level <= 1.0
    if state.mixture.status in (MixStatus.MIXING, MixStatus.MIXED):
        c = state.container
        assert c is not None and c.fill_level == 1.0 and c.lid_attached
        assert c.sensors == {"temperature", "ph"} and c.tube_connected
    if state.pump.running:
        assert state.container is not None and state.container.tube_connected
    assert 0.0 <= state.mixture.progress <= 1.0


def test_twin_exhaustiveness_and_walk():
    started = time.perf_counter()
    config = TwinConfig()
    alphabet = _independent_alphabet(config)

    # oracle equivalence on every happy-path state
    state = new_twin(config)
    states = [state]
    for at_ms, action in HAPPY_PATH:
        if at_ms > state.clock_ms:
            state = tick(state, at_ms - state.clock_ms)
            states.append(state)
        state = apply_action(state, action)
        assert not isinstance(state, Rejection)
        states.append(state)
    for s in states:
        oracle = {a for a in alphabet if not isinstance(apply_action(s, a), Rejection)}
        assert legal_actions(s) == oracle
    assert phase_of(states[-1]) is Phase.DONE

    # 10^5-step random legal walk, invariants checked at every step
    rng = random.Random(1234)
    s = new_twin(config)
    last_phase = phase_of(s)
    for _ in range(100_000):
        if rng.random() < 0.5:
            s = tick(s, rng.randint(1, 1500))
        else:
            out = apply_action(s, rng.choice(alphabet))
            if not isinstance(out, Rejection):
                s = out
        _check_twin_invariants(s)
        phase = phase_of(s)
        assert phase >= last_phase
        last_phase = phase

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"runtime budget exceeded: {elapsed:.2f}s"
    report("twin exhaustiveness + 1e5-step legal walk + canonical script", elapsed)


# --------------------------------------------------------------------------
# Criterion 4: scripted session scenario, bit-identical across runs
# --------------------------------------------------------------------------

def test_session_scenario_bit_identical():
    started = time.perf_counter()
    fixture = parse_transcript_json(json.dumps(fixture_document()).encode())
    guide = segment_into_steps(fixture)
    script = ["start", "done", "done", "done", "done"]

    def run() -> list[dict]:
        session, greeting = create_session(fixture, guide, session_id="scenario")
        turns = [greeting]
        for text in script:
            session, turn = handle_turn(session, UserTurn(text=text, received_at_ms=0))
            turns.append(turn)
        assert session.completed
        return [t.to_dict() for t in turns]

    first, second = run(), run()
    blob_a = json.dumps(first, sort_keys=True).encode()
    blob_b = json.dumps(second, sort_keys=True).encode()
    assert blob_a == blob_b, "replayed sequence differs bit-wise"

    kinds = [t["kind"] for t in first]
    assert kinds == ["greeting"] + ["instruction"] * 4 + ["completion"]
    indices = [t["step_index"] for t in first]
    assert indices == sorted(indices), "step indices must be monotone"
    for turn in first:
        if turn["window"] is not None:
            assert 0 <= turn["window"]["start_ms"] < turn["window"]["end_ms"]
            assert turn["window"]["end_ms"] <= fixture.duration_ms

    elapsed = time.perf_counter() - started
    report("session scenario: greeting + 4 gated instructions + completion", elapsed)


# --------------------------------------------------------------------------
# Criterion 5: grounding oracle over 200 generated queries
# --------------------------------------------------------------------------

def _oracle_window(transcript, query: str, k: int = 3):
    """Independent scorer: tokenize, inverse-frequency score, top-k, best
    adjacent run, hull."""

    def toks(text):
        return set(re.findall(r"[0-9a-z]+", text.lower()))

    df: dict[str, int] = {}
    for seg in transcript.segments:
        for token in toks(seg.text):
            df[token] = df.get(token, 0) + 1

    scored = []
    for pos, seg in enumerate(transcript.segments):
        shared = toks(query) & toks(seg.text)
        if shared:
            scored.append(
                (sum(1.0 / (1 + df[t]) for t in shared), seg.start_ms, pos)
            )
    if not scored:
        return None
    scored.sort(key=lambda x: (-x[0], x[1]))
    top = scored[:k]
    positions = sorted(pos for _, _, pos in top)
    score_at = {pos: score for score, _, pos in top}

    runs, current = [], [positions[0]]
    for pos in positions[1:]:
        if pos == current[-1] + 1:
            current.append(pos)
        else:
            runs.append(current)
            current = [pos]
    runs.append(current)
    best = max(runs, key=lambda run: (sum(score_at[p] for p in run), -run[0]))
    segs = [transcript.segments[p] for p in best]
    return (min(s.start_ms for s in segs), max(s.end_ms for s in segs))


def test_grounding_oracle_200_queries():
    started = time.perf_counter()
    fixture = parse_transcript_json(json.dumps(fixture_document()).encode())
    guide = segment_into_steps(fixture)
    session, _ = create_session(fixture, guide)

    vocabulary = sorted(
        {w for seg in fixture.segments for w in re.findall(r"[0-9a-z]+", seg.text.lower())}
    )
    noise = ["zebra", "xylophone", "quartz", "nebula"]
    rng = random.Random(55)

    checked = 0
    for _ in range(200):
        length = rng.randint(1, 5)
        pool = vocabulary if rng.random() < 0.8 else noise
        query = " ".join(rng.choice(pool) for _ in range(length))

        turn = scripted_responder(session, Intent(IntentKind.QUERY, text=query))
        expected = _oracle_window(fixture, query)
        if expected is None:
            assert turn.kind is TurnKind.CLARIFICATION
            assert turn.window is None
        else:
            assert turn.kind is TurnKind.ANSWER
            assert (turn.window.start_ms, turn.window.end_ms) == expected, query
        checked += 1

    assert checked == 200
    elapsed = time.perf_counter() - started
    report("grounding oracle: 200 generated queries match brute force", elapsed)


# --------------------------------------------------------------------------
# Criterion 6: provider contract — parseability, degradation, retry math
# --------------------------------------------------------------------------

class _AlwaysTimeout:
    def __init__(self):
        self.calls = 0

    def complete(self, bundle):
        self.calls += 1
        raise Timeout("injected timeout")


class _Garbage:
    def complete(self, bundle):
        return "no structured reply today"


class _FailsN:
    def __init__(self, n):
        self.n = n
        self.calls = 0

    def complete(self, bundle):
        self.calls += 1
        if self.calls <= self.n:
            raise ProviderUnavailable("injected outage")
        return '{"reply": "ok", "step_done": false}'


def test_provider_contract():
    started = time.perf_counter()
    fixture = parse_transcript_json(json.dumps(fixture_document()).encode())
    guide = segment_into_steps(fixture)
    session, _ = create_session(fixture, guide)

    # every mock reply parses
    chat = MockChat()
    texts = [
        "done", "start", "begin", "repeat", "again", "go to step 2", "step 3",
        "asdfgh", "which sensors do I attach?", "how do I fill the container",
        "the pump won't start", "I'm stuck", "what about zebras?", "help",
        "ok next", "finished", "inspect?", "why medium strength",
    ]
    parsed = 0
    for text in texts:
        raw = chat.complete(build_prompt(session, UserTurn(text=text)))
        parse_provider_reply(raw)
        parsed += 1
    assert parsed == len(texts)

    # injected failures always degrade to the scripted turn; never stall
    script = ["start", "which sensors do I attach?", "done", "done", "done", "done"]
    for broken in (
        ProviderResponder(
            _AlwaysTimeout(),
            ProviderPolicy(max_retries=2, backoff_initial_ms=1),
            sleep=lambda s: None,
        ),
        ProviderResponder(_Garbage()),
    ):
        degraded, _ = create_session(fixture, guide, session_id="degraded")
        reference, _ = create_session(fixture, guide, session_id="degraded")
        for text in script:
            degraded, got = handle_turn(degraded, UserTurn(text=text), broken)
            reference, want = handle_turn(reference, UserTurn(text=text))
            assert got == want
        assert degraded.completed

    # retry accounting: attempts = 1 + min(max_retries, failures)
    policy = ProviderPolicy(max_retries=2, backoff_initial_ms=50, backoff_multiplier=3.0)
    for failures in range(5):
        chat = _FailsN(failures)
        sleeps: list[float] = []
        try:
            call_with_policy(lambda: chat.complete(None), policy, sleep=sleeps.append)
        except ProviderUnavailable:
            assert failures > policy.max_retries
        assert chat.calls == 1 + min(policy.max_retries, failures)
        expected_backoff = [0.05 * 3.0**i for i in range(len(sleeps))]
        assert sleeps == pytest.approx(expected_backoff)

    elapsed = time.perf_counter() - started
    report("provider contract: parseability, degradation, retry accounting", elapsed)


# --------------------------------------------------------------------------
# Criterion 7: service consistency — isolation, crash replay, stream seq
# --------------------------------------------------------------------------

def test_service_consistency(tmp_path):
    started = time.perf_counter()
    data_dir = tmp_path / "data"
    app = create_app(ServiceConfig(data_dir=data_dir, tts=False))

    script = ["start", "which sensors do I attach?", "done", "done", "done", "done"]

    with TestClient(app) as client:
        tid = client.post(
            "/transcripts", content=json.dumps(fixture_document()).encode()
        ).json()["id"]
        gid = client.post(f"/transcripts/{tid}/guide", json={}).json()["id"]

        sessions = [
            client.post(
                "/sessions", json={"transcript_id": tid, "guide_id": gid}
            ).json()["id"]
            for _ in range(8)
        ]

        results: dict[str, list] = {sid: [] for sid in sessions}
        errors: list = []

        def drive(sid):
            try:
                for text in script:
                    r = client.post(f"/sessions/{sid}/turns", json={"text": text})
                    assert r.status_code == 200, r.text
                    results[sid].append(r.json())
            except Exception as exc:  # noqa: BLE001
                errors.append((sid, exc))

        threads = [threading.Thread(target=drive, args=(sid,)) for sid in sessions]
        for t in threads:
            t.start()
        for t in threads:
            t.join(timeout=60)
        assert not errors, errors

        # isolation: every session ran its own full script to completion
        for sid in sessions:
            turns = results[sid]
            assert [t["turn"]["kind"] for t in turns] == [
                "instruction", "answer", "instruction", "instruction",
                "instruction", "completion",
            ]
            snap = client.get(f"/sessions/{sid}").json()
            assert snap["stage"] == "completed"
            own_texts = [
                h["text"] for h in snap["history"] if h.get("modality") is not None
            ]
            assert own_texts == script  # nothing leaked across sessions

            # stream/REST consistency: gapless seq, each turn exactly once
            r = client.get(
                f"/sessions/{sid}/stream", params={"limit": len(script) + 1}
            )
            events = [
                json.loads(line[5:])
                for line in r.text.splitlines()
                if line.startswith("data:")
            ]
            assert [e["seq"] for e in events] == list(range(1, len(script) + 2))
            streamed = [e["turn"] for e in events if e["user"] is not None]
            assert streamed == [t["turn"] for t in turns]

        # kill mid-session and replay the log
        half_sid = client.post(
            "/sessions", json={"transcript_id": tid, "guide_id": gid}
        ).json()["id"]
        for text in script[:3]:
            client.post(f"/sessions/{half_sid}/turns", json={"text": text})
        before = client.get(f"/sessions/{half_sid}").json()

    app2 = create_app(ServiceConfig(data_dir=data_dir, tts=False))
    with TestClient(app2) as client2:
        after = client2.get(f"/sessions/{half_sid}").json()
        assert after == before

        store = ArtifactStore(data_dir)
        report_ = replay_session_log(store.read_session_log(half_sid), store)
        assert report_.identical, report_.diffs

        r = client2.post(f"/sessions/{half_sid}/turns", json={"text": "done"})
        assert r.status_code == 200
        assert r.json()["seq"] == before["last_seq"] + 1

    elapsed = time.perf_counter() - started
    report("service consistency: 8-way isolation, crash replay, gapless seq", elapsed)
