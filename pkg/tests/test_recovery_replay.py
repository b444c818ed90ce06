"""Crash recovery from the event log, scripted replay diffing, live SSE."""

import json
import socket
import threading
import time

import httpx
import pytest
from fastapi.testclient import TestClient

from mixguide.providers import encode_wav
from mixguide.service import (
    ArtifactStore,
    ServiceConfig,
    create_app,
    replay_session_log,
)

from conftest import fixture_document


def boot(tmp_path):
    app = create_app(ServiceConfig(data_dir=tmp_path / "data"))
    return app, TestClient(app)


def seed(client, twin=False):
    tid = client.post(
        "/transcripts", content=json.dumps(fixture_document()).encode()
    ).json()["id"]
    gid = client.post(f"/transcripts/{tid}/guide", json={}).json()["id"]
    sid = client.post(
        "/sessions", json={"transcript_id": tid, "guide_id": gid, "twin": twin}
    ).json()["id"]
    return tid, gid, sid


def test_restart_reconstructs_identical_state(tmp_path):
    app1, client1 = boot(tmp_path)
    _, _, sid = seed(client1)
    for text in ["start", "which sensors do I attach?", "done"]:
        assert client1.post(f"/sessions/{sid}/turns", json={"text": text}).status_code == 200
    before = client1.get(f"/sessions/{sid}").json()
    runtime_before = app1.state.manager.get(sid)

    # "kill": a brand-new app over the same data dir, nothing carried over
    app2, client2 = boot(tmp_path)
    after = client2.get(f"/sessions/{sid}").json()
    assert after == before

    runtime_after = app2.state.manager.get(sid)
    assert runtime_after.session == runtime_before.session
    assert runtime_after.seq == runtime_before.seq
    assert runtime_after.events == runtime_before.events

    # the restarted service continues the session correctly
    r = client2.post(f"/sessions/{sid}/turns", json={"text": "done"})
    assert r.status_code == 200
    assert r.json()["session"]["current_step"] == 2
    assert r.json()["seq"] == before["last_seq"] + 1


def test_restart_restores_twin_state(tmp_path):
    app1, client1 = boot(tmp_path)
    _, _, sid = seed(client1, twin=True)
    client1.post(f"/sessions/{sid}/twin/actions", json={"action": "pick_container"})
    client1.post(
        f"/sessions/{sid}/twin/actions",
        json={"action": "place_under_spout", "params": {"juice_kind": "mango"}},
    )
    client1.post(f"/sessions/{sid}/twin/actions", json={"action": "tick", "at_ms": 2000})
    before = app1.state.manager.get(sid).twin

    app2, client2 = boot(tmp_path)
    after = app2.state.manager.get(sid).twin
    assert after == before
    assert after.container.fill_level == 0.5
    assert after.container.juice_kind == "mango"


def test_stream_replays_full_history_after_restart(tmp_path):
    app1, client1 = boot(tmp_path)
    _, _, sid = seed(client1)
    for text in ["start", "done"]:
        client1.post(f"/sessions/{sid}/turns", json={"text": text})

    app2, client2 = boot(tmp_path)
    r = client2.get(f"/sessions/{sid}/stream", params={"limit": 3})
    events = [
        json.loads(line[5:]) for line in r.text.splitlines() if line.startswith("data:")
    ]
    assert [e["seq"] for e in events] == [1, 2, 3]
    assert events[0]["turn"]["kind"] == "greeting"
    assert events[1]["user"]["text"] == "start"


def test_scripted_session_replays_identically(tmp_path):
    app, client = boot(tmp_path)
    _, _, sid = seed(client, twin=True)

    # do the first twin phase and confirm it, mixing queries in
    client.post(f"/sessions/{sid}/turns", json={"text": "start"})
    client.post(f"/sessions/{sid}/twin/actions", json={"action": "pick_container"})
    client.post(
        f"/sessions/{sid}/twin/actions",
        json={"action": "place_under_spout", "params": {"juice_kind": "orange"}},
    )
    client.post(f"/sessions/{sid}/twin/actions", json={"action": "tick", "at_ms": 4000})
    wav = encode_wav("which sensors do I attach", 3000)
    client.post(f"/sessions/{sid}/audio-turns", content=wav)
    client.post(f"/sessions/{sid}/turns", json={"text": "done"})

    store = ArtifactStore(tmp_path / "data")
    report = replay_session_log(store.read_session_log(sid), store)
    assert report.identical, report.diffs
    assert report.turns_replayed == 4  # greeting + 3 replies
    assert report.twin_events_replayed == 3  # pick + place + tick


def test_replay_flags_tampered_log(tmp_path):
    app, client = boot(tmp_path)
    _, _, sid = seed(client)
    client.post(f"/sessions/{sid}/turns", json={"text": "start"})

    store = ArtifactStore(tmp_path / "data")
    entries = store.read_session_log(sid)
    entries[-1]["turn"]["text"] = "someone edited this"
    report = replay_session_log(entries, store)
    assert not report.identical
    assert report.diffs[0].field == "text"


def _free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def test_live_sse_tail_over_real_server(tmp_path):
    """Events posted after the stream opens arrive on the open connection."""
    import uvicorn

    app = create_app(ServiceConfig(data_dir=tmp_path / "data"))
    port = _free_port()
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{port}"
    for _ in range(100):
        try:
            httpx.get(base + "/sessions/none", timeout=1)
            break
        except httpx.TransportError:
            time.sleep(0.05)

    try:
        tid = httpx.post(
            base + "/transcripts", content=json.dumps(fixture_document()).encode()
        ).json()["id"]
        gid = httpx.post(base + f"/transcripts/{tid}/guide", json={}).json()["id"]
        sid = httpx.post(
            base + "/sessions", json={"transcript_id": tid, "guide_id": gid}
        ).json()["id"]

        got = []
        ready = threading.Event()

        def consume():
            with httpx.stream(
                "GET", base + f"/sessions/{sid}/stream", timeout=20
            ) as response:
                ready.set()
                for line in response.iter_lines():
                    if line.startswith("data:"):
                        got.append(json.loads(line[5:]))
                        if len(got) >= 2:
                            return

        consumer = threading.Thread(target=consume)
        consumer.start()
        assert ready.wait(timeout=5)
        time.sleep(0.2)  # stream is tailing; now produce a live event
        httpx.post(base + f"/sessions/{sid}/turns", json={"text": "start"})
        consumer.join(timeout=10)
        assert not consumer.is_alive()
        assert [e["seq"] for e in got] == [1, 2]
        assert got[1]["turn"]["kind"] == "instruction"
    finally:
        server.should_exit = True
        thread.join(timeout=5)
