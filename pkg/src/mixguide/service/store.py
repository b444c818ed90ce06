"""File-backed artifact store: immutable documents plus append-only logs.

Layout under the data directory:

    transcripts/<id>.json   canonical transcript documents
    guides/<id>.json        canonical step-guide documents
    media/<id><ext>         opaque media bytes (+ <id>.meta.json sidecar)
    sessions/<id>.jsonl     append-only session event logs

Transcript, guide, and media ids are content hashes, so re-ingesting the
same bytes is idempotent and replayed TTS lands on the same id.
"""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path

from ..transcript import (
    StepGuide,
    Transcript,
    parse_guide_json,
    parse_transcript_json,
    serialize_guide,
    serialize_transcript,
)


class UnknownArtifact(KeyError):
    """No stored artifact has this id."""


def _content_id(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:12]


class ArtifactStore:
    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir)
        for sub in ("transcripts", "guides", "media", "sessions"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self._log_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- transcripts and guides ------------------------------------------

    def save_transcript(self, transcript: Transcript) -> str:
        data = serialize_transcript(transcript)
        artifact_id = _content_id(data)
        path = self.root / "transcripts" / f"{artifact_id}.json"
        if not path.exists():
            path.write_bytes(data)
        return artifact_id

    def load_transcript(self, artifact_id: str) -> Transcript:
        path = self.root / "transcripts" / f"{artifact_id}.json"
        if not path.exists():
            raise UnknownArtifact(f"transcript {artifact_id}")
        return parse_transcript_json(path.read_bytes())

    def save_guide(self, guide: StepGuide) -> str:
        data = serialize_guide(guide)
        artifact_id = _content_id(data)
        path = self.root / "guides" / f"{artifact_id}.json"
        if not path.exists():
            path.write_bytes(data)
        return artifact_id

    def load_guide(self, artifact_id: str) -> StepGuide:
        path = self.root / "guides" / f"{artifact_id}.json"
        if not path.exists():
            raise UnknownArtifact(f"guide {artifact_id}")
        return parse_guide_json(path.read_bytes())

    # -- media -------------------------------------------------------------

    def save_media(
        self, data: bytes, content_type: str, suffix: str = ""
    ) -> str:
        artifact_id = _content_id(data)
        path = self.root / "media" / f"{artifact_id}{suffix}"
        if not path.exists():
            path.write_bytes(data)
            meta = {"content_type": content_type, "suffix": suffix}
            (self.root / "media" / f"{artifact_id}.meta.json").write_text(
                json.dumps(meta), encoding="utf-8"
            )
        return artifact_id

    def media_path(self, artifact_id: str) -> tuple[Path, str]:
        meta_path = self.root / "media" / f"{artifact_id}.meta.json"
        if not meta_path.exists():
            raise UnknownArtifact(f"media {artifact_id}")
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        return (
            self.root / "media" / f"{artifact_id}{meta['suffix']}",
            meta["content_type"],
        )

    # -- session logs --------------------------------------------------------

    def _log_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._log_locks.setdefault(session_id, threading.Lock())

    def session_log_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.jsonl"

    def append_session_event(self, session_id: str, entry: dict) -> None:
        line = json.dumps(entry, sort_keys=True, separators=(",", ":"))
        with self._log_lock(session_id):
            with open(self.session_log_path(session_id), "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()

    def read_session_log(self, session_id: str) -> list[dict]:
        path = self.session_log_path(session_id)
        if not path.exists():
            raise UnknownArtifact(f"session {session_id}")
        with self._log_lock(session_id):
            text = path.read_text(encoding="utf-8")
        return [json.loads(line) for line in text.splitlines() if line.strip()]

    def has_session(self, session_id: str) -> bool:
        return self.session_log_path(session_id).exists()
