"""HTTP service: ingestion, sessions, twin actions, SSE stream, storage."""

from .app import create_app
from .config import ServiceConfig, load_config
from .manager import NoTwinBound, SessionBusy, SessionManager, StaleClock
from .replay import ReplayReport, TurnDiff, replay_session_log
from .store import ArtifactStore, UnknownArtifact

__all__ = [
    "ArtifactStore",
    "NoTwinBound",
    "ReplayReport",
    "ServiceConfig",
    "SessionBusy",
    "SessionManager",
    "StaleClock",
    "TurnDiff",
    "UnknownArtifact",
    "create_app",
    "load_config",
    "replay_session_log",
]
