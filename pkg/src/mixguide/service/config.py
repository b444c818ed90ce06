"""Service configuration: one JSON file plus environment overrides.

Credentials never live in the file; the live chat adapter reads its own
environment variables (see providers.live) and MIXGUIDE_AUTH_TOKEN /
MIXGUIDE_DATA_DIR override the file here.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..providers import ProviderPolicy
from ..twin import TwinConfig

PROVIDERS = ("scripted", "mock", "live")

AUTH_TOKEN_ENV = "MIXGUIDE_AUTH_TOKEN"
DATA_DIR_ENV = "MIXGUIDE_DATA_DIR"

DEFAULT_MAX_UPLOAD_BYTES = 10 * 1024 * 1024


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path = Path("data")
    provider: str = "scripted"
    strict_gating: bool = True
    tts: bool = True
    policy: ProviderPolicy = field(default_factory=ProviderPolicy)
    twin: TwinConfig = field(default_factory=TwinConfig)
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES
    auth_token: str | None = None
    host: str = "127.0.0.1"
    port: int = 8077

    def __post_init__(self):
        if self.provider not in PROVIDERS:
            raise ValueError(f"provider must be one of {PROVIDERS}")
        object.__setattr__(self, "data_dir", Path(self.data_dir))


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Read the config file (all keys optional) and apply env overrides."""
    raw: dict = {}
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))

    policy = ProviderPolicy(**raw.get("policy", {}))
    twin = TwinConfig.from_dict(raw.get("twin", {}))

    data_dir = os.environ.get(DATA_DIR_ENV) or raw.get("data_dir", "data")
    auth_token = os.environ.get(AUTH_TOKEN_ENV) or raw.get("auth_token")

    return ServiceConfig(
        data_dir=Path(data_dir),
        provider=raw.get("provider", "scripted"),
        strict_gating=raw.get("strict_gating", True),
        tts=raw.get("tts", True),
        policy=policy,
        twin=twin,
        max_upload_bytes=raw.get("max_upload_bytes", DEFAULT_MAX_UPLOAD_BYTES),
        auth_token=auth_token,
        host=raw.get("host", "127.0.0.1"),
        port=raw.get("port", 8077),
    )
