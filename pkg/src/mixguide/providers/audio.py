"""Audio container values and WAV (PCM16) encoding with a text side-channel.

Mock speech lives in the WAV file's standard LIST/INFO comment chunk
(ICMT) instead of in phonemes, so speech round-trips are assertable
without any signal processing. The files are still valid, playable WAVs
(of silence).
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

from .base import AudioRejected

DEFAULT_SAMPLE_RATE_HZ = 16_000


class AudioFormat(str, enum.Enum):
    WAV_PCM16 = "wav_pcm16"
    WEBM_OPUS = "webm_opus"


@dataclass(frozen=True, slots=True)
class AudioBlob:
    format: AudioFormat
    sample_rate_hz: int
    data: bytes
    duration_ms: int

    def __post_init__(self):
        if self.duration_ms <= 0:
            raise ValueError("duration_ms must be positive")
        if not self.data:
            raise ValueError("audio data must be non-empty")


def encode_wav(
    text: str,
    duration_ms: int,
    sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ,
) -> bytes:
    """Build a silent mono PCM16 WAV with ``text`` in the ICMT comment."""
    frames = max(1, sample_rate_hz * duration_ms // 1000)
    pcm = b"\x00\x00" * frames

    comment = text.encode("utf-8")
    if len(comment) % 2:
        comment += b"\x00"  # RIFF chunks are word-aligned
    info_chunk = b"INFO" + b"ICMT" + struct.pack("<I", len(comment)) + comment

    fmt_chunk = struct.pack(
        "<HHIIHH", 1, 1, sample_rate_hz, sample_rate_hz * 2, 2, 16
    )
    body = (
        b"WAVE"
        + b"fmt " + struct.pack("<I", len(fmt_chunk)) + fmt_chunk
        + b"LIST" + struct.pack("<I", len(info_chunk)) + info_chunk
        + b"data" + struct.pack("<I", len(pcm)) + pcm
    )
    return b"RIFF" + struct.pack("<I", len(body)) + body


def decode_wav(data: bytes) -> tuple[str, int, int]:
    """Return (comment text, duration_ms, sample_rate_hz) of a PCM16 WAV."""
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise AudioRejected("not a RIFF/WAVE container")

    text = ""
    sample_rate = None
    data_len = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (chunk_len,) = struct.unpack("<I", data[pos + 4 : pos + 8])
        payload = data[pos + 8 : pos + 8 + chunk_len]
        if chunk_id == b"fmt ":
            audio_format, _channels, sample_rate = struct.unpack("<HHI", payload[:8])
            if audio_format != 1:
                raise AudioRejected("only PCM WAV is supported")
        elif chunk_id == b"data":
            data_len = chunk_len
        elif chunk_id == b"LIST" and payload[:4] == b"INFO":
            sub = 4
            while sub + 8 <= len(payload):
                sub_id = payload[sub : sub + 4]
                (sub_len,) = struct.unpack("<I", payload[sub + 4 : sub + 8])
                if sub_id == b"ICMT":
                    text = (
                        payload[sub + 8 : sub + 8 + sub_len]
                        .rstrip(b"\x00")
                        .decode("utf-8")
                    )
                sub += 8 + sub_len + (sub_len % 2)
        pos += 8 + chunk_len + (chunk_len % 2)

    if sample_rate is None or data_len is None:
        raise AudioRejected("missing fmt or data chunk")
    duration_ms = data_len * 1000 // (sample_rate * 2)
    return text, duration_ms, sample_rate


def text_blob(
    text: str,
    duration_ms: int,
    sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ,
) -> AudioBlob:
    """Convenience: a mock-speech blob carrying ``text`` as its payload."""
    return AudioBlob(
        format=AudioFormat.WAV_PCM16,
        sample_rate_hz=sample_rate_hz,
        data=encode_wav(text, duration_ms, sample_rate_hz),
        duration_ms=duration_ms,
    )
