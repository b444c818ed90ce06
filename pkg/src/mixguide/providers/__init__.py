"""Speech-to-text, text-to-speech, and chat backends with offline mocks."""

from .audio import (
    AudioBlob,
    AudioFormat,
    DEFAULT_SAMPLE_RATE_HZ,
    decode_wav,
    encode_wav,
    text_blob,
)
from .base import (
    AudioRejected,
    ProviderError,
    ProviderPolicy,
    ProviderUnavailable,
    Timeout,
    call_with_policy,
)
from .live import LiveChat
from .mock import MS_PER_WORD, MockChat, MockSpeechToText, MockTextToSpeech, SEGMENT_SPAN_MS
from .responder import ChatBackend, ProviderResponder

__all__ = [
    "AudioBlob",
    "AudioFormat",
    "AudioRejected",
    "ChatBackend",
    "DEFAULT_SAMPLE_RATE_HZ",
    "LiveChat",
    "MS_PER_WORD",
    "MockChat",
    "MockSpeechToText",
    "MockTextToSpeech",
    "ProviderError",
    "ProviderPolicy",
    "ProviderResponder",
    "ProviderUnavailable",
    "SEGMENT_SPAN_MS",
    "Timeout",
    "call_with_policy",
    "decode_wav",
    "encode_wav",
    "text_blob",
]
