"""Provider errors, per-instance call policy, and the retry helper."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


class ProviderError(Exception):
    """Base class for backend failures."""


class ProviderUnavailable(ProviderError):
    """The backend could not be reached (possibly after retries)."""


class Timeout(ProviderError):
    """A single call exceeded the policy's timeout."""


class AudioRejected(ProviderError):
    """The audio payload is in an unsupported format."""


@dataclass(frozen=True, slots=True)
class ProviderPolicy:
    timeout_ms: int = 10_000
    max_retries: int = 2
    backoff_initial_ms: int = 200
    backoff_multiplier: float = 2.0

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    def backoff_ms(self, retry_index: int) -> float:
        return self.backoff_initial_ms * self.backoff_multiplier**retry_index


def call_with_policy(
    fn: Callable[[], T],
    policy: ProviderPolicy,
    *,
    sleep: Callable[[float], None] = time.sleep,
) -> T:
    """Run ``fn`` with up to ``max_retries`` retries on transient errors.

    Total attempts are 1 + min(max_retries, consecutive failures); the
    sleep between retry n-1 and n is backoff_initial_ms * multiplier**n.
    The final failure is re-raised unchanged.
    """
    attempts = policy.max_retries + 1
    for attempt in range(attempts):
        try:
            return fn()
        except (ProviderUnavailable, Timeout) as exc:
            if attempt + 1 == attempts:
                raise
            delay_ms = policy.backoff_ms(attempt)
            logger.warning(
                "provider call failed (attempt %d/%d): %s; retrying in %.0f ms",
                attempt + 1,
                attempts,
                exc,
                delay_ms,
            )
            sleep(delay_ms / 1000.0)
    raise AssertionError("unreachable")  # pragma: no cover
