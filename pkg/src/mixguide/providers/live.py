"""Optional live adapters for hosted speech and chat APIs.

Disabled unless explicitly configured; nothing in the package requires
them. Credentials come from environment variables (never logged):

    MIXGUIDE_CHAT_URL      chat completions endpoint
    MIXGUIDE_CHAT_API_KEY  bearer token for the chat endpoint
    MIXGUIDE_CHAT_MODEL    model name to request (default "gpt-4")
"""

from __future__ import annotations

import os

import httpx

from ..engine.prompts import PromptBundle
from .base import ProviderPolicy, ProviderUnavailable, Timeout

CHAT_URL_ENV = "MIXGUIDE_CHAT_URL"
CHAT_KEY_ENV = "MIXGUIDE_CHAT_API_KEY"
CHAT_MODEL_ENV = "MIXGUIDE_CHAT_MODEL"


class LiveChat:
    """Minimal OpenAI-compatible chat-completions client."""

    def __init__(
        self,
        url: str | None = None,
        api_key: str | None = None,
        model: str | None = None,
        policy: ProviderPolicy | None = None,
    ):
        self.url = url or os.environ.get(CHAT_URL_ENV)
        self.api_key = api_key or os.environ.get(CHAT_KEY_ENV)
        self.model = model or os.environ.get(CHAT_MODEL_ENV, "gpt-4")
        self.policy = policy or ProviderPolicy()
        if not self.url:
            raise ProviderUnavailable(
                f"live chat adapter needs {CHAT_URL_ENV} to be set"
            )

    def complete(self, bundle: PromptBundle) -> str:
        messages = [{"role": "system", "content": bundle.system_instruction}]
        messages.append(
            {
                "role": "system",
                "content": f"Walkthrough transcript:\n{bundle.context_transcript}",
            }
        )
        for role, text in bundle.history_excerpt:
            messages.append({"role": role, "content": text})
        messages.append({"role": "user", "content": bundle.user_text})

        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = httpx.post(
                self.url,
                json={"model": self.model, "messages": messages},
                headers=headers,
                timeout=self.policy.timeout_ms / 1000.0,
            )
            response.raise_for_status()
            return response.json()["choices"][0]["message"]["content"]
        except httpx.TimeoutException as exc:
            raise Timeout(f"chat endpoint timed out: {exc}") from None
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            raise ProviderUnavailable(f"chat endpoint failed: {exc}") from None
