"""Bridge a chat backend into the session engine's responder slot.

The engine plans each turn itself; this responder only proposes reply
content. Any backend failure — unreachable, timed out, or unparseable
output — degrades silently (logged) to the scripted rendering, so a
training session never stalls on a provider.
"""

from __future__ import annotations

import logging
from typing import Callable, Protocol

from ..engine.model import Session, UserTurn
from ..engine.prompts import build_prompt
from ..engine.replies import ProviderReply, UnparseableReply, parse_provider_reply
from ..engine.turns import Responder
from .base import ProviderError, ProviderPolicy, call_with_policy

logger = logging.getLogger(__name__)


class ChatBackend(Protocol):
    def complete(self, bundle) -> str: ...


class ProviderResponder(Responder):
    def __init__(
        self,
        chat: ChatBackend,
        policy: ProviderPolicy | None = None,
        *,
        sleep: Callable[[float], None] | None = None,
        on_fallback: Callable[[str], None] | None = None,
    ):
        self.chat = chat
        self.policy = policy or ProviderPolicy()
        self._sleep = sleep
        self.on_fallback = on_fallback

    def consult(self, session: Session, turn: UserTurn) -> ProviderReply | None:
        bundle = build_prompt(session, turn)
        kwargs = {"sleep": self._sleep} if self._sleep else {}
        try:
            raw = call_with_policy(
                lambda: self.chat.complete(bundle), self.policy, **kwargs
            )
            return parse_provider_reply(raw)
        except (ProviderError, UnparseableReply) as exc:
            message = f"provider degraded to scripted responder: {exc}"
            logger.warning("session %s: %s", session.id, message)
            if self.on_fallback:
                self.on_fallback(message)
            return None
