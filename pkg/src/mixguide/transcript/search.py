"""Lexical relevance search over transcript segments.

Scoring is deliberately dependency-free and exactly reproducible: lowercase
tokens on non-alphanumeric boundaries, no stemming, and each query token
shared with a segment contributes 1/(1 + number of segments containing the
token). Rare words therefore outweigh filler words.
"""

from __future__ import annotations

import re

from .model import Transcript

_TOKEN = re.compile(r"[0-9a-z]+")


def tokenize(text: str) -> set[str]:
    return set(_TOKEN.findall(text.lower()))


def find_segments(
    t: Transcript, query: str, k: int = 5
) -> list[tuple[str, float]]:
    """Rank segments by token overlap with the query.

    Returns at most ``k`` (segment id, score) pairs, score-descending with
    ties broken by earlier start_ms. Segments sharing no token are omitted;
    an empty result is valid.
    """
    if not query.strip():
        raise ValueError("query must be non-empty")
    if k <= 0:
        raise ValueError("k must be positive")

    query_tokens = tokenize(query)
    segment_tokens = {seg.id: tokenize(seg.text) for seg in t.segments}

    containing_count: dict[str, int] = {}
    for tokens in segment_tokens.values():
        for token in tokens:
            containing_count[token] = containing_count.get(token, 0) + 1

    scored: list[tuple[str, float, int]] = []
    for seg in t.segments:
        shared = query_tokens & segment_tokens[seg.id]
        if not shared:
            continue
        score = sum(1.0 / (1 + containing_count[token]) for token in shared)
        scored.append((seg.id, score, seg.start_ms))

    scored.sort(key=lambda item: (-item[1], item[2]))
    return [(seg_id, score) for seg_id, score, _ in scored[:k]]
