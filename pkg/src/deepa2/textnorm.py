"""Whitespace normalization and token-level comparison helpers."""

from __future__ import annotations

import re
from collections import Counter

_TOKEN_RE = re.compile(r"[a-z0-9']+")


def normalize_ws(text: str) -> str:
    """Collapse runs of whitespace and trim the ends."""
    return " ".join(text.split())


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens, punctuation dropped."""
    return _TOKEN_RE.findall(text.lower())


def token_f1(a: str, b: str) -> float:
    """Unigram-multiset F1 between two texts; 1.0 when both are empty."""
    ta, tb = Counter(tokenize(a)), Counter(tokenize(b))
    na, nb = sum(ta.values()), sum(tb.values())
    if na == 0 and nb == 0:
        return 1.0
    if na == 0 or nb == 0:
        return 0.0
    overlap = sum((ta & tb).values())
    if overlap == 0:
        return 0.0
    precision = overlap / na
    recall = overlap / nb
    return 2 * precision * recall / (precision + recall)
