"""129-dimensional per-part surface feature vectors.

Offline stand-in for the news-landscape feature toolkit: 16 interpretable
surface statistics plus 113 signed hashed lexical buckets, computed separately
for title and body. Deterministic and finite by construction; the downstream
contract (dimension 129 per part, 258 per article) is what matters.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

PART_DIM = 129
_STAT_COUNT = 16
_BUCKETS = PART_DIM - _STAT_COUNT

_FUNCTION_WORDS = frozenset(
    "the a an and or but if of to in on at by for with from as is are was were "
    "be been it this that these those he she they we you i not no".split()
)
_SENTENCE_SPLIT = re.compile(r"[.!?]+(?:\s+|$)")


def _stats(text: str) -> list[float]:
    tokens = text.split()
    n = len(tokens)
    chars = len(text)
    types = len({t.lower() for t in tokens})
    sentences = [s for s in _SENTENCE_SPLIT.split(text) if s.strip()]
    punct = sum(1 for c in text if not c.isalnum() and not c.isspace())
    uppers = sum(1 for c in text if c.isupper())
    digits = sum(1 for c in text if c.isdigit())
    return [
        float(n),
        float(chars),
        (sum(len(t) for t in tokens) / n) if n else 0.0,
        (types / n) if n else 0.0,
        (sum(1 for t in tokens if t[0].isupper()) / n) if n else 0.0,
        (uppers / chars) if chars else 0.0,
        (digits / chars) if chars else 0.0,
        (punct / chars) if chars else 0.0,
        float(text.count("!")),
        float(text.count("?")),
        float(text.count('"') + text.count("'")),
        float(text.count(",")),
        float(len(sentences)),
        (n / len(sentences)) if sentences else 0.0,
        (sum(1 for t in tokens if t.lower() in _FUNCTION_WORDS) / n) if n else 0.0,
        (sum(1 for t in tokens if len(t) > 6) / n) if n else 0.0,
    ]


def _lexical_buckets(text: str) -> np.ndarray:
    vec = np.zeros(_BUCKETS)
    for token in text.split():
        digest = hashlib.blake2b(b"nela:" + token.lower().encode(), digest_size=8)
        value = int.from_bytes(digest.digest(), "big")
        vec[value % _BUCKETS] += 1.0 if (value >> 40) & 1 else -1.0
    norm = np.linalg.norm(vec)
    return vec / norm if norm > 0 else vec


def nela_part(text: str) -> np.ndarray:
    """One 129-dim part vector for a title or a body."""
    return np.concatenate([np.array(_stats(text)), _lexical_buckets(text)])


def nela_features(title: str, body: str) -> np.ndarray:
    """Concatenated title+body vector, 258 dims."""
    return np.concatenate([nela_part(title), nela_part(body)])
