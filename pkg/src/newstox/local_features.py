"""Tokenization, the 15 stylometric features and the 6 medium features."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import date

import numpy as np

from .corpus import MEDIA_REFERENCE_DATE, Medium
from .errors import CorpusError

_TOKEN_RE = re.compile(r"\S+")
_SENTENCE_END = (".", "!", "?")


@dataclass(frozen=True)
class TokenizedText:
    tokens: tuple[str, ...]
    sentences: tuple[tuple[int, int], ...]  # half-open token-index spans
    char_count: int
    token_spans: tuple[tuple[int, int], ...]  # char offsets into the raw text


def tokenize(text: str) -> TokenizedText:
    """Whitespace tokenization with sentence splits after '.', '!' or '?'.

    Tokens are maximal runs of non-whitespace with punctuation attached. A token
    ending in a sentence terminator closes a sentence (the terminator is followed
    by whitespace or end-of-text by construction); trailing tokens without a
    terminator still form a final sentence so spans cover all tokens.
    """
    tokens = []
    spans = []
    for m in _TOKEN_RE.finditer(text):
        tokens.append(m.group())
        spans.append((m.start(), m.end()))

    sentences = []
    start = 0
    for i, tok in enumerate(tokens):
        if tok.endswith(_SENTENCE_END):
            sentences.append((start, i + 1))
            start = i + 1
    if start < len(tokens):
        sentences.append((start, len(tokens)))

    return TokenizedText(
        tokens=tuple(tokens),
        sentences=tuple(sentences),
        char_count=len(text),
        token_spans=tuple(spans),
    )


STYLO_FEATURE_NAMES = (
    "avg_word_length_title",
    "avg_word_length_text",
    "word_count_title",
    "word_count_text",
    "char_count_title",
    "char_count_text",
    "spec_char_count_title",
    "spec_char_count_text",
    "upper_char_count_title",
    "upper_char_count_text",
    "upper_word_count_title",
    "upper_word_count_text",
    "sentence_count_text",
    "avg_sentence_length_char_text",
    "avg_sentence_length_word_text",
)

MEDIA_FEATURE_NAMES = (
    "editor",
    "responsible_person",
    "bg_server",
    "popularity",
    "domain_person",
    "days_existing_log",
)


@dataclass(frozen=True)
class StyloVector:
    avg_word_length_title: float
    avg_word_length_text: float
    word_count_title: float
    word_count_text: float
    char_count_title: float
    char_count_text: float
    spec_char_count_title: float
    spec_char_count_text: float
    upper_char_count_title: float
    upper_char_count_text: float
    upper_word_count_title: float
    upper_word_count_text: float
    sentence_count_text: float
    avg_sentence_length_char_text: float
    avg_sentence_length_word_text: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in STYLO_FEATURE_NAMES], dtype=float)


@dataclass(frozen=True)
class MediaVector:
    editor: float
    responsible_person: float
    bg_server: float
    popularity: float
    domain_person: float
    days_existing_log: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in MEDIA_FEATURE_NAMES], dtype=float)


def _spec_char_count(text: str) -> int:
    # "specific" = neither alphabetic nor numeric nor whitespace
    return sum(1 for c in text if not c.isalnum() and not c.isspace())


def _upper_char_count(text: str) -> int:
    return sum(1 for c in text if c.isupper())


def _upper_word_count(tokens) -> int:
    return sum(1 for t in tokens if t and t[0].isupper())


def _avg_word_length(tokens) -> float:
    if not tokens:
        return 0.0
    return sum(len(t) for t in tokens) / len(tokens)


def stylometric_features(title: str, body: str) -> StyloVector:
    """The 15 title/body surface statistics; averages are 0 on empty denominators."""
    t = tokenize(title)
    b = tokenize(body)

    n_sentences = len(b.sentences)
    if n_sentences:
        # a sentence's char extent runs from its first token's start to its
        # last token's end, so boundary whitespace is not counted
        sent_chars = [
            b.token_spans[end - 1][1] - b.token_spans[start][0]
            for start, end in b.sentences
        ]
        avg_sent_chars = sum(sent_chars) / n_sentences
        avg_sent_words = len(b.tokens) / n_sentences
    else:
        avg_sent_chars = 0.0
        avg_sent_words = 0.0

    return StyloVector(
        avg_word_length_title=_avg_word_length(t.tokens),
        avg_word_length_text=_avg_word_length(b.tokens),
        word_count_title=float(len(t.tokens)),
        word_count_text=float(len(b.tokens)),
        char_count_title=float(t.char_count),
        char_count_text=float(b.char_count),
        spec_char_count_title=float(_spec_char_count(title)),
        spec_char_count_text=float(_spec_char_count(body)),
        upper_char_count_title=float(_upper_char_count(title)),
        upper_char_count_text=float(_upper_char_count(body)),
        upper_word_count_title=float(_upper_word_count(t.tokens)),
        upper_word_count_text=float(_upper_word_count(b.tokens)),
        sentence_count_text=float(n_sentences),
        avg_sentence_length_char_text=avg_sent_chars,
        avg_sentence_length_word_text=avg_sent_words,
    )


def media_features(m: Medium, reference_date: date = MEDIA_REFERENCE_DATE) -> MediaVector:
    """Medium indicators, reciprocal Alexa popularity and log10 days of existence."""
    if m.created_date > reference_date:
        raise CorpusError(
            f"medium {m.id!r}: created_date {m.created_date} is after the "
            f"reference date {reference_date}"
        )
    days = (reference_date - m.created_date).days
    days_log = math.log10(days) if days > 0 else 0.0
    popularity = 1.0 / m.alexa_rank if m.alexa_rank else 0.0
    return MediaVector(
        editor=float(m.has_editor),
        responsible_person=float(m.has_responsible_person),
        bg_server=float(m.bg_server),
        popularity=popularity,
        domain_person=float(m.has_domain_person),
        days_existing_log=days_log,
    )
