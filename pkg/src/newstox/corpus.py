"""Data model and JSONL ingestion for articles, media and the nine-label scheme."""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from enum import Enum
from pathlib import Path

from .errors import CorpusError

MEDIA_REFERENCE_DATE = date(2019, 1, 1)


class Label(str, Enum):
    """The eight toxicity classes plus non_toxic."""

    FAKE_NEWS = "fake_news"
    SENSATIONS = "sensations"
    HATE_SPEECH = "hate_speech"
    CONSPIRACIES = "conspiracies"
    ANTI_DEMOCRATIC = "anti_democratic"
    PRO_AUTHORITARIAN = "pro_authoritarian"
    DEFAMATION = "defamation"
    DELUSION = "delusion"
    NON_TOXIC = "non_toxic"

    def __str__(self) -> str:
        return self.value


LABELS = tuple(Label)


@dataclass(frozen=True)
class Article:
    id: str
    title: str
    body: str
    labels: tuple[Label, ...]
    medium_id: str
    title_en: str | None = None
    body_en: str | None = None

    def __post_init__(self):
        if not self.id:
            raise CorpusError("article id must be non-empty")
        if not self.title.strip():
            raise CorpusError(f"article {self.id!r}: empty title")
        if not self.body.strip():
            raise CorpusError(f"article {self.id!r}: empty body")
        if not self.labels:
            raise CorpusError(f"article {self.id!r}: needs at least one label")
        if Label.NON_TOXIC in self.labels and len(self.labels) > 1:
            raise CorpusError(
                f"article {self.id!r}: non_toxic cannot co-occur with other labels"
            )

    @property
    def primary_label(self) -> Label:
        # Multi-label storage, single-label classification: first listed label wins.
        return self.labels[0]


@dataclass(frozen=True)
class Medium:
    id: str
    has_editor: bool
    has_responsible_person: bool
    bg_server: bool
    alexa_rank: int | None
    has_domain_person: bool
    created_date: date

    def __post_init__(self):
        if not self.id:
            raise CorpusError("medium id must be non-empty")
        if self.alexa_rank is not None and self.alexa_rank < 1:
            raise CorpusError(f"medium {self.id!r}: alexa_rank must be >= 1")
        if self.created_date > MEDIA_REFERENCE_DATE:
            raise CorpusError(
                f"medium {self.id!r}: created_date {self.created_date} is after "
                f"{MEDIA_REFERENCE_DATE}"
            )


@dataclass(frozen=True)
class Dataset:
    """Immutable after load; safe for shared read access from workers."""

    articles: tuple[Article, ...]
    media: dict[str, Medium]

    def __post_init__(self):
        seen = set()
        dupes = []
        for a in self.articles:
            if a.id in seen:
                dupes.append(a.id)
            seen.add(a.id)
        if dupes:
            raise CorpusError(f"duplicate article ids: {sorted(set(dupes))}")
        unresolved = [a.id for a in self.articles if a.medium_id not in self.media]
        if unresolved:
            raise CorpusError(
                f"articles reference unknown media: {unresolved}"
            )

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.articles)

    def by_id(self, article_id: str) -> Article:
        for a in self.articles:
            if a.id == article_id:
                return a
        raise KeyError(article_id)


def _parse_jsonl(path: Path):
    """Yield (line_number, object) for every non-blank line."""
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as err:
                raise CorpusError(f"{path}:{line_no}: invalid JSON ({err.msg})") from err


def _parse_labels(raw, path: Path, line_no: int) -> tuple[Label, ...]:
    if not isinstance(raw, list) or not raw:
        raise CorpusError(f"{path}:{line_no}: 'labels' must be a non-empty list")
    out = []
    for value in raw:
        try:
            out.append(Label(value))
        except ValueError:
            raise CorpusError(
                f"{path}:{line_no}: unknown label {value!r} "
                f"(expected one of {[l.value for l in LABELS]})"
            ) from None
    return tuple(out)


def _parse_article(obj: dict, path: Path, line_no: int) -> Article:
    try:
        return Article(
            id=str(obj["id"]),
            title=str(obj["title"]),
            body=str(obj["body"]),
            labels=_parse_labels(obj["labels"], path, line_no),
            medium_id=str(obj["medium_id"]),
            title_en=obj.get("title_en"),
            body_en=obj.get("body_en"),
        )
    except KeyError as err:
        raise CorpusError(f"{path}:{line_no}: missing field {err.args[0]!r}") from None
    except CorpusError as err:
        raise CorpusError(f"{path}:{line_no}: {err}") from None


def _parse_medium(obj: dict, path: Path, line_no: int) -> Medium:
    try:
        rank = obj["alexa_rank"]
        return Medium(
            id=str(obj["id"]),
            has_editor=bool(obj["has_editor"]),
            has_responsible_person=bool(obj["has_responsible_person"]),
            bg_server=bool(obj["bg_server"]),
            alexa_rank=None if rank is None else int(rank),
            has_domain_person=bool(obj["has_domain_person"]),
            created_date=date.fromisoformat(obj["created_date"]),
        )
    except KeyError as err:
        raise CorpusError(f"{path}:{line_no}: missing field {err.args[0]!r}") from None
    except (ValueError, CorpusError) as err:
        raise CorpusError(f"{path}:{line_no}: {err}") from None


def load_dataset(articles_path, media_path) -> Dataset:
    """Load and validate articles.jsonl + media.jsonl.

    Raises CorpusError with the offending file/line for parse problems, and with
    the offending ids for duplicate articles or unresolved medium references.
    """
    articles_path = Path(articles_path)
    media_path = Path(media_path)
    media: dict[str, Medium] = {}
    for line_no, obj in _parse_jsonl(media_path):
        m = _parse_medium(obj, media_path, line_no)
        if m.id in media:
            raise CorpusError(f"{media_path}:{line_no}: duplicate medium id {m.id!r}")
        media[m.id] = m

    articles = []
    for line_no, obj in _parse_jsonl(articles_path):
        articles.append(_parse_article(obj, articles_path, line_no))
    return Dataset(articles=tuple(articles), media=media)


def save_dataset(dataset: Dataset, articles_path, media_path) -> None:
    """Write a dataset back to JSONL; load_dataset(save_dataset(d)) round-trips."""
    with open(articles_path, "w", encoding="utf-8") as fh:
        for a in dataset.articles:
            fh.write(
                json.dumps(
                    {
                        "id": a.id,
                        "title": a.title,
                        "body": a.body,
                        "title_en": a.title_en,
                        "body_en": a.body_en,
                        "labels": [l.value for l in a.labels],
                        "medium_id": a.medium_id,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    with open(media_path, "w", encoding="utf-8") as fh:
        for m in dataset.media.values():
            fh.write(
                json.dumps(
                    {
                        "id": m.id,
                        "has_editor": m.has_editor,
                        "has_responsible_person": m.has_responsible_person,
                        "bg_server": m.bg_server,
                        "alexa_rank": m.alexa_rank,
                        "has_domain_person": m.has_domain_person,
                        "created_date": m.created_date.isoformat(),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def label_distribution(dataset: Dataset) -> dict[Label, int]:
    """Article counts keyed by primary_label, over all nine classes."""
    counts = {label: 0 for label in LABELS}
    for a in dataset.articles:
        counts[a.primary_label] += 1
    return counts
