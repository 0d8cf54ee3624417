"""Light JSONL corpus reader/writer.

The downstream pipeline owns deep validation; here we only need the fields the
extractors touch, preserved byte-faithfully on rewrite.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .errors import CorpusFormatError

REQUIRED_FIELDS = ("id", "title", "body", "labels", "medium_id")


def read_articles(path) -> list[dict]:
    path = Path(path)
    articles = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise CorpusFormatError(f"{path}:{line_no}: invalid JSON ({err.msg})") from err
            missing = [f for f in REQUIRED_FIELDS if f not in obj]
            if missing:
                raise CorpusFormatError(f"{path}:{line_no}: missing fields {missing}")
            if obj["id"] in seen:
                raise CorpusFormatError(f"{path}:{line_no}: duplicate id {obj['id']!r}")
            seen.add(obj["id"])
            obj.setdefault("title_en", None)
            obj.setdefault("body_en", None)
            articles.append(obj)
    if not articles:
        raise CorpusFormatError(f"{path}: empty corpus")
    return articles


def write_articles(articles: list[dict], path) -> None:
    """Atomic rewrite (temp file + rename) preserving field order."""
    path = Path(path)
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    with open(tmp, "w", encoding="utf-8") as fh:
        for obj in articles:
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    os.replace(tmp, path)
