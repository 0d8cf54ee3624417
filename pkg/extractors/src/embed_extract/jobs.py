"""Extraction jobs: corpus in, vector-JSONL + manifest out."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus_io import read_articles
from .encoders import GROUPS, resolve_encoder
from .errors import ExtractError, MissingTranslation
from .nela import nela_features
from .writer import write_vector_file

PRODUCER = "embed-extract"


@dataclass(frozen=True)
class ExtractionJob:
    corpus_path: str
    group: str
    output_dir: str
    backend: str = "auto"
    model_dir: str | None = None
    producer: str = PRODUCER

    def spec(self):
        if self.group not in GROUPS:
            raise ExtractError(
                f"unknown group {self.group!r}; known: {sorted(GROUPS)}"
            )
        return GROUPS[self.group]


def _texts_for(articles: list[dict], spec) -> list[tuple[str, str, str]]:
    """(id, title, body) triples in the group's language."""
    if spec.lang == "bg":
        return [(a["id"], a["title"], a["body"]) for a in articles]
    missing = [a["id"] for a in articles
               if a.get("title_en") is None or a.get("body_en") is None]
    if missing:
        raise MissingTranslation(
            f"group {spec.name!r} needs title_en/body_en; untranslated articles: "
            f"{missing[:10]}{'...' if len(missing) > 10 else ''}"
        )
    return [(a["id"], a["title_en"], a["body_en"]) for a in articles]


def run_extraction(job: ExtractionJob) -> Path:
    """Extract one group for the whole corpus; truncation, never skipping."""
    spec = job.spec()
    articles = read_articles(job.corpus_path)
    triples = _texts_for(articles, spec)

    if spec.name == "nela_en":
        rows = [(i, nela_features(title, body)) for i, title, body in triples]
    else:
        encoder = resolve_encoder(spec, job.backend, job.model_dir)
        rows = []
        for i, title, body in triples:
            vec = np.concatenate([encoder.encode_title(title), encoder.encode_body(body)])
            rows.append((i, vec))

    expected = 2 * spec.part_dim
    for i, vec in rows:
        if vec.shape[0] != expected:
            raise ExtractError(
                f"group {spec.name!r}: id {i!r} produced {vec.shape[0]} dims, "
                f"expected {expected}"
            )
    return write_vector_file(job.output_dir, spec.name, rows, job.producer)
