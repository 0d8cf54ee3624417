"""Corpus translation: fills title_en/body_en, idempotently and per-article.

Backends are pluggable. The HTTP backend reads its endpoint and key from the
environment (TRANSLATE_ENDPOINT / TRANSLATE_API_KEY); the marker backend is a
deterministic offline stand-in for development and tests.
"""

from __future__ import annotations

import os

from .errors import TranslationServiceError

_FIELDS = (("title", "title_en"), ("body", "body_en"))


class MarkerTranslator:
    """Offline deterministic backend: tags the source text instead of
    translating it. Empty input stays empty."""

    def translate(self, text: str) -> str:
        if not text.strip():
            return ""
        return f"[en] {text}"


class HttpTranslator:
    """POSTs {"q": text, "source": "bg", "target": "en"} to a configured
    endpoint expecting {"translation": "..."} back."""

    def __init__(self, endpoint: str | None = None, api_key: str | None = None):
        self.endpoint = endpoint or os.environ.get("TRANSLATE_ENDPOINT")
        self.api_key = api_key or os.environ.get("TRANSLATE_API_KEY")
        if not self.endpoint or not self.api_key:
            raise TranslationServiceError(
                "translation service not configured: set TRANSLATE_ENDPOINT "
                "and TRANSLATE_API_KEY"
            )
        try:
            import requests
        except ImportError as err:
            raise TranslationServiceError(
                f"http backend needs the 'service' extra installed ({err})"
            ) from err
        self._requests = requests

    def translate(self, text: str) -> str:
        if not text.strip():
            return ""
        response = self._requests.post(
            self.endpoint,
            json={"q": text, "source": "bg", "target": "en"},
            headers={"Authorization": f"Bearer {self.api_key}"},
            timeout=60,
        )
        if response.status_code != 200:
            raise TranslationServiceError(
                f"translation service returned {response.status_code}"
            )
        return response.json()["translation"]


def make_backend(name: str):
    if name == "marker":
        return MarkerTranslator()
    if name == "service":
        return HttpTranslator()
    raise TranslationServiceError(f"unknown translation backend {name!r}")


def translate_corpus(articles: list[dict], backend) -> tuple[list[dict], dict[str, str]]:
    """Fill missing *_en fields. Already-translated articles are skipped
    without backend calls; failures are recorded per article and leave the
    rest of the output intact.

    Returns (updated article dicts, {article_id: error message}).
    """
    out = []
    errors: dict[str, str] = {}
    for article in articles:
        updated = dict(article)
        for src_field, dst_field in _FIELDS:
            if updated.get(dst_field) is not None:
                continue
            source = updated.get(src_field) or ""
            if not source.strip():
                updated[dst_field] = ""
                continue
            try:
                updated[dst_field] = backend.translate(source)
            except Exception as err:
                errors[updated["id"]] = str(err)
                break
        out.append(updated)
    return out, errors
