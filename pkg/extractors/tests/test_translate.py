import pytest

from embed_extract.errors import TranslationServiceError
from embed_extract.translate import (
    HttpTranslator,
    MarkerTranslator,
    make_backend,
    translate_corpus,
)

from conftest import make_articles


class SpyBackend:
    def __init__(self, fail_on=()):
        self.calls = 0
        self.fail_on = set(fail_on)

    def translate(self, text):
        self.calls += 1
        if any(marker in text for marker in self.fail_on):
            raise TranslationServiceError("quota exceeded")
        return f"EN({text})"


def test_fills_translation_fields():
    spy = SpyBackend()
    out, errors = translate_corpus(make_articles(), spy)
    assert not errors
    assert all(a["title_en"].startswith("EN(") for a in out)
    assert all(a["body_en"].startswith("EN(") for a in out)
    assert spy.calls == 6  # 3 articles x 2 fields


def test_idempotent_no_calls_on_translated_corpus():
    first, _ = translate_corpus(make_articles(), SpyBackend())
    spy = SpyBackend()
    again, errors = translate_corpus(first, spy)
    assert spy.calls == 0
    assert not errors
    assert again == first


def test_empty_body_gets_empty_translation_without_service_call():
    articles = make_articles()
    articles[0]["body"] = "   "
    spy = SpyBackend()
    out, errors = translate_corpus(articles, spy)
    assert out[0]["body_en"] == ""
    assert not errors
    assert spy.calls == 5  # the blank body cost no call


def test_partial_failure_preserves_other_articles():
    spy = SpyBackend(fail_on=("Добри",))
    out, errors = translate_corpus(make_articles(), spy)
    assert set(errors) == {"a2"}
    assert "quota" in errors["a2"]
    assert out[0]["title_en"] and out[2]["title_en"]
    assert out[1]["title_en"] is None  # untouched, retryable


def test_marker_backend_behavior():
    m = MarkerTranslator()
    assert m.translate("") == ""
    assert m.translate("текст") == "[en] текст"
    assert isinstance(make_backend("marker"), MarkerTranslator)


def test_http_backend_requires_configuration(monkeypatch):
    monkeypatch.delenv("TRANSLATE_ENDPOINT", raising=False)
    monkeypatch.delenv("TRANSLATE_API_KEY", raising=False)
    with pytest.raises(TranslationServiceError, match="not configured"):
        HttpTranslator()
    with pytest.raises(TranslationServiceError):
        make_backend("bogus")
