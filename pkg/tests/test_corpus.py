import json

import pytest

from newstox.corpus import (
    LABELS,
    Article,
    Label,
    label_distribution,
    load_dataset,
    save_dataset,
)
from newstox.errors import CorpusError


def _write(path, lines):
    with open(path, "w", encoding="utf-8") as fh:
        for obj in lines:
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


MEDIUM = {
    "id": "m1", "has_editor": True, "has_responsible_person": False,
    "bg_server": True, "alexa_rank": 120, "has_domain_person": True,
    "created_date": "2010-05-01",
}


def _article(i="a1", labels=("fake_news",), medium="m1", **extra):
    obj = {
        "id": i, "title": "Заглавие на статия", "body": "Първо изречение. Второ!",
        "title_en": None, "body_en": None, "labels": list(labels), "medium_id": medium,
    }
    obj.update(extra)
    return obj


def test_nine_labels_round_trip():
    assert len(LABELS) == 9
    for label in LABELS:
        assert Label(label.value) is label
        assert label.value == label.value.lower()


def test_load_minimal_corpus(tmp_path):
    _write(tmp_path / "articles.jsonl", [_article("a1"), _article("a2", ("non_toxic",))])
    _write(tmp_path / "media.jsonl", [MEDIUM])
    d = load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")
    assert len(d.articles) == 2
    assert len(d.media) == 1
    assert d.articles[0].primary_label is Label.FAKE_NEWS


def test_unresolved_medium_reference_names_article(tmp_path):
    _write(tmp_path / "articles.jsonl", [_article("a9", medium="nope")])
    _write(tmp_path / "media.jsonl", [MEDIUM])
    with pytest.raises(CorpusError, match="a9"):
        load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")


def test_duplicate_article_id(tmp_path):
    _write(tmp_path / "articles.jsonl", [_article("dup"), _article("dup")])
    _write(tmp_path / "media.jsonl", [MEDIUM])
    with pytest.raises(CorpusError, match="dup"):
        load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")


def test_parse_error_reports_line_number(tmp_path):
    with open(tmp_path / "articles.jsonl", "w") as fh:
        fh.write(json.dumps(_article()) + "\n")
        fh.write("{broken\n")
    _write(tmp_path / "media.jsonl", [MEDIUM])
    with pytest.raises(CorpusError, match=":2"):
        load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")


def test_empty_text_rejected(tmp_path):
    _write(tmp_path / "articles.jsonl", [_article(body="   ")])
    _write(tmp_path / "media.jsonl", [MEDIUM])
    with pytest.raises(CorpusError, match="empty body"):
        load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")


def test_non_toxic_must_be_exclusive():
    with pytest.raises(CorpusError, match="non_toxic"):
        Article(
            id="x", title="t", body="b",
            labels=(Label.NON_TOXIC, Label.FAKE_NEWS), medium_id="m1",
        )


def test_primary_label_is_first_listed():
    a = Article(
        id="x", title="t", body="b",
        labels=(Label.DEFAMATION, Label.FAKE_NEWS), medium_id="m1",
    )
    assert a.primary_label is Label.DEFAMATION
    assert a.primary_label in a.labels


def test_medium_validation(tmp_path):
    bad = dict(MEDIUM, created_date="2020-06-01")
    _write(tmp_path / "media.jsonl", [bad])
    _write(tmp_path / "articles.jsonl", [])
    with pytest.raises(CorpusError, match="created_date"):
        load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")

    bad = dict(MEDIUM, alexa_rank=0)
    _write(tmp_path / "media.jsonl", [bad])
    with pytest.raises(CorpusError, match="alexa_rank"):
        load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")


def test_label_distribution_single_non_toxic(tmp_path):
    _write(tmp_path / "articles.jsonl", [_article("a1", ("non_toxic",))])
    _write(tmp_path / "media.jsonl", [MEDIUM])
    d = load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")
    dist = label_distribution(d)
    assert dist[Label.NON_TOXIC] == 1
    assert sum(dist.values()) == 1
    assert all(dist[l] == 0 for l in LABELS if l is not Label.NON_TOXIC)


def test_label_distribution_one_article_per_class(tmp_path):
    _write(
        tmp_path / "articles.jsonl",
        [_article(f"a{i}", (label.value,)) for i, label in enumerate(LABELS)],
    )
    _write(tmp_path / "media.jsonl", [MEDIUM])
    d = load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")
    assert all(count == 1 for count in label_distribution(d).values())


def test_paper_corpus_distribution(paper_corpus):
    dist = label_distribution(paper_corpus)
    assert len(paper_corpus.articles) == 317
    assert dist[Label.NON_TOXIC] == 96
    assert sum(v for l, v in dist.items() if l is not Label.NON_TOXIC) == 221
    assert sum(dist.values()) == len(paper_corpus.articles)


def test_round_trip_preserves_everything(tmp_path, paper_corpus):
    save_dataset(paper_corpus, tmp_path / "a.jsonl", tmp_path / "m.jsonl")
    again = load_dataset(tmp_path / "a.jsonl", tmp_path / "m.jsonl")
    assert again.articles == paper_corpus.articles
    assert again.media == paper_corpus.media


def test_cyrillic_survives_round_trip(tmp_path):
    title = "Прокуратурата проверява твърдения за фалшиви новини"
    _write(tmp_path / "articles.jsonl", [_article(title=title)])
    _write(tmp_path / "media.jsonl", [MEDIUM])
    d = load_dataset(tmp_path / "articles.jsonl", tmp_path / "media.jsonl")
    save_dataset(d, tmp_path / "a2.jsonl", tmp_path / "m2.jsonl")
    again = load_dataset(tmp_path / "a2.jsonl", tmp_path / "m2.jsonl")
    assert again.articles[0].title == title
