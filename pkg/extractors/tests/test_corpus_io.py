import json

import pytest

from embed_extract.corpus_io import read_articles, write_articles
from embed_extract.errors import CorpusFormatError

from conftest import make_articles, write_jsonl


def test_read_round_trip(tmp_path, corpus_file):
    articles = read_articles(corpus_file)
    assert [a["id"] for a in articles] == ["a1", "a2", "a3"]
    write_articles(articles, tmp_path / "copy.jsonl")
    again = read_articles(tmp_path / "copy.jsonl")
    assert again == articles


def test_read_rejects_bad_json(tmp_path):
    (tmp_path / "bad.jsonl").write_text('{"id": "a1"\n')
    with pytest.raises(CorpusFormatError, match=":1"):
        read_articles(tmp_path / "bad.jsonl")


def test_read_rejects_missing_fields(tmp_path):
    write_jsonl(tmp_path / "x.jsonl", [{"id": "a1", "title": "t"}])
    with pytest.raises(CorpusFormatError, match="body"):
        read_articles(tmp_path / "x.jsonl")


def test_read_rejects_duplicates(tmp_path):
    arts = make_articles()
    arts[1]["id"] = "a1"
    write_jsonl(tmp_path / "x.jsonl", arts)
    with pytest.raises(CorpusFormatError, match="duplicate"):
        read_articles(tmp_path / "x.jsonl")


def test_write_is_atomic_no_temp_left(tmp_path, corpus_file):
    articles = read_articles(corpus_file)
    write_articles(articles, tmp_path / "out.jsonl")
    leftovers = [p for p in tmp_path.iterdir() if ".tmp-" in p.name]
    assert not leftovers


def test_cyrillic_preserved(tmp_path, corpus_file):
    articles = read_articles(corpus_file)
    write_articles(articles, tmp_path / "out.jsonl")
    raw = (tmp_path / "out.jsonl").read_text(encoding="utf-8")
    assert "Скандал разтърси" in raw
    assert json.loads(raw.splitlines()[0])["title"] == articles[0]["title"]
