import json

import pytest


def make_articles():
    return [
        {
            "id": "a1",
            "title": "Скандал разтърси медийния пейзаж",
            "body": "Първо изречение на тялото. Второ изречение! Трето?",
            "title_en": None,
            "body_en": None,
            "labels": ["fake_news"],
            "medium_id": "m1",
        },
        {
            "id": "a2",
            "title": "Добри новини за читателите",
            "body": "Кратко и спокойно тяло на статия.",
            "title_en": None,
            "body_en": None,
            "labels": ["non_toxic"],
            "medium_id": "m1",
        },
        {
            "id": "a3",
            "title": "Трета статия със заглавие",
            "body": "Тяло с още думи за разнообразие и обем на текста.",
            "title_en": None,
            "body_en": None,
            "labels": ["sensations"],
            "medium_id": "m2",
        },
    ]


def write_jsonl(path, objects):
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objects:
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    return path


@pytest.fixture
def corpus_file(tmp_path):
    return write_jsonl(tmp_path / "articles.jsonl", make_articles())


@pytest.fixture
def translated_corpus_file(tmp_path):
    from embed_extract.translate import MarkerTranslator, translate_corpus

    translated, errors = translate_corpus(make_articles(), MarkerTranslator())
    assert not errors
    return write_jsonl(tmp_path / "articles_en.jsonl", translated)


@pytest.fixture(scope="session")
def tiny_checkpoints(tmp_path_factory):
    """Local transformer checkpoints with the contract hidden sizes."""
    torch = pytest.importorskip("torch")
    from transformers import BertConfig, BertModel, BertTokenizer

    root = tmp_path_factory.mktemp("checkpoints")
    dirs = {}
    for hidden, heads in ((768, 4), (1024, 4)):
        d = root / f"h{hidden}"
        torch.manual_seed(hidden)
        config = BertConfig(
            vocab_size=60, hidden_size=hidden, num_hidden_layers=1,
            num_attention_heads=heads, intermediate_size=64,
            max_position_embeddings=512,
        )
        BertModel(config).save_pretrained(d)
        vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
        vocab += [f"дума{i}" for i in range(30)] + [f"word{i}" for i in range(25)]
        with open(d / "vocab.txt", "w", encoding="utf-8") as fh:
            fh.write("\n".join(vocab))
        BertTokenizer.from_pretrained(d).save_pretrained(d)
        dirs[hidden] = str(d)
    return dirs
