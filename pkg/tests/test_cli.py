import json

import pytest

from synth import write_corpus

from newstox.cli import main

FAST_RUN_FLAGS = [
    "--grid", "0.01,1.0", "--max-iter", "150", "--lr", "0.02", "--inner-folds", "3",
]


@pytest.fixture(scope="module")
def bundle(tmp_path_factory):
    from synth import separable_corpus

    tmp = tmp_path_factory.mktemp("cli")
    articles_path, media_path, manifests = separable_corpus(tmp, per_class=12, seed=3)
    return str(articles_path), str(media_path), [str(m) for m in manifests]


def test_validate_ok(bundle, capsys):
    articles, media, manifests = bundle
    code = main(["validate", "--articles", articles, "--media", media,
                 "--features", *manifests])
    out = capsys.readouterr().out
    assert code == 0
    assert "bert_bg" in out and "1536" in out
    assert "elmo_en" in out and "2048" in out


def test_validate_missing_ids_listed(bundle, tmp_path, capsys):
    articles, media, manifests = bundle
    # drop 3 articles from a copy of one vector file
    src = json.loads(open(manifests[0]).read())
    vec_lines = open(manifests[0].replace(".manifest.json", ".jsonl")).read().splitlines()
    kept = vec_lines[3:]
    with open(tmp_path / "bert_bg.jsonl", "w") as fh:
        fh.write("\n".join(kept) + "\n")
    src["articles"] = len(kept)
    with open(tmp_path / "bert_bg.manifest.json", "w") as fh:
        json.dump(src, fh)
    code = main(["validate", "--articles", articles, "--media", media,
                 "--features", str(tmp_path / "bert_bg.manifest.json")])
    out = capsys.readouterr().out
    assert code == 1
    assert "a0000" in out and "missing" in out


def test_validate_wrong_dimension(bundle, tmp_path, capsys):
    articles, media, _ = bundle
    with open(tmp_path / "bert_bg.jsonl", "w") as fh:
        fh.write(json.dumps({"id": "a0000", "vector": [0.0] * 100}) + "\n")
    with open(tmp_path / "bert_bg.manifest.json", "w") as fh:
        json.dump({"group": "bert_bg", "dim": 100, "articles": 1, "producer": "t"}, fh)
    code = main(["validate", "--articles", articles, "--media", media,
                 "--features", str(tmp_path / "bert_bg.manifest.json")])
    out = capsys.readouterr().out
    assert code == 1
    assert "bert_bg" in out and "1536" in out


def test_validate_bad_corpus_exit_1(tmp_path, capsys):
    (tmp_path / "articles.jsonl").write_text("{nope\n")
    (tmp_path / "media.jsonl").write_text("")
    code = main(["validate", "--articles", str(tmp_path / "articles.jsonl"),
                 "--media", str(tmp_path / "media.jsonl")])
    assert code == 1


def test_featurize_outputs_and_idempotence(tmp_path, capsys):
    articles_path, media_path = write_corpus(
        tmp_path, {"non_toxic": 2, "fake_news": 1}, n_media=2
    )
    out1 = tmp_path / "f1"
    code = main(["featurize", "--articles", str(articles_path),
                 "--media", str(media_path), "--out", str(out1)])
    assert code == 0
    stylo_lines = (out1 / "stylo.jsonl").read_text().splitlines()
    media_lines = (out1 / "media.jsonl").read_text().splitlines()
    assert len(stylo_lines) == 3 and len(media_lines) == 3
    assert len(json.loads(stylo_lines[0])["vector"]) == 15
    assert len(json.loads(media_lines[0])["vector"]) == 6
    first = (out1 / "stylo.jsonl").read_bytes()

    code = main(["featurize", "--articles", str(articles_path),
                 "--media", str(media_path), "--out", str(out1)])
    assert code == 0
    assert (out1 / "stylo.jsonl").read_bytes() == first
    # emitted files pass validation
    code = main(["validate", "--articles", str(articles_path),
                 "--media", str(media_path),
                 "--features", str(out1 / "stylo.manifest.json"),
                 str(out1 / "media.manifest.json")])
    assert code == 0


def test_run_baseline_only(bundle, tmp_path, capsys):
    articles, media, _ = bundle
    out = tmp_path / "run1"
    code = main(["run", "--articles", articles, "--media", media,
                 "--out", str(out), "--setups", "1"])
    assert code == 0
    table = (out / "table3.csv").read_text().splitlines()
    assert len(table) == 2
    assert table[1].startswith("1,Baseline")
    assert (out / "setup_01" / "report.json").exists()
    assert (out / "audit.json").exists()
    assert json.loads((out / "audit.json").read_text())["verified"] is True


def test_run_unknown_setups_rejected(bundle, tmp_path, capsys):
    articles, media, _ = bundle
    code = main(["run", "--articles", articles, "--media", media,
                 "--out", str(tmp_path / "x"), "--setups", "99"])
    assert code == 1
    code = main(["run", "--articles", articles, "--media", media,
                 "--out", str(tmp_path / "x"), "--setups", "two"])
    assert code == 1
    code = main(["run", "--articles", articles, "--media", media,
                 "--out", str(tmp_path / "x"), "--setups", "1", "--grid", "0,nope"])
    assert code == 1


def test_run_missing_group_nonzero_exit(bundle, tmp_path, capsys):
    articles, media, _ = bundle
    code = main(["run", "--articles", articles, "--media", media,
                 "--out", str(tmp_path / "y"), "--setups", "2", *FAST_RUN_FLAGS])
    assert code == 2  # bert_bg vectors not supplied


def test_run_subset_and_determinism(bundle, tmp_path, capsys):
    articles, media, manifests = bundle
    outs = []
    for name in ("d1", "d2"):
        out = tmp_path / name
        code = main(["run", "--articles", articles, "--media", media,
                     "--features", *manifests, "--out", str(out),
                     "--setups", "1,4,12", "--seed", "11", *FAST_RUN_FLAGS])
        assert code == 0
        outs.append(out)
    for rel in ("table3.csv", "setup_04/report.json", "setup_12/report.json"):
        assert (outs[0] / rel).read_bytes() == (outs[1] / rel).read_bytes()
    table = (outs[0] / "table3.csv").read_text().splitlines()
    assert [row.split(",")[0] for row in table[1:]] == ["1", "4", "12"]


def test_unknown_flag_rejected(bundle):
    articles, media, _ = bundle
    with pytest.raises(SystemExit) as err:
        main(["run", "--articles", articles, "--media", media,
              "--out", "/tmp/zz", "--bogus-flag"])
    assert err.value.code == 2
