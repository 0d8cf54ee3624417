import json

import numpy as np
import pytest

from newstox.errors import FeatureError
from newstox.feature_store import (
    REGISTRY,
    FeatureGroup,
    FeatureMatrix,
    concat_groups,
    ingest_vectors,
    load_feature_file,
    manifest_vector_path,
    standardize,
    write_vectors,
)


def test_registry_dimensions_match_contract():
    expected = {
        "bert_bg": 1536, "bert_en": 1536, "elmo_en": 2048, "use_en": 1024,
        "xlm_bg": 2048, "nela_en": 258, "lsa_bg": 215, "stylo": 15, "media": 6,
    }
    for name, dim in expected.items():
        assert REGISTRY[name].expected_dim == dim
    assert REGISTRY["bert_bg"].source == "external"
    assert REGISTRY["stylo"].source == "native"


def _write_vec_file(path, rows_by_id, corrupt_line=None):
    with open(path, "w", encoding="utf-8") as fh:
        for article_id, vec in rows_by_id:
            fh.write(json.dumps({"id": article_id, "vector": list(vec)}) + "\n")
        if corrupt_line:
            fh.write(corrupt_line + "\n")


def test_ingest_accepts_full_width_rows(tmp_path):
    group = REGISTRY["bert_bg"]
    rows = [("a1", np.zeros(1536)), ("a2", np.ones(1536))]
    _write_vec_file(tmp_path / "v.jsonl", rows)
    matrix = ingest_vectors(tmp_path / "v.jsonl", group)
    assert matrix.rows.shape == (2, 1536)
    assert matrix.ids == ("a1", "a2")


def test_ingest_dimension_mismatch_names_id(tmp_path):
    group = REGISTRY["bert_bg"]
    _write_vec_file(tmp_path / "v.jsonl", [("short_row", np.zeros(767))])
    with pytest.raises(FeatureError, match="short_row"):
        ingest_vectors(tmp_path / "v.jsonl", group)


def test_ingest_duplicate_and_nonfinite(tmp_path):
    group = FeatureGroup("g", 2, "external")
    _write_vec_file(tmp_path / "d.jsonl", [("a", [1, 2]), ("a", [3, 4])])
    with pytest.raises(FeatureError, match="duplicate"):
        ingest_vectors(tmp_path / "d.jsonl", group)
    _write_vec_file(tmp_path / "n.jsonl", [("a", [1, 2])],
                    corrupt_line='{"id": "b", "vector": [1, NaN]}')
    with pytest.raises(FeatureError, match="b"):
        ingest_vectors(tmp_path / "n.jsonl", group)


def test_xlm_width_2048(tmp_path):
    group = REGISTRY["xlm_bg"]
    _write_vec_file(tmp_path / "x.jsonl", [("a1", np.zeros(2048))])
    assert ingest_vectors(tmp_path / "x.jsonl", group).dim == 2048


def _matrix(name, dim, ids, seed=0):
    rng = np.random.default_rng(seed)
    return FeatureMatrix(
        group=FeatureGroup(name, dim, "external"),
        ids=tuple(ids),
        rows=rng.normal(size=(len(ids), dim)),
    )


def test_concat_dims_add_up():
    ids = ("a", "b", "c")
    big = _matrix("g1", 1536, ids, 1)
    small = _matrix("g2", 6, ids, 2)
    both = concat_groups([big, small], ids)
    assert both.dim == 1542
    assert np.allclose(both.rows[:, :1536], big.rows)
    assert np.allclose(both.rows[:, 1536:], small.rows)


def test_registry_combined_sums():
    dims = {name: g.expected_dim for name, g in REGISTRY.items()}
    bulgarian = dims["bert_bg"] + dims["xlm_bg"] + dims["stylo"] + dims["lsa_bg"]
    english = dims["use_en"] + dims["nela_en"] + dims["bert_en"] + dims["elmo_en"]
    assert bulgarian == 3814
    assert english == 4866
    assert bulgarian + english + dims["media"] == 8686


def test_concat_single_group_is_identity():
    ids = ("a", "b")
    m = _matrix("g", 4, ids)
    out = concat_groups([m], ids)
    assert out.group.name == "g"
    assert np.array_equal(out.rows, m.rows)


def test_concat_is_associative():
    ids = ("a", "b", "c", "d")
    m1, m2, m3 = (_matrix(f"g{i}", 3 + i, ids, i) for i in range(3))
    left = concat_groups([concat_groups([m1, m2], ids), m3], ids)
    right = concat_groups([m1, concat_groups([m2, m3], ids)], ids)
    assert np.array_equal(left.rows, right.rows)


def test_concat_missing_id_names_group_and_id():
    a = _matrix("has_all", 2, ("x", "y"))
    b = _matrix("misses_y", 2, ("x",))
    with pytest.raises(FeatureError) as err:
        concat_groups([a, b], ("x", "y"))
    assert "misses_y" in str(err.value) and "'y'" in str(err.value)


def test_standardize_definitions():
    ids_tr = ("a", "b", "c")
    train = FeatureMatrix(
        group=FeatureGroup("g", 2, "external"), ids=ids_tr,
        rows=np.array([[3.0, 7.0], [5.0, 7.0], [7.0, 7.0]]),
    )
    apply_to = FeatureMatrix(
        group=FeatureGroup("g", 2, "external"), ids=("z",),
        rows=np.array([[9.0, 1.0]]),
    )
    train_out, applied = standardize(train, apply_to)
    # column 0: mean 5, std sqrt(8/3); col 1 constant -> all zeros
    std0 = np.sqrt(8.0 / 3.0)
    assert applied.rows[0, 0] == pytest.approx((9 - 5) / std0)
    assert applied.rows[0, 1] == 0.0
    assert np.allclose(train_out.rows[:, 1], 0.0)
    assert abs(train_out.rows[:, 0].mean()) < 1e-9
    assert abs(train_out.rows[:, 0].std() - 1.0) < 1e-9


def test_standardize_known_value():
    # train column mean 5, std 2; value 9 -> 2.0
    train = FeatureMatrix(
        group=FeatureGroup("g", 1, "external"), ids=("a", "b"),
        rows=np.array([[3.0], [7.0]]),
    )
    apply_to = FeatureMatrix(
        group=FeatureGroup("g", 1, "external"), ids=("z",), rows=np.array([[9.0]])
    )
    _, applied = standardize(train, apply_to)
    assert applied.rows[0, 0] == pytest.approx(2.0)


def test_write_then_load_round_trip(tmp_path):
    ids = ("a1", "a2", "a3")
    rows = np.random.default_rng(0).normal(size=(3, 6))
    write_vectors(tmp_path, "media", ids, rows, producer="test")
    manifest = tmp_path / "media.manifest.json"
    assert manifest_vector_path(manifest).name == "media.jsonl"
    matrix = load_feature_file(manifest)
    assert matrix.ids == ids
    assert np.allclose(matrix.rows, rows)
    with open(manifest, encoding="utf-8") as fh:
        meta = json.load(fh)
    assert set(meta) == {"group", "dim", "articles", "producer"}
    assert meta["dim"] == 6 and meta["articles"] == 3


def test_load_feature_file_rejects_registry_dim_conflict(tmp_path):
    _write_vec_file(tmp_path / "bert_bg.jsonl", [("a", np.zeros(10))])
    with open(tmp_path / "bert_bg.manifest.json", "w") as fh:
        json.dump({"group": "bert_bg", "dim": 10, "articles": 1, "producer": "t"}, fh)
    with pytest.raises(FeatureError, match="registry"):
        load_feature_file(tmp_path / "bert_bg.manifest.json")
