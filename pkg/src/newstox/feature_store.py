"""Named feature groups: external vector ingestion, alignment and concatenation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FeatureError


@dataclass(frozen=True)
class FeatureGroup:
    name: str
    expected_dim: int
    source: str  # "native" | "external"


# Canonical per-article group dimensions (title+body concatenated where both exist).
REGISTRY: dict[str, FeatureGroup] = {
    g.name: g
    for g in (
        FeatureGroup("bert_bg", 1536, "external"),
        FeatureGroup("xlm_bg", 2048, "external"),
        FeatureGroup("stylo", 15, "native"),
        FeatureGroup("lsa_bg", 215, "native"),
        FeatureGroup("use_en", 1024, "external"),
        FeatureGroup("nela_en", 258, "external"),
        FeatureGroup("bert_en", 1536, "external"),
        FeatureGroup("elmo_en", 2048, "external"),
        FeatureGroup("media", 6, "native"),
    )
}


@dataclass
class FeatureMatrix:
    group: FeatureGroup
    ids: tuple[str, ...]
    rows: np.ndarray  # (len(ids), expected_dim)
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2:
            raise FeatureError(f"group {self.group.name!r}: rows must be 2-d")
        if self.rows.shape[0] != len(self.ids):
            raise FeatureError(
                f"group {self.group.name!r}: {len(self.ids)} ids but "
                f"{self.rows.shape[0]} rows"
            )
        if self.rows.shape[1] != self.group.expected_dim:
            raise FeatureError(
                f"group {self.group.name!r}: rows have {self.rows.shape[1]} "
                f"dims, expected {self.group.expected_dim}"
            )
        if len(set(self.ids)) != len(self.ids):
            raise FeatureError(f"group {self.group.name!r}: duplicate ids")
        if not np.all(np.isfinite(self.rows)):
            bad = np.where(~np.isfinite(self.rows).all(axis=1))[0]
            raise FeatureError(
                f"group {self.group.name!r}: non-finite values in rows for ids "
                f"{[self.ids[i] for i in bad[:5]]}"
            )
        self._index = {article_id: i for i, article_id in enumerate(self.ids)}

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def rows_for(self, ids) -> np.ndarray:
        missing = [i for i in ids if i not in self._index]
        if missing:
            raise FeatureError(
                f"group {self.group.name!r}: missing ids {missing[:10]}"
            )
        return self.rows[[self._index[i] for i in ids]]


def ingest_vectors(path, group: FeatureGroup) -> FeatureMatrix:
    """Read a vector-JSONL file ({"id": ..., "vector": [...]} per line).

    Fails with the offending article id on dimension mismatch, duplicates and
    non-finite values.
    """
    path = Path(path)
    ids: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise FeatureError(f"{path}:{line_no}: invalid JSON ({err.msg})") from err
            try:
                article_id = str(obj["id"])
                vector = obj["vector"]
            except (KeyError, TypeError):
                raise FeatureError(
                    f"{path}:{line_no}: expected an object with 'id' and 'vector'"
                ) from None
            if article_id in seen:
                raise FeatureError(f"{path}:{line_no}: duplicate id {article_id!r}")
            seen.add(article_id)
            if len(vector) != group.expected_dim:
                raise FeatureError(
                    f"{path}:{line_no}: id {article_id!r} has {len(vector)} dims, "
                    f"group {group.name!r} expects {group.expected_dim}"
                )
            arr = np.asarray(vector, dtype=float)
            if not np.all(np.isfinite(arr)):
                raise FeatureError(
                    f"{path}:{line_no}: id {article_id!r} has non-finite values"
                )
            ids.append(article_id)
            rows.append(arr)
    if not ids:
        raise FeatureError(f"{path}: no vectors found")
    return FeatureMatrix(group=group, ids=tuple(ids), rows=np.vstack(rows))


def manifest_vector_path(manifest_path) -> Path:
    """Vector file sitting next to its manifest: X.manifest.json -> X.jsonl."""
    manifest_path = Path(manifest_path)
    name = manifest_path.name
    if not name.endswith(".manifest.json"):
        raise FeatureError(
            f"{manifest_path}: manifest file names must end with .manifest.json"
        )
    return manifest_path.with_name(name[: -len(".manifest.json")] + ".jsonl")


def load_feature_file(manifest_path) -> FeatureMatrix:
    """Load a manifest + companion vector file, validating against the registry."""
    manifest_path = Path(manifest_path)
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    for key in ("group", "dim", "articles", "producer"):
        if key not in manifest:
            raise FeatureError(f"{manifest_path}: manifest missing {key!r}")
    name = manifest["group"]
    dim = int(manifest["dim"])
    registered = REGISTRY.get(name)
    if registered is not None and registered.expected_dim != dim:
        raise FeatureError(
            f"{manifest_path}: group {name!r} declares dim {dim}, registry "
            f"expects {registered.expected_dim}"
        )
    group = registered or FeatureGroup(name, dim, "external")
    matrix = ingest_vectors(manifest_vector_path(manifest_path), group)
    if len(matrix.ids) != int(manifest["articles"]):
        raise FeatureError(
            f"{manifest_path}: manifest declares {manifest['articles']} articles, "
            f"vector file has {len(matrix.ids)}"
        )
    return matrix


def write_vectors(out_dir, name: str, ids, rows, producer: str,
                  source: str = "native") -> Path:
    """Emit <name>.jsonl + <name>.manifest.json in the standard formats."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = np.asarray(rows, dtype=float)
    matrix = FeatureMatrix(  # validates finiteness/shape before anything is written
        group=FeatureGroup(name, rows.shape[1], source), ids=tuple(ids), rows=rows
    )
    vec_path = out_dir / f"{name}.jsonl"
    with open(vec_path, "w", encoding="utf-8") as fh:
        for article_id, row in zip(matrix.ids, matrix.rows):
            fh.write(json.dumps({"id": article_id, "vector": row.tolist()}) + "\n")
    manifest = {
        "group": name,
        "dim": int(rows.shape[1]),
        "articles": len(matrix.ids),
        "producer": producer,
    }
    with open(out_dir / f"{name}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return vec_path


def concat_groups(groups: list[FeatureMatrix], ids) -> FeatureMatrix:
    """Horizontal concatenation in the listed order, aligned to the given ids."""
    if not groups:
        raise FeatureError("concat_groups needs at least one group")
    ids = tuple(ids)
    blocks = [g.rows_for(ids) for g in groups]
    name = "+".join(g.group.name for g in groups)
    source = "native" if all(g.group.source == "native" for g in groups) else "external"
    dim = sum(g.dim for g in groups)
    if len(groups) == 1:
        return FeatureMatrix(group=groups[0].group, ids=ids, rows=blocks[0])
    return FeatureMatrix(
        group=FeatureGroup(name, dim, source), ids=ids, rows=np.hstack(blocks)
    )


def column_stats(train_rows: np.ndarray):
    """Per-column mean and population std of the training block."""
    mean = train_rows.mean(axis=0)
    std = train_rows.std(axis=0)
    return mean, std


def apply_standardize(rows: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    """Z-score with train statistics; columns with zero train std map to 0."""
    out = np.zeros_like(rows, dtype=float)
    nonzero = std > 0
    out[:, nonzero] = (rows[:, nonzero] - mean[nonzero]) / std[nonzero]
    return out


def standardize(train: FeatureMatrix, apply_to: FeatureMatrix):
    """Standardize both matrices with the training matrix's column statistics."""
    if train.group.name != apply_to.group.name or train.dim != apply_to.dim:
        raise FeatureError(
            f"standardize needs matching groups, got {train.group.name!r}/{train.dim} "
            f"and {apply_to.group.name!r}/{apply_to.dim}"
        )
    mean, std = column_stats(train.rows)
    train_out = FeatureMatrix(
        group=train.group, ids=train.ids, rows=apply_standardize(train.rows, mean, std)
    )
    apply_out = FeatureMatrix(
        group=apply_to.group,
        ids=apply_to.ids,
        rows=apply_standardize(apply_to.rows, mean, std),
    )
    return train_out, apply_out
