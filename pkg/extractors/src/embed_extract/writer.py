"""Atomic vector-JSONL + manifest emission in the pipeline's ingestion format."""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .errors import ExtractError


def write_vector_file(out_dir, group: str, rows, producer: str) -> Path:
    """Write <group>.jsonl and <group>.manifest.json (temp file + rename).

    rows: iterable of (article_id, vector). Dimensions must agree and values
    must be finite; nothing is written otherwise.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ids = []
    vectors = []
    dim = None
    for article_id, vec in rows:
        arr = np.asarray(vec, dtype=float)
        if arr.ndim != 1:
            raise ExtractError(f"group {group!r}: id {article_id!r} vector is not 1-d")
        if dim is None:
            dim = arr.shape[0]
        elif arr.shape[0] != dim:
            raise ExtractError(
                f"group {group!r}: id {article_id!r} has {arr.shape[0]} dims, "
                f"previous rows had {dim}"
            )
        if not np.all(np.isfinite(arr)):
            raise ExtractError(f"group {group!r}: id {article_id!r} has non-finite values")
        if article_id in ids:
            raise ExtractError(f"group {group!r}: duplicate id {article_id!r}")
        ids.append(article_id)
        vectors.append(arr)
    if not ids:
        raise ExtractError(f"group {group!r}: nothing to write")

    vec_path = out_dir / f"{group}.jsonl"
    tmp = vec_path.with_name(vec_path.name + f".tmp-{os.getpid()}")
    with open(tmp, "w", encoding="utf-8") as fh:
        for article_id, arr in zip(ids, vectors):
            fh.write(json.dumps({"id": article_id, "vector": arr.tolist()}) + "\n")
    os.replace(tmp, vec_path)

    manifest_path = out_dir / f"{group}.manifest.json"
    tmp = manifest_path.with_name(manifest_path.name + f".tmp-{os.getpid()}")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(
            {"group": group, "dim": int(dim), "articles": len(ids), "producer": producer},
            fh, indent=2, sort_keys=True,
        )
        fh.write("\n")
    os.replace(tmp, manifest_path)
    return vec_path
