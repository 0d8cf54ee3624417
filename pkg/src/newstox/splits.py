"""Deterministic stratified/unstratified k-way partitions."""

from __future__ import annotations

import warnings
from collections import defaultdict
from typing import Hashable, Sequence

import numpy as np


def stratified_partition(labels: Sequence[Hashable], k: int, rng: np.random.Generator,
                         warn_small: bool = True) -> list[list[int]]:
    """Partition indices 0..len(labels)-1 into k folds, stratified by label.

    Each class's members are shuffled and dealt round-robin; the deal offset
    rotates by each class's remainder so leftover articles spread across folds.
    Every fold gets floor(n_c/k) or ceil(n_c/k) members of class c.
    """
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if len(labels) < k:
        raise ValueError(f"cannot split {len(labels)} items into {k} folds")
    by_class: dict[Hashable, list[int]] = defaultdict(list)
    for i, label in enumerate(labels):
        by_class[label].append(i)

    small = sorted(str(c) for c, idx in by_class.items() if len(idx) < k)
    if small and warn_small:
        warnings.warn(
            f"classes with fewer than {k} samples get best-effort stratification: "
            f"{small}",
            RuntimeWarning,
            stacklevel=2,
        )

    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for cls in sorted(by_class, key=str):
        idx = np.array(by_class[cls])
        rng.shuffle(idx)
        for j, i in enumerate(idx):
            folds[(offset + j) % k].append(int(i))
        offset = (offset + len(idx)) % k
    return [sorted(f) for f in folds]


def plain_partition(n: int, k: int, rng: np.random.Generator) -> list[list[int]]:
    """Unstratified near-equal partition of indices 0..n-1."""
    if n < k:
        raise ValueError(f"cannot split {n} items into {k} folds")
    idx = rng.permutation(n)
    return [sorted(int(i) for i in chunk) for chunk in np.array_split(idx, k)]


def train_val_splits(folds: list[list[int]]):
    """(train_indices, val_indices) pairs, one per held-out fold."""
    out = []
    for held in range(len(folds)):
        val = folds[held]
        train = sorted(i for f, fold in enumerate(folds) if f != held for i in fold)
        out.append((train, val))
    return out
