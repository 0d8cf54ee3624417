"""Training-fold oversampling: random duplication and SMOTE interpolation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ModelError

STRATEGIES = ("none", "random", "smote")


@dataclass(frozen=True)
class ResamplePlan:
    strategy: str = "none"
    target: dict[int, int] | None = None  # class -> count; None: raise all to majority
    k_neighbors: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ModelError(
                f"unknown resample strategy {self.strategy!r}, expected one of {STRATEGIES}"
            )
        if self.k_neighbors < 1:
            raise ModelError("k_neighbors must be >= 1")


def _class_indices(y: np.ndarray) -> dict[int, np.ndarray]:
    return {int(c): np.where(y == c)[0] for c in np.unique(y)}


def _resolve_targets(y: np.ndarray, plan: ResamplePlan) -> dict[int, int]:
    by_class = _class_indices(y)
    if any(len(idx) == 0 for idx in by_class.values()):
        raise ModelError("every class needs at least one sample")
    if plan.target is not None:
        empty = sorted(set(plan.target) - set(by_class))
        if empty:
            raise ModelError(f"target classes with no samples: {empty}")
        targets = {}
        for c, idx in by_class.items():
            want = int(plan.target.get(c, len(idx)))
            if want < len(idx):
                raise ModelError(
                    f"target {want} for class {c} is below its current count {len(idx)}"
                )
            targets[c] = want
        return targets
    majority = max(len(idx) for idx in by_class.values())
    return {c: majority for c in by_class}


def random_oversample(X, y, plan: ResamplePlan):
    """Duplicate minority rows uniformly at random until the target counts."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    targets = _resolve_targets(y, plan)
    rng = np.random.default_rng(plan.seed)
    new_rows = [X]
    new_labels = [y]
    for c in sorted(targets):
        idx = np.where(y == c)[0]
        deficit = targets[c] - len(idx)
        if deficit <= 0:
            continue
        picks = rng.choice(idx, size=deficit, replace=True)
        new_rows.append(X[picks])
        new_labels.append(np.full(deficit, c, dtype=int))
    return np.vstack(new_rows), np.concatenate(new_labels)


def smote(X, y, plan: ResamplePlan):
    """Interpolated synthetic minorities: x + u*(nn - x), nn a same-class
    nearest neighbor under Euclidean distance, u uniform on [0, 1].

    Single-sample classes fall back to duplication with a warning.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    targets = _resolve_targets(y, plan)
    rng = np.random.default_rng(plan.seed)
    new_rows = [X]
    new_labels = [y]
    for c in sorted(targets):
        idx = np.where(y == c)[0]
        deficit = targets[c] - len(idx)
        if deficit <= 0:
            continue
        if len(idx) == 1:
            warnings.warn(
                f"class {c} has a single sample; SMOTE falls back to duplication",
                RuntimeWarning,
                stacklevel=2,
            )
            new_rows.append(np.repeat(X[idx], deficit, axis=0))
            new_labels.append(np.full(deficit, c, dtype=int))
            continue
        pts = X[idx]
        k = min(plan.k_neighbors, len(idx) - 1)
        dists = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        np.fill_diagonal(dists, np.inf)
        neighbors = np.argsort(dists, axis=1, kind="stable")[:, :k]
        synthetic = np.empty((deficit, X.shape[1]))
        for s in range(deficit):
            i = int(rng.integers(len(idx)))
            j = int(neighbors[i, rng.integers(k)])
            u = rng.random()
            synthetic[s] = pts[i] + u * (pts[j] - pts[i])
        new_rows.append(synthetic)
        new_labels.append(np.full(deficit, c, dtype=int))
    return np.vstack(new_rows), np.concatenate(new_labels)


def apply_plan(X, y, plan: ResamplePlan | None):
    """Dispatch by strategy; 'none' (or no plan) returns the inputs unchanged."""
    if plan is None or plan.strategy == "none":
        return np.asarray(X, dtype=float), np.asarray(y, dtype=int)
    if plan.strategy == "random":
        return random_oversample(X, y, plan)
    return smote(X, y, plan)
