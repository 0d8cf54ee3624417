"""Accuracy, per-class precision/recall/F1 and macro-F1 over a declared label space."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .errors import PipelineError


@dataclass
class MetricsBundle:
    accuracy: float  # fraction in [0, 1]
    macro_f1: float
    per_class: dict  # label -> {precision, recall, f1, support}
    confusion: np.ndarray  # (K, K) counts, rows = true, columns = predicted
    label_space: tuple

    def to_json_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "per_class": {
                str(label): {k: float(v) if k != "support" else int(v)
                             for k, v in stats.items()}
                for label, stats in self.per_class.items()
            },
            "confusion": self.confusion.tolist(),
            "label_space": [str(label) for label in self.label_space],
        }


def compute_metrics(true: Sequence[Hashable], predicted: Sequence[Hashable],
                    label_space: Sequence[Hashable]) -> MetricsBundle:
    """Pooled multi-class metrics.

    Macro-F1 is the unweighted mean of per-class F1 over the full declared label
    space, including classes never present or never predicted; 0/0 ratios are 0.
    """
    if len(true) != len(predicted) or len(true) == 0:
        raise PipelineError(
            f"need equal non-empty label sequences, got {len(true)} and {len(predicted)}"
        )
    label_space = tuple(label_space)
    index = {label: i for i, label in enumerate(label_space)}
    k = len(label_space)
    confusion = np.zeros((k, k), dtype=int)
    for t, p in zip(true, predicted):
        if t not in index:
            raise PipelineError(f"true label {t!r} outside the declared label space")
        if p not in index:
            raise PipelineError(f"predicted label {p!r} outside the declared label space")
        confusion[index[t], index[p]] += 1

    per_class = {}
    f1s = []
    for label, i in index.items():
        tp = int(confusion[i, i])
        fp = int(confusion[:, i].sum() - tp)
        fn = int(confusion[i, :].sum() - tp)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": tp + fn,
        }
        f1s.append(f1)

    return MetricsBundle(
        accuracy=float(np.trace(confusion)) / len(true),
        macro_f1=float(np.mean(f1s)),
        per_class=per_class,
        confusion=confusion,
        label_space=label_space,
    )
