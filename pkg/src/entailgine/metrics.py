"""Evaluation metrics over system outputs.

All metrics are pure functions over prediction/gold sequences and return
values in [0, 1]. Zero-denominator conventions follow the usual ones:
precision is 0 with no predictions of the class, recall is 0 with no golds,
F1 is 0 when both components are 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .errors import MetricError


@dataclass(frozen=True)
class RankedInstance:
    """A full ranking of span refs plus the gold ref it must contain once."""

    ranking: tuple[Hashable, ...]
    gold: Hashable

    def __post_init__(self) -> None:
        occurrences = sum(1 for ref in self.ranking if ref == self.gold)
        if occurrences != 1:
            raise MetricError(
                f"gold ref {self.gold!r} appears {occurrences} times in the ranking"
            )

    def gold_rank(self) -> int:
        """1-based position of the gold ref."""
        return self.ranking.index(self.gold) + 1


def f1_class(
    preds: Sequence[Hashable], golds: Sequence[Hashable], target: Hashable
) -> tuple[float, float, float]:
    """Precision, recall and F1 of one target class."""
    if len(preds) != len(golds):
        raise MetricError(f"length mismatch: {len(preds)} predictions vs {len(golds)} golds")
    if not preds:
        raise MetricError("cannot score an empty prediction list")
    tp = sum(1 for p, g in zip(preds, golds) if p == target and g == target)
    fp = sum(1 for p, g in zip(preds, golds) if p == target and g != target)
    fn = sum(1 for p, g in zip(preds, golds) if p != target and g == target)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def precision_at_recall(
    scores: Sequence[tuple[float, bool]], r: float = 0.8
) -> float:
    """Precision of the smallest score-ranked prefix whose recall reaches ``r``.

    Items are sorted by score descending; equal-scored items always enter the
    prefix together, since softmax-derived span scores frequently collide.
    """
    positives = sum(1 for _, gold in scores if gold)
    if positives == 0:
        raise MetricError("precision-at-recall requires at least one positive gold")
    ranked = sorted(scores, key=lambda item: -item[0])
    taken = 0
    tp = 0
    i = 0
    while i < len(ranked):
        j = i
        while j < len(ranked) and ranked[j][0] == ranked[i][0]:
            if ranked[j][1]:
                tp += 1
            j += 1
        taken = j
        if tp / positives >= r:
            return tp / taken
        i = j
    raise MetricError(f"recall {r} unreachable")  # impossible: full list has recall 1


def accuracy_at_k(instances: Sequence[RankedInstance], k: int) -> float:
    """Fraction of instances whose gold ref ranks within the top ``k``."""
    if not instances:
        raise MetricError("cannot score an empty instance list")
    hits = sum(1 for inst in instances if inst.gold_rank() <= k)
    return hits / len(instances)


def balanced_accuracy(
    preds: Sequence[Hashable], golds: Sequence[Hashable]
) -> float:
    """Mean per-class recall over the two classes present in the golds."""
    if len(preds) != len(golds):
        raise MetricError(f"length mismatch: {len(preds)} predictions vs {len(golds)} golds")
    classes = sorted(set(golds), key=repr)
    if len(classes) != 2:
        raise MetricError(f"balanced accuracy needs exactly two gold classes, got {len(classes)}")
    recalls = []
    for cls in classes:
        total = sum(1 for g in golds if g == cls)
        hit = sum(1 for p, g in zip(preds, golds) if g == cls and p == cls)
        recalls.append(hit / total)
    return sum(recalls) / len(recalls)
