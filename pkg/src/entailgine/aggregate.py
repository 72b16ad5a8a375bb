"""Label-space adapters and multi-sentence hypothesis aggregation.

Adapts the three-way scorer to binary (entail vs. not-entail) tasks via
three zero-shot rules, tunes their decision threshold on a fixed grid, and
aggregates per-sentence support scores for multi-sentence hypotheses.

Strict ">" is used at every threshold: boundary equality falls to the
negative/neutral side.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .core import ScoreTriple
from .errors import TuningError, ValidationError
from .metrics import f1_class, balanced_accuracy


class BinaryLabel(Enum):
    ENTAIL = "entail"
    NOT_ENTAIL = "not_entail"


class BinaryKind(Enum):
    ENTAIL_THRESHOLD = "entail-threshold"
    CONTRA_THRESHOLD = "contra-threshold"
    BINARY_SOFTMAX = "binary-softmax"


@dataclass(frozen=True)
class BinaryMethod:
    kind: BinaryKind
    t: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 1.0:
            raise ValidationError("binary decision threshold must lie in [0, 1]")


class AggMode(Enum):
    SOFT = "soft"
    HARD = "hard"


@dataclass(frozen=True)
class HypAggregation:
    """How to combine per-sentence scores of a multi-sentence hypothesis.

    ``rerank_shift`` must be set (to the decision threshold) exactly when the
    per-sentence scores come from reranked verdicts; the per-sentence value
    then becomes the shifted difference p_e - p_c + shift instead of p_e.
    """

    mode: AggMode = AggMode.SOFT
    rerank_shift: float | None = None


class ConsistencyLabel(Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"


def binary_decide(p: ScoreTriple, method: BinaryMethod) -> BinaryLabel:
    """Collapse a three-way triple to entail / not-entail.

    The binary-softmax rule renormalizes over the two non-neutral classes;
    softmax over a logit subset equals the renormalized probabilities, so no
    logits are needed.
    """
    if method.kind is BinaryKind.ENTAIL_THRESHOLD:
        return BinaryLabel.ENTAIL if p.p_e > method.t else BinaryLabel.NOT_ENTAIL
    if method.kind is BinaryKind.CONTRA_THRESHOLD:
        return BinaryLabel.NOT_ENTAIL if p.p_c > method.t else BinaryLabel.ENTAIL
    denom = p.p_e + p.p_c
    if denom == 0.0:
        raise ValidationError("binary softmax undefined: p_e + p_c = 0")
    return BinaryLabel.ENTAIL if p.p_e / denom > method.t else BinaryLabel.NOT_ENTAIL


def threshold_grid(step: float = 0.05) -> list[float]:
    """The inclusive [0, 1] threshold grid; 21 points at the default step."""
    if not 0.0 < step <= 1.0:
        raise ValidationError("grid step must lie in (0, 1]")
    denom = round(1.0 / step)
    return [i / denom for i in range(denom + 1)]


def tune_threshold(
    scored: Sequence[tuple[ScoreTriple, bool]],
    kind: BinaryKind,
    grid_step: float = 0.05,
    objective: str = "f1",
) -> tuple[float, float]:
    """Best grid threshold for a binary rule; returns (t_star, objective_star).

    Gold labels are booleans (True = entail). The default objective is F1 of
    the entail class; "balanced-accuracy" is available for consistency-style
    tasks. Ties resolve to the smallest threshold.
    """
    if objective not in ("f1", "balanced-accuracy"):
        raise ValidationError(f"unknown tuning objective {objective!r}")
    golds = [gold for _, gold in scored]
    if not scored or len(set(golds)) < 2:
        raise TuningError("tuning requires at least one positive and one negative gold label")

    best_t = 0.0
    best_score = -1.0
    for t in threshold_grid(grid_step):
        method = BinaryMethod(kind=kind, t=t)
        preds = [binary_decide(triple, method) is BinaryLabel.ENTAIL for triple, _ in scored]
        if objective == "f1":
            _, _, score = f1_class(preds, golds, True)
        else:
            score = balanced_accuracy(preds, golds)
        if score > best_score:
            best_t, best_score = t, score
    return best_t, best_score


def aggregate_hypothesis(
    span_triples: Sequence[ScoreTriple], agg: HypAggregation
) -> float:
    """Combine per-hypothesis-sentence triples into one support score.

    Soft aggregation averages the per-sentence values, hard takes their
    minimum. The result is a ranking/threshold score, not a probability; in
    rerank mode (shifted difference) it may leave [0, 1].
    """
    if not span_triples:
        raise ValidationError("cannot aggregate an empty hypothesis-span list")
    if agg.rerank_shift is not None:
        values = [t.p_e - t.p_c + agg.rerank_shift for t in span_triples]
    else:
        values = [t.p_e for t in span_triples]
    if agg.mode is AggMode.HARD:
        return min(values)
    return sum(values) / len(values)


def balanced_binary_decide(score: float, t: float) -> ConsistencyLabel:
    """Consistent iff the aggregate score strictly exceeds the threshold."""
    return ConsistencyLabel.CONSISTENT if score > t else ConsistencyLabel.INCONSISTENT
