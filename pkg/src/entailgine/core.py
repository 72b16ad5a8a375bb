"""Shared domain types and score normalization.

All types here are immutable after construction and safe to share across
threads; the operations are pure functions. Probabilities, not logits, are
the inter-module currency: every downstream rule consumes normalized
(p_e, p_n, p_c) triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import ValidationError, ProtocolError

#: Tolerance on |p_e + p_n + p_c - 1| for a triple to count as normalized.
SUM_TOLERANCE = 1e-6


class Label(Enum):
    """Three-way NLI verdict with stable serialization tokens."""

    ENTAILMENT = "e"
    NEUTRAL = "n"
    CONTRADICTION = "c"

    @classmethod
    def from_token(cls, token: str) -> "Label":
        for label in cls:
            if label.value == token:
                return label
        raise ValidationError(f"unknown label token {token!r} (expected one of e/n/c)")


@dataclass(frozen=True)
class RawScores:
    """Unbounded backend scores (logits) for the three classes.

    Non-finite components are rejected at construction so no NaN/inf can
    enter the engine from a backend.
    """

    s_e: float
    s_n: float
    s_c: float

    def __post_init__(self) -> None:
        for name in ("s_e", "s_n", "s_c"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValidationError(f"raw score {name} is not finite: {value!r}")


@dataclass(frozen=True)
class ScoreTriple:
    """Normalized class distribution (p_e, p_n, p_c) for one scored pair.

    Invariants (each component in [0, 1], components summing to 1 within
    SUM_TOLERANCE) are enforced at backend boundaries via
    :func:`validate_triple`, not at construction, so that boundary code can
    inspect and reject malformed values.
    """

    p_e: float
    p_n: float
    p_c: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_e, self.p_n, self.p_c)

    def get(self, label: Label) -> float:
        if label is Label.ENTAILMENT:
            return self.p_e
        if label is Label.NEUTRAL:
            return self.p_n
        return self.p_c

    def argmax(self) -> Label:
        """Highest-probability label; ties resolve in (e, n, c) order."""
        best = Label.ENTAILMENT
        best_p = self.p_e
        for label, p in ((Label.NEUTRAL, self.p_n), (Label.CONTRADICTION, self.p_c)):
            if p > best_p:
                best, best_p = label, p
        return best


@dataclass(frozen=True)
class Span:
    """One sentence of a segmented document, with offsets into the source text."""

    doc_index: int
    span_index: int
    text: str
    char_start: int
    char_end: int

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValidationError(
                f"span ({self.doc_index}, {self.span_index}) is empty after trimming"
            )
        if self.char_start < 0 or self.char_end < self.char_start:
            raise ValidationError(
                f"span ({self.doc_index}, {self.span_index}) has invalid offsets "
                f"[{self.char_start}, {self.char_end})"
            )


@dataclass(frozen=True)
class Document:
    """A segmented premise document: an id plus ordered, non-overlapping spans."""

    id: str
    spans: tuple[Span, ...]

    def __post_init__(self) -> None:
        last_end = -1
        for i, span in enumerate(self.spans):
            if span.span_index != i:
                raise ValidationError(
                    f"document {self.id!r}: span_index {span.span_index} at position {i} "
                    "(indices must be 0..n-1 with no gaps)"
                )
            if span.char_start < last_end:
                raise ValidationError(f"document {self.id!r}: span {i} overlaps its predecessor")
            last_end = span.char_end

    def __len__(self) -> int:
        return len(self.spans)


@dataclass(frozen=True)
class Cluster:
    """A topic-grouped collection of documents.

    Cluster analysis additionally requires at least two documents; that is
    checked by the ranking entry points, not here, so single-document
    clusters remain valid inputs for the corruption builder.
    """

    topic: str
    documents: tuple[Document, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        ids = [doc.id for doc in self.documents]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"cluster {self.topic!r}: document ids are not unique: {ids}")

    def __len__(self) -> int:
        return len(self.documents)


def normalize_scores(raw: RawScores) -> ScoreTriple:
    """Softmax over the three raw scores, stabilized by max-subtraction.

    Inputs of magnitude up to +-1e4 produce valid triples with no overflow.
    """
    scores = (raw.s_e, raw.s_n, raw.s_c)
    peak = max(scores)
    exps = [math.exp(s - peak) for s in scores]
    total = sum(exps)
    return ScoreTriple(exps[0] / total, exps[1] / total, exps[2] / total)


def validate_triple(p: ScoreTriple, pair_index: int | None = None) -> ScoreTriple:
    """Pass through a triple that meets the ScoreTriple invariants.

    Used at every backend boundary. ``pair_index`` identifies the offending
    pair when validating a batch response.
    """
    where = "" if pair_index is None else f" (pair {pair_index})"
    for name, value in (("p_e", p.p_e), ("p_n", p.p_n), ("p_c", p.p_c)):
        if not math.isfinite(value):
            raise ProtocolError(f"score {name} is not finite: {value!r}{where}")
        if value < 0.0 or value > 1.0:
            raise ProtocolError(f"score {name}={value!r} outside [0, 1]{where}")
    total = p.p_e + p.p_n + p.p_c
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise ProtocolError(f"scores sum to {total!r}, deviating beyond {SUM_TOLERANCE}{where}")
    return p
