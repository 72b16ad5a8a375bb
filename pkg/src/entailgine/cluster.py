"""Cluster-wide discrepancy and consensus ranking.

Every candidate span is used as a hypothesis against all spans of every
other document in its cluster: per other document the strongest pairwise
score is kept, and the per-document maxima are averaged into the span's
ranking score. Discrepancy mode reads the contradiction probability,
consensus mode the entailment probability; the reversed-entailment mode
ranks by entailment ascending to replicate its (negative) baseline result.

Per-document maxima are collected as lists, not sets: collapsing duplicate
score values would silently change the mean, and the average is over one
value per other document.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .core import Cluster, Label, ScoreTriple
from .errors import ValidationError
from .gateway import ScoreRequestPair, ScorerGateway

#: Span reference inside a cluster: (doc_index, span_index).
SpanRef = tuple[int, int]


class ClusterMode(Enum):
    DISCREPANCY = "discrepancy"
    CONSENSUS = "consensus"
    REVERSED_ENTAILMENT = "reversed-entailment"

    @property
    def probe_label(self) -> Label:
        if self is ClusterMode.DISCREPANCY:
            return Label.CONTRADICTION
        return Label.ENTAILMENT

    @property
    def descending(self) -> bool:
        return self is not ClusterMode.REVERSED_ENTAILMENT


@dataclass(frozen=True)
class Alignment:
    """Best-matching span of one other document, with its pairwise score."""

    doc_index: int
    span_index: int
    score: float


@dataclass(frozen=True)
class RankedSpan:
    doc_index: int
    span_index: int
    omega: float
    per_doc_best: dict[str, Alignment]


@dataclass(frozen=True)
class ClusterRanking:
    """All candidate spans sorted by their cluster-level score.

    Sorted by omega descending (ascending for reversed-entailment mode),
    ties by (doc_index, span_index) ascending. Each entry carries the best
    alignment against every other document of the cluster.
    """

    entries: tuple[RankedSpan, ...]
    mode: ClusterMode
    scope: int | None


def _check_cluster(cluster: Cluster, scope: int | None) -> None:
    if len(cluster.documents) < 2:
        raise ValidationError(
            f"cluster {cluster.topic!r} has {len(cluster.documents)} document(s); "
            "cluster analysis needs at least 2"
        )
    for doc in cluster.documents:
        if not doc.spans:
            raise ValidationError(f"cluster {cluster.topic!r}: document {doc.id!r} is empty")
    if scope is not None and not 0 <= scope < len(cluster.documents):
        raise ValidationError(f"scope doc_index {scope} out of range")


def _candidate_docs(cluster: Cluster, scope: int | None) -> list[int]:
    if scope is None:
        return list(range(len(cluster.documents)))
    return [scope]


def _sort_entries(entries: list[RankedSpan], mode: ClusterMode) -> tuple[RankedSpan, ...]:
    if mode.descending:
        key = lambda e: (-e.omega, e.doc_index, e.span_index)  # noqa: E731
    else:
        key = lambda e: (e.omega, e.doc_index, e.span_index)  # noqa: E731
    return tuple(sorted(entries, key=key))


def rank_cluster(
    cluster: Cluster,
    gateway: ScorerGateway,
    mode: ClusterMode = ClusterMode.DISCREPANCY,
    scope: int | None = None,
) -> ClusterRanking:
    """Rank cluster spans by discrepancy (or consensus) likelihood.

    ``scope`` restricts the candidate hypotheses to one document's spans
    (comparisons still run against all other documents), mirroring setups
    that only rank spans of a designated primary document. Spans are never
    compared against other spans of their own document.
    """
    _check_cluster(cluster, scope)
    probe = mode.probe_label

    pairs: list[ScoreRequestPair] = []
    for i in _candidate_docs(cluster, scope):
        for hyp_span in cluster.documents[i].spans:
            for k, other in enumerate(cluster.documents):
                if k == i:
                    continue
                for prem_span in other.spans:
                    pairs.append(ScoreRequestPair(hyp_span.text, prem_span.text))
    triples = iter(gateway.score_batch(pairs))

    entries: list[RankedSpan] = []
    for i in _candidate_docs(cluster, scope):
        for hyp_span in cluster.documents[i].spans:
            per_doc_max: list[float] = []
            per_doc_best: dict[str, Alignment] = {}
            for k, other in enumerate(cluster.documents):
                if k == i:
                    continue
                doc_scores = [next(triples).get(probe) for _ in other.spans]
                best_index = max(
                    range(len(doc_scores)), key=lambda idx: (doc_scores[idx], -idx)
                )
                per_doc_max.append(doc_scores[best_index])
                per_doc_best[other.id] = Alignment(
                    doc_index=k, span_index=best_index, score=doc_scores[best_index]
                )
            entries.append(
                RankedSpan(
                    doc_index=i,
                    span_index=hyp_span.span_index,
                    omega=sum(per_doc_max) / len(per_doc_max),
                    per_doc_best=per_doc_best,
                )
            )
    return ClusterRanking(entries=_sort_entries(entries, mode), mode=mode, scope=scope)


def reference_rank(
    cluster: Cluster,
    score_matrix: Mapping[tuple[SpanRef, SpanRef], ScoreTriple],
    mode: ClusterMode = ClusterMode.DISCREPANCY,
    scope: int | None = None,
) -> ClusterRanking:
    """Brute-force transcription of the ranking loop over a precomputed matrix.

    Test oracle only: same output contract as :func:`rank_cluster`, fed by a
    lookup of ordered cross-document span pairs instead of a live scorer.
    """
    _check_cluster(cluster, scope)
    probe = mode.probe_label

    entries: list[RankedSpan] = []
    for i in _candidate_docs(cluster, scope):
        doc_i = cluster.documents[i]
        for hyp_span in doc_i.spans:
            omegas: list[float] = []
            per_doc_best: dict[str, Alignment] = {}
            for k, other in enumerate(cluster.documents):
                if k == i:
                    continue
                gammas: list[float] = []
                for prem_span in other.spans:
                    key = ((i, hyp_span.span_index), (k, prem_span.span_index))
                    if key not in score_matrix:
                        raise ValidationError(f"score matrix has no entry for pair {key}")
                    gammas.append(score_matrix[key].get(probe))
                best = max(gammas)
                best_index = gammas.index(best)
                omegas.append(best)
                per_doc_best[other.id] = Alignment(
                    doc_index=k, span_index=best_index, score=best
                )
            entries.append(
                RankedSpan(
                    doc_index=i,
                    span_index=hyp_span.span_index,
                    omega=sum(omegas) / len(omegas),
                    per_doc_best=per_doc_best,
                )
            )
    return ClusterRanking(entries=_sort_entries(entries, mode), mode=mode, scope=scope)
