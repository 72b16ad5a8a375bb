"""Hypothesis-vs-long-document inference.

Scores every span of a segmented premise against the hypothesis, ranks
spans for retrieval by their non-neutral scores, and produces a document
verdict either directly from the strongest span (retrieve-and-predict) or
after rescoring against synthetic premises built from the top spans
(retrieve-and-rerank).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Document, Label, ScoreTriple
from .errors import EmptyDocumentError, ValidationError
from .gateway import ScoreRequestPair, ScorerGateway


@dataclass(frozen=True)
class SpanScores:
    """Score triple for one (hypothesis, span) pair."""

    doc_index: int
    span_index: int
    triple: ScoreTriple


@dataclass(frozen=True)
class LabelMaxima:
    """Per-label maxima over a document's spans. Not a distribution."""

    e: float
    n: float
    c: float


@dataclass(frozen=True)
class RetrievalRankings:
    """Span indices ranked by entail, contradict, and max non-neutral score.

    Each entry is (span_index, score), sorted by score descending with ties
    broken by ascending span index. The non-neutral ranking is the retrieval
    score used for precision-at-recall evaluation.
    """

    by_entail: tuple[tuple[int, float], ...]
    by_contra: tuple[tuple[int, float], ...]
    by_non_neutral: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class RerankConfig:
    k: int = 1
    t: float = 0.5
    always_rerank: bool = False

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValidationError("rerank depth k must be >= 1")
        if not 0.0 <= self.t <= 1.0:
            raise ValidationError("decision threshold t must lie in [0, 1]")


@dataclass(frozen=True)
class DocVerdict:
    """Three-way decision for a hypothesis against one document.

    ``max_scores`` holds the per-label maxima over spans; ``evidence`` maps
    each non-neutral label to the span index achieving its maximum.
    ``rerank_triple`` is the averaged second-pass triple and is present only
    when the rerank pass actually ran.
    """

    label: Label
    max_scores: LabelMaxima
    evidence: dict[Label, int]
    method: str = "predict"
    rerank_triple: ScoreTriple | None = None


def score_spans(hypothesis: str, doc: Document, gateway: ScorerGateway) -> list[SpanScores]:
    """One score triple per span, in span order."""
    if not doc.spans:
        raise EmptyDocumentError(f"document {doc.id!r} has no spans")
    pairs = [ScoreRequestPair(hypothesis, span.text) for span in doc.spans]
    triples = gateway.score_batch(pairs)
    return [
        SpanScores(doc_index=span.doc_index, span_index=span.span_index, triple=triple)
        for span, triple in zip(doc.spans, triples)
    ]


def _ranked(scores: Sequence[SpanScores], key) -> tuple[tuple[int, float], ...]:
    indexed = [(s.span_index, key(s.triple)) for s in scores]
    return tuple(sorted(indexed, key=lambda item: (-item[1], item[0])))


def rank_for_retrieval(scores: Sequence[SpanScores]) -> RetrievalRankings:
    """Rank spans by p_e, by p_c, and by max(p_e, p_c)."""
    if not scores:
        raise ValidationError("cannot rank an empty score list")
    return RetrievalRankings(
        by_entail=_ranked(scores, lambda t: t.p_e),
        by_contra=_ranked(scores, lambda t: t.p_c),
        by_non_neutral=_ranked(scores, lambda t: max(t.p_e, t.p_c)),
    )


def _argmax_span(scores: Sequence[SpanScores], key) -> int:
    best = scores[0]
    for s in scores[1:]:
        if key(s.triple) > key(best.triple):
            best = s
    return best.span_index


def _decide(p_e: float, p_c: float, t: float) -> Label:
    # Exact tie p_e == p_c above the threshold resolves to entailment.
    if max(p_e, p_c) > t:
        return Label.ENTAILMENT if p_e >= p_c else Label.CONTRADICTION
    return Label.NEUTRAL


def retrieve_and_predict(scores: Sequence[SpanScores], t: float = 0.5) -> DocVerdict:
    """Verdict from the span with the strongest non-neutral score.

    Takes the per-label maxima over spans; if the larger of the entail and
    contradict maxima exceeds ``t``, that label wins, otherwise the verdict
    is neutral.
    """
    if not scores:
        raise ValidationError("cannot predict from an empty score list")
    maxima = LabelMaxima(
        e=max(s.triple.p_e for s in scores),
        n=max(s.triple.p_n for s in scores),
        c=max(s.triple.p_c for s in scores),
    )
    evidence = {
        Label.ENTAILMENT: _argmax_span(scores, lambda tr: tr.p_e),
        Label.CONTRADICTION: _argmax_span(scores, lambda tr: tr.p_c),
    }
    return DocVerdict(
        label=_decide(maxima.e, maxima.c, t),
        max_scores=maxima,
        evidence=evidence,
        method="predict",
    )


def build_rerank_premises(
    doc: Document, rankings: RetrievalRankings, k: int
) -> tuple[str, str]:
    """The two synthetic premises contrasting top entailing and contradicting spans.

    Instance A concatenates the top-k entailing spans in score order followed
    by the top-k contradicting spans; instance B swaps the two blocks. A span
    ranked in both top-k lists appears in both blocks; if fewer than k spans
    exist, all are used. Blocks join with single spaces.
    """
    if not doc.spans:
        raise EmptyDocumentError(f"document {doc.id!r} has no spans")
    entail_block = [doc.spans[i].text for i, _ in rankings.by_entail[:k]]
    contra_block = [doc.spans[i].text for i, _ in rankings.by_contra[:k]]
    instance_a = " ".join(entail_block + contra_block)
    instance_b = " ".join(contra_block + entail_block)
    return instance_a, instance_b


def retrieve_and_rerank(
    hypothesis: str,
    doc: Document,
    cfg: RerankConfig,
    gateway: ScorerGateway,
) -> DocVerdict:
    """Two-pass verdict: span scoring, then rescoring of synthetic premises.

    The second pass only runs when the first pass is non-neutral (some span's
    non-neutral maximum exceeds ``cfg.t``), unless ``always_rerank`` is set.
    The two second-pass triples are averaged component-wise and the same
    threshold-gated rule is applied to the average. Evidence indices stay
    those of the first pass.
    """
    scores = score_spans(hypothesis, doc, gateway)
    first = retrieve_and_predict(scores, cfg.t)
    if first.label is Label.NEUTRAL and not cfg.always_rerank:
        return DocVerdict(
            label=Label.NEUTRAL,
            max_scores=first.max_scores,
            evidence=first.evidence,
            method="rerank",
        )

    rankings = rank_for_retrieval(scores)
    instance_a, instance_b = build_rerank_premises(doc, rankings, cfg.k)
    triple_a, triple_b = gateway.score_batch(
        [ScoreRequestPair(hypothesis, instance_a), ScoreRequestPair(hypothesis, instance_b)]
    )
    averaged = ScoreTriple(
        (triple_a.p_e + triple_b.p_e) / 2.0,
        (triple_a.p_n + triple_b.p_n) / 2.0,
        (triple_a.p_c + triple_b.p_c) / 2.0,
    )
    return DocVerdict(
        label=_decide(averaged.p_e, averaged.p_c, cfg.t),
        max_scores=first.max_scores,
        evidence=first.evidence,
        method="rerank",
        rerank_triple=averaged,
    )
