"""Synthetic planted-fact corpora for end-to-end runs and benchmarks.

Sentences carry the mock backend's sentinel convention: a cluster plants
one fact with opposite polarity in a single target sentence, every other
document states the fact with positive polarity once, and all remaining
sentences are unrelated filler.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Cluster
from .gateway import PlantedSentence
from .segment import make_cluster

_FILLER_SUBJECTS = [
    "The river", "The museum", "A local festival", "The old bridge",
    "The market square", "The railway line", "A nearby forest", "The harbor",
    "The observatory", "The city archive", "The botanical garden",
]
_FILLER_FACTS = [
    "was renovated in the spring", "draws many visitors each year",
    "appears in several travel guides", "is mentioned in early records",
    "hosts an annual exhibition", "closed briefly for repairs",
    "sits near the main station", "was photographed for a catalog",
    "features in a regional documentary", "has a small gift shop",
]


@dataclass(frozen=True)
class PlantedCluster:
    """A synthetic cluster plus the location of its planted discrepancy."""

    cluster: Cluster
    target_doc_index: int
    target_span_index: int
    fact_id: int


def _filler(rng: random.Random, serial: int) -> str:
    subject = rng.choice(_FILLER_SUBJECTS)
    fact = rng.choice(_FILLER_FACTS)
    return f"{subject} {fact} (item {serial})."


def make_planted_cluster(
    topic: str,
    rng: random.Random,
    n_docs: int = 11,
    spans_per_doc: tuple[int, int] = (6, 10),
    fact_id: int | None = None,
) -> PlantedCluster:
    """Build a cluster whose first document holds one contradicted sentence.

    Document 0 plays the primary-language article: one of its sentences
    carries the planted fact with negative polarity. Every other document
    states the same fact with positive polarity at a random position. Filler
    sentences are unique so pair-level dedup never conflates them.
    """
    if n_docs < 2:
        raise ValueError("a planted cluster needs at least 2 documents")
    fact = fact_id if fact_id is not None else rng.randrange(1, 10_000)
    serial = 0
    docs = []
    target_span_index = 0
    for d in range(n_docs):
        n_spans = rng.randint(*spans_per_doc)
        planted_at = rng.randrange(n_spans)
        sentinel = PlantedSentence(fact_id=fact, positive=d != 0).token()
        sentences = []
        for s in range(n_spans):
            if s == planted_at:
                sentences.append(f"{sentinel} Reports describe the {topic} landmark.")
            else:
                sentences.append(_filler(rng, serial))
                serial += 1
        if d == 0:
            target_span_index = planted_at
        docs.append((f"{topic}-doc{d}", sentences))
    return PlantedCluster(
        cluster=make_cluster(topic, docs),
        target_doc_index=0,
        target_span_index=target_span_index,
        fact_id=fact,
    )
