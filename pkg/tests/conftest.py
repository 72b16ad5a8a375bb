import random

import pytest

from entailgine import (
    Cluster,
    GatewayConfig,
    ScoreTriple,
    ScorerGateway,
    ingest_presegmented,
)
from entailgine.gateway import LookupBackend


def make_doc(texts, doc_id="d", doc_index=0):
    return ingest_presegmented(list(texts), doc_id=doc_id, doc_index=doc_index)


def make_cluster(topic, docs):
    """docs: list of (doc_id, [sentence, ...])."""
    built = [make_doc(texts, doc_id=doc_id, doc_index=i)
             for i, (doc_id, texts) in enumerate(docs)]
    return Cluster(topic=topic, documents=tuple(built))


def random_triple(rng: random.Random) -> ScoreTriple:
    parts = [rng.random() + 1e-9 for _ in range(3)]
    total = sum(parts)
    return ScoreTriple(parts[0] / total, parts[1] / total, parts[2] / total)


def random_lookup_cluster(rng: random.Random, n_docs=None, max_spans=6):
    """A cluster with unique span texts plus a full cross-document score
    matrix, keyed both by text pair (for the backend) and by span-ref pair
    (for the brute-force reference)."""
    n_docs = n_docs or rng.randint(2, 5)
    docs = []
    for i in range(n_docs):
        n_spans = rng.randint(1, max_spans)
        docs.append((f"doc{i}", [f"Doc {i} span {j} text." for j in range(n_spans)]))
    cluster = make_cluster("synthetic", docs)

    table = {}
    matrix = {}
    for i, hyp_doc in enumerate(cluster.documents):
        for j, hyp_span in enumerate(hyp_doc.spans):
            for k, prem_doc in enumerate(cluster.documents):
                if k == i:
                    continue
                for l, prem_span in enumerate(prem_doc.spans):
                    triple = random_triple(rng)
                    table[(hyp_span.text, prem_span.text)] = triple
                    matrix[((i, j), (k, l))] = triple
    return cluster, table, matrix


def lookup_gateway(table, **cfg_overrides):
    cfg = GatewayConfig(**cfg_overrides)
    return ScorerGateway(cfg, backend=LookupBackend(table))


@pytest.fixture
def mock_gateway():
    def factory(**overrides):
        return ScorerGateway(GatewayConfig(**overrides))

    return factory
