import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from entailgine import (
    ClusterMode,
    GatewayConfig,
    ScoreTriple,
    ScorerGateway,
    ValidationError,
    rank_cluster,
    reference_rank,
)
from entailgine.gateway import LookupBackend
from .conftest import lookup_gateway, make_cluster, random_lookup_cluster


def tri(e, n, c):
    return ScoreTriple(e, n, c)


def contra(c):
    rest = (1.0 - c) / 2
    return tri(rest, rest, c)


# ------------------------------------------------------------ hand fixtures

def two_doc_fixture():
    cluster = make_cluster("t", [
        ("A", ["A zero."]),
        ("B", ["B zero.", "B one."]),
    ])
    table = {
        ("A zero.", "B zero."): contra(0.2),
        ("A zero.", "B one."): contra(0.7),
        ("B zero.", "A zero."): contra(0.4),
        ("B one.", "A zero."): contra(0.1),
    }
    return cluster, table


def test_two_doc_hand_trace():
    cluster, table = two_doc_fixture()
    ranking = rank_cluster(cluster, lookup_gateway(table))
    by_ref = {(e.doc_index, e.span_index): e for e in ranking.entries}
    a0 = by_ref[(0, 0)]
    assert a0.omega == 0.7
    assert a0.per_doc_best["B"].span_index == 1
    assert a0.per_doc_best["B"].score == 0.7
    # sorted by omega descending over all three candidate spans
    assert [(e.doc_index, e.span_index) for e in ranking.entries] == [
        (0, 0), (1, 0), (1, 1)]


def test_three_doc_mean_of_maxima():
    cluster = make_cluster("t", [
        ("A", ["A zero."]),
        ("B", ["B zero."]),
        ("C", ["C zero."]),
    ])
    table = {
        ("A zero.", "B zero."): contra(0.9),
        ("A zero.", "C zero."): contra(0.3),
        ("B zero.", "A zero."): contra(0.0),
        ("B zero.", "C zero."): contra(0.0),
        ("C zero.", "A zero."): contra(0.0),
        ("C zero.", "B zero."): contra(0.0),
    }
    ranking = rank_cluster(cluster, lookup_gateway(table))
    assert ranking.entries[0].omega == pytest.approx(0.6)
    assert ranking.entries[0].doc_index == 0


def test_duplicate_maxima_do_not_collapse():
    # two other documents reach the same best score; the mean must run over
    # one value per document, not over a deduplicated set of values
    cluster = make_cluster("t", [
        ("A", ["A zero."]),
        ("B", ["B zero."]),
        ("C", ["C zero."]),
        ("D", ["D zero."]),
    ])
    table = {}
    for hyp in ("A", "B", "C", "D"):
        for prem in ("A", "B", "C", "D"):
            if hyp != prem:
                table[(f"{hyp} zero.", f"{prem} zero.")] = contra(0.0)
    table[("A zero.", "B zero.")] = contra(0.7)
    table[("A zero.", "C zero.")] = contra(0.7)
    table[("A zero.", "D zero.")] = contra(0.1)
    ranking = rank_cluster(cluster, lookup_gateway(table))
    a0 = next(e for e in ranking.entries if e.doc_index == 0)
    assert a0.omega == pytest.approx((0.7 + 0.7 + 0.1) / 3)  # 0.5, not 0.4


def test_per_doc_best_covers_every_other_document():
    rng = random.Random(3)
    cluster, table, _ = random_lookup_cluster(rng)
    ranking = rank_cluster(cluster, lookup_gateway(table))
    for entry in ranking.entries:
        assert len(entry.per_doc_best) == len(cluster.documents) - 1
        assert cluster.documents[entry.doc_index].id not in entry.per_doc_best


def test_self_pairs_never_scored_and_budget_matches():
    rng = random.Random(9)
    cluster, table, _ = random_lookup_cluster(rng)
    backend = LookupBackend(table)  # raises on any same-document pair
    rank_cluster(cluster, ScorerGateway(GatewayConfig(), backend=backend))
    sizes = [len(d.spans) for d in cluster.documents]
    expected = sum(
        n_i * n_k for i, n_i in enumerate(sizes) for k, n_k in enumerate(sizes) if i != k
    )
    assert backend.pairs_scored == expected


# ------------------------------------------------------------------ oracle

@given(st.integers(0, 2 ** 31))
@settings(max_examples=40, deadline=None)
def test_rank_matches_brute_force_reference(seed):
    rng = random.Random(seed)
    cluster, table, matrix = random_lookup_cluster(rng)
    mode = rng.choice(list(ClusterMode))
    got = rank_cluster(cluster, lookup_gateway(table), mode=mode)
    want = reference_rank(cluster, matrix, mode=mode)
    assert got.entries == want.entries  # exact scores, exact order


def test_reference_rank_missing_entry():
    cluster, _ = two_doc_fixture()
    with pytest.raises(ValidationError):
        reference_rank(cluster, {})


def test_reference_rank_all_zero_matrix():
    cluster, table = two_doc_fixture()
    zero = tri(0.0, 0.0, 0.0)
    matrix = {
        ((0, 0), (1, 0)): zero, ((0, 0), (1, 1)): zero,
        ((1, 0), (0, 0)): zero, ((1, 1), (0, 0)): zero,
    }
    ranking = reference_rank(cluster, matrix)
    assert [e.omega for e in ranking.entries] == [0.0, 0.0, 0.0]
    assert [(e.doc_index, e.span_index) for e in ranking.entries] == [
        (0, 0), (1, 0), (1, 1)]  # ties fall back to index order


# ------------------------------------------------------------------- modes

def test_consensus_probes_entailment():
    cluster = make_cluster("t", [
        ("A", ["A zero."]),
        ("B", ["B zero.", "B one."]),
    ])
    table = {
        ("A zero.", "B zero."): tri(0.8, 0.1, 0.1),
        ("A zero.", "B one."): tri(0.1, 0.1, 0.8),
        ("B zero.", "A zero."): tri(0.6, 0.2, 0.2),
        ("B one.", "A zero."): tri(0.0, 0.2, 0.8),
    }
    ranking = rank_cluster(cluster, lookup_gateway(table), mode=ClusterMode.CONSENSUS)
    top = ranking.entries[0]
    assert (top.doc_index, top.span_index) == (0, 0)
    assert top.omega == 0.8
    assert top.per_doc_best["B"].span_index == 0  # the entailing span, not B one


def test_consensus_on_swapped_scores_equals_discrepancy():
    rng = random.Random(21)
    cluster, table, _ = random_lookup_cluster(rng)
    swapped = {key: tri(t.p_c, t.p_n, t.p_e) for key, t in table.items()}
    disc = rank_cluster(cluster, lookup_gateway(table), mode=ClusterMode.DISCREPANCY)
    cons = rank_cluster(cluster, lookup_gateway(swapped), mode=ClusterMode.CONSENSUS)
    assert disc.entries == cons.entries


def test_reversed_entailment_sorts_ascending():
    rng = random.Random(33)
    cluster, table, _ = random_lookup_cluster(rng)
    reversed_ranking = rank_cluster(
        cluster, lookup_gateway(table), mode=ClusterMode.REVERSED_ENTAILMENT)
    omegas = [e.omega for e in reversed_ranking.entries]
    assert omegas == sorted(omegas)
    consensus = rank_cluster(cluster, lookup_gateway(table), mode=ClusterMode.CONSENSUS)
    assert {(e.doc_index, e.span_index, e.omega) for e in consensus.entries} == \
        {(e.doc_index, e.span_index, e.omega) for e in reversed_ranking.entries}


# ------------------------------------------------------------------- scope

def test_scope_restricts_candidates_not_comparisons():
    cluster, table = two_doc_fixture()
    ranking = rank_cluster(cluster, lookup_gateway(table), scope=1)
    assert [(e.doc_index, e.span_index) for e in ranking.entries] == [(1, 0), (1, 1)]
    for entry in ranking.entries:
        assert set(entry.per_doc_best) == {"A"}


def test_scope_out_of_range():
    cluster, table = two_doc_fixture()
    with pytest.raises(ValidationError):
        rank_cluster(cluster, lookup_gateway(table), scope=5)


def test_single_document_cluster_rejected(mock_gateway):
    cluster = make_cluster("t", [("only", ["One span."])])
    with pytest.raises(ValidationError):
        rank_cluster(cluster, mock_gateway())


# ------------------------------------------------------------- determinism

@pytest.mark.parametrize("workers", [1, 2, 8])
def test_parallel_workers_do_not_change_the_ranking(workers):
    rng = random.Random(77)
    cluster, table, _ = random_lookup_cluster(rng, n_docs=4)
    gw = lookup_gateway(table, batch_size=3, max_in_flight=workers)
    base = rank_cluster(cluster, lookup_gateway(table, max_in_flight=1))
    assert rank_cluster(cluster, gw).entries == base.entries


def test_document_order_permutation_preserves_omega_multiset():
    rng = random.Random(13)
    cluster, table, _ = random_lookup_cluster(rng, n_docs=3)
    base = rank_cluster(cluster, lookup_gateway(table))
    shuffled_docs = list(cluster.documents)[::-1]
    from entailgine import Cluster

    with_reindexed = Cluster(topic=cluster.topic, documents=tuple(shuffled_docs))
    permuted = rank_cluster(with_reindexed, lookup_gateway(table))
    assert sorted(e.omega for e in base.entries) == \
        pytest.approx(sorted(e.omega for e in permuted.entries))
