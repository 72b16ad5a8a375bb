"""Wire-protocol behavior of the service against the built-in model."""

import math

import pytest
from fastapi.testclient import TestClient

from scorer_service import (
    HeuristicModel,
    ServiceConfig,
    create_app,
    format_input,
    softmax3,
)


@pytest.fixture
def client():
    return TestClient(create_app())


def post_pairs(client, pairs):
    body = {"pairs": [{"hypothesis": h, "premise": p} for h, p in pairs]}
    return client.post("/v1/score", json=body)


def argmax_label(score: dict) -> str:
    return max("enc", key=lambda k: score[k])


# --- /v1/health ---


def test_health_ok(client):
    r = client.get("/v1/health")
    assert r.status_code == 200
    body = r.json()
    assert body["status"] == "ok"
    assert body["model"] == "lexical-overlap-heuristic"
    assert body["template"] == "entailment: {hypothesis} [SEP] {premise}"


def test_health_repeated_calls_identical(client):
    assert client.get("/v1/health").content == client.get("/v1/health").content


def test_health_without_model_is_500():
    broken = TestClient(create_app(model=None))
    assert broken.get("/v1/health").status_code == 500
    assert post_pairs(broken, [("a b", "a b")]).status_code == 500


# --- /v1/score happy path ---

CAT_BLACK = "The cat is black."
CAT_WHITE = "The cat is white."
UNRELATED = "Quarterly revenue grew by twelve percent."


def test_batch_of_three_preserves_order_and_length(client):
    r = post_pairs(client, [
        (CAT_BLACK, CAT_BLACK),
        (CAT_BLACK, CAT_WHITE),
        (CAT_BLACK, UNRELATED),
    ])
    assert r.status_code == 200
    scores = r.json()["scores"]
    assert len(scores) == 3
    assert [argmax_label(s) for s in scores] == ["e", "c", "n"]


def test_reflexive_pair_entails(client):
    r = post_pairs(client, [(CAT_BLACK, CAT_BLACK)])
    assert argmax_label(r.json()["scores"][0]) == "e"


def test_single_word_swap_contradicts(client):
    r = post_pairs(client, [(CAT_BLACK, CAT_WHITE)])
    assert argmax_label(r.json()["scores"][0]) == "c"


def test_triples_are_distributions(client):
    pairs = [(f"alpha beta {i}", f"gamma delta {i}") for i in range(10)]
    pairs += [(CAT_BLACK, CAT_BLACK), (CAT_BLACK, CAT_WHITE)]
    r = post_pairs(client, pairs)
    for s in r.json()["scores"]:
        assert set(s) == {"e", "n", "c"}
        assert all(0.0 <= s[k] <= 1.0 for k in "enc")
        assert abs(s["e"] + s["n"] + s["c"] - 1.0) <= 1e-6


def test_identical_requests_identical_bytes(client):
    body = {"pairs": [{"hypothesis": CAT_BLACK, "premise": CAT_WHITE}]}
    r1 = client.post("/v1/score", json=body)
    r2 = client.post("/v1/score", json=body)
    assert r1.content == r2.content


def test_empty_batch_is_wellformed(client):
    r = client.post("/v1/score", json={"pairs": []})
    assert r.status_code == 200
    assert r.json() == {"scores": []}


# --- error statuses ---


def test_invalid_json_is_400(client):
    r = client.post("/v1/score", content=b"{not json",
                    headers={"content-type": "application/json"})
    assert r.status_code == 400


@pytest.mark.parametrize("body", [
    [],
    {},
    {"pairs": "nope"},
    {"pairs": [["h", "p"]]},
    {"pairs": [{"hypothesis": "h"}]},
    {"pairs": [{"hypothesis": "h", "premise": 3}]},
    {"pairs": [{"hypothesis": "   ", "premise": "p"}]},
])
def test_malformed_bodies_are_400(client, body):
    r = client.post("/v1/score", json=body)
    assert r.status_code == 400
    assert "detail" in r.json()


def test_oversized_batch_is_413():
    small = TestClient(create_app(ServiceConfig(max_batch=4)))
    r = post_pairs(small, [(f"h {i}", f"p {i}") for i in range(5)])
    assert r.status_code == 413
    assert post_pairs(small, [(f"h {i}", f"p {i}") for i in range(4)]).status_code == 200


class _ExplodingModel:
    name = "exploding"

    def score_pairs(self, pairs):
        raise RuntimeError("backbone on fire")


class _MiscountingModel:
    name = "miscounting"

    def score_pairs(self, pairs):
        return [(1.0, 0.0, 0.0)]


def test_model_failure_is_500():
    broken = TestClient(create_app(model=_ExplodingModel()))
    r = post_pairs(broken, [("a b", "a b")])
    assert r.status_code == 500
    assert "backbone on fire" in r.json()["detail"]


def test_model_miscount_is_500():
    broken = TestClient(create_app(model=_MiscountingModel()))
    assert post_pairs(broken, [("a b", "a b"), ("c d", "c d")]).status_code == 500


# --- label-order remapping ---


class _FixedModel:
    """Always puts all its weight on raw position 0."""

    name = "fixed"

    def score_pairs(self, pairs):
        return [(30.0, 0.0, 0.0) for _ in pairs]


def test_label_order_remaps_positions():
    swapped = TestClient(create_app(
        ServiceConfig(label_order=("c", "n", "e")), model=_FixedModel()))
    identity = TestClient(create_app(model=_FixedModel()))
    assert argmax_label(post_pairs(swapped, [("a", "b")]).json()["scores"][0]) == "c"
    assert argmax_label(post_pairs(identity, [("a", "b")]).json()["scores"][0]) == "e"


# --- pure helpers and config ---


def test_format_input_default_template():
    got = format_input(ServiceConfig().template, "The claim.", "The article text.")
    assert got == "entailment: The claim. [SEP] The article text."


def test_softmax_is_stable_and_normalized():
    big = softmax3((1000.0, 999.0, 998.0))
    assert abs(sum(big) - 1.0) <= 1e-12
    assert big[0] > big[1] > big[2]
    assert softmax3((0.0, 0.0, 0.0)) == pytest.approx((1 / 3, 1 / 3, 1 / 3))


def test_heuristic_is_pure():
    model = HeuristicModel()
    pair = (CAT_BLACK, CAT_WHITE)
    assert model.score_pairs([pair]) == model.score_pairs([pair])
    for triple in model.score_pairs([pair, (CAT_BLACK, CAT_BLACK), ("x", "y")]):
        assert all(math.isfinite(v) for v in triple)


@pytest.mark.parametrize("kwargs", [
    {"max_batch": 0},
    {"port": 0},
    {"port": 70000},
    {"label_order": ("e", "n", "n")},
    {"template": "no placeholders"},
])
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        ServiceConfig(**kwargs)
