"""Live-HTTP interop between the service and the engine's remote client.

Spins up a real uvicorn server on an ephemeral port and drives it through
the engine's gateway, so the whole wire path — request formatting, batching,
retries, response validation — is exercised against this implementation.
"""

import threading
import time

import pytest
import requests
import uvicorn

from entailgine import GatewayConfig, ScoreRequestPair, ScorerGateway
from entailgine.gateway import RemoteBackend
from scorer_service import ServiceConfig, create_app


@pytest.fixture(scope="module")
def endpoint():
    app = create_app(ServiceConfig(max_batch=256))
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("uvicorn did not start within 10s")
        time.sleep(0.01)
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def remote_gateway(endpoint, **overrides):
    return ScorerGateway(GatewayConfig(backend="remote", endpoint=endpoint, **overrides))


def test_health_over_live_http(endpoint):
    body = RemoteBackend(endpoint).health()
    assert body["status"] == "ok"
    assert body["model"] == "lexical-overlap-heuristic"


def test_protocol_conformance_over_live_http(endpoint):
    r = requests.post(f"{endpoint}/v1/score", json={"pairs": [
        {"hypothesis": "a b c", "premise": "a b c"},
        {"hypothesis": "a b c", "premise": "x y z"},
    ]}, timeout=10)
    assert r.status_code == 200
    scores = r.json()["scores"]
    assert len(scores) == 2
    for s in scores:
        assert set(s) == {"e", "n", "c"}
        assert abs(s["e"] + s["n"] + s["c"] - 1.0) <= 1e-6


def test_sanity_fixtures_through_gateway(endpoint):
    gw = remote_gateway(endpoint)
    reflexive, swapped = gw.score_batch([
        ScoreRequestPair("The cat is black.", "The cat is black."),
        ScoreRequestPair("The cat is black.", "The cat is white."),
    ])
    assert max("enc", key=lambda k: getattr(reflexive, f"p_{k}")) == "e"
    assert max("enc", key=lambda k: getattr(swapped, f"p_{k}")) == "c"


def test_gateway_interop_on_hundred_pair_batch(endpoint):
    # one expected argmax per position: entail, contradict, neutral, repeating
    pairs = []
    expected = []
    for i in range(100):
        kind = i % 3
        if kind == 0:
            pairs.append(ScoreRequestPair(f"item {i} is ready", f"item {i} is ready"))
            expected.append("e")
        elif kind == 1:
            pairs.append(ScoreRequestPair(f"item {i} is ready", f"item {i} is broken"))
            expected.append("c")
        else:
            pairs.append(ScoreRequestPair(f"item {i} is ready", f"totally different {i}"))
            expected.append("n")
    gw = remote_gateway(endpoint, batch_size=32)
    triples = gw.score_batch(pairs)
    assert len(triples) == 100
    got = [max("enc", key=lambda k: getattr(t, f"p_{k}")) for t in triples]
    assert got == expected
