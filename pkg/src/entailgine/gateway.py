"""Pluggable NLI scoring boundary.

Formats hypothesis/premise pairs, batches and parallelizes backend calls,
caches results, and hosts the built-in backends: a deterministic
planted-fact mock, a lookup table for oracle tests, and a remote HTTP
client speaking the /v1/score wire protocol.

The cache key is the exact (hypothesis, premise) string pair; the relation
is never assumed symmetric - (a, b) and (b, a) are distinct NLI problems.
"""

from __future__ import annotations

import logging
import os
import re
import threading
import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Protocol, Sequence

import requests

from .core import ScoreTriple, validate_triple
from .errors import (
    BatchScoreError,
    ProtocolError,
    RemoteHTTPError,
    RemoteLengthMismatchError,
    RemoteMalformedError,
    ValidationError,
)

logger = logging.getLogger(__name__)

#: Environment variable that overrides the configured remote endpoint.
SCORER_URL_ENV = "ENTAILGINE_SCORER_URL"

# Mock score constants; chosen so the decision threshold T = 0.5 cleanly
# separates the three regimes, and jitter (capped at 0.03) never flips an
# argmax.
MOCK_MATCH = ScoreTriple(0.85, 0.10, 0.05)
MOCK_OPPOSITE = ScoreTriple(0.05, 0.10, 0.85)
MOCK_UNRELATED = ScoreTriple(0.03, 0.94, 0.03)

MAX_JITTER = 0.03

_SENTINEL_RE = re.compile(r"\[F=(\d+);P=([+\-−])\]")


@dataclass(frozen=True)
class ScoreRequestPair:
    """One hypothesis/premise pair to score; both non-empty after trimming."""

    hypothesis: str
    premise: str

    def __post_init__(self) -> None:
        if not self.hypothesis.strip():
            raise ValidationError("hypothesis is empty after trimming")
        if not self.premise.strip():
            raise ValidationError("premise is empty after trimming")


@dataclass(frozen=True)
class GatewayConfig:
    backend: str = "mock"
    batch_size: int = 32
    max_in_flight: int = 4
    cache_capacity: int = 1_000_000
    mock_jitter: float = 0.0
    seed: int = 0
    endpoint: str = "http://localhost:8400"
    max_retries: int = 3
    retry_backoff: float = 0.1

    def __post_init__(self) -> None:
        if self.backend not in ("mock", "remote"):
            raise ValidationError(f"unknown backend {self.backend!r}")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be >= 1")
        if self.max_in_flight < 1:
            raise ValidationError("max_in_flight must be >= 1")
        if self.cache_capacity < 0:
            raise ValidationError("cache_capacity must be >= 0")
        if not 0.0 <= self.mock_jitter <= MAX_JITTER:
            raise ValidationError(f"mock_jitter must lie in [0, {MAX_JITTER}]")


@dataclass(frozen=True)
class PlantedSentence:
    """The planted-fact convention for mock corpora.

    Rendered as a sentinel token "[F=<id>;P=<+|->]" embedded in the sentence
    text; at most one sentinel per sentence, and sentences without one are
    unrelated to everything.
    """

    fact_id: int
    positive: bool

    def token(self) -> str:
        return f"[F={self.fact_id};P={'+' if self.positive else '-'}]"


def parse_sentinel(text: str) -> PlantedSentence | None:
    """First planted-fact sentinel in the text, if any."""
    m = _SENTINEL_RE.search(text)
    if m is None:
        return None
    return PlantedSentence(fact_id=int(m.group(1)), positive=m.group(2) == "+")


def format_input(pair: ScoreRequestPair) -> str:
    """The literal encoder input a remote backend must feed its model."""
    if "[SEP]" in pair.hypothesis or "[SEP]" in pair.premise:
        logger.warning("pair text contains a literal [SEP]; formatted verbatim")
    return f"entailment: {pair.hypothesis} [SEP] {pair.premise}"


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash; stable across runs and platforms."""
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def _splitmix64(state: int) -> tuple[int, int]:
    """One step of splitmix64: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return state, z ^ (z >> 31)


def mock_score(pair: ScoreRequestPair, jitter: float = 0.0, seed: int = 0) -> ScoreTriple:
    """Deterministic oracle score from planted-fact sentinels.

    Same fact and polarity on both sides -> entailing; same fact, opposite
    polarity -> contradicting; anything else -> unrelated. Jitter, when
    enabled, perturbs each component by a value in [-jitter, +jitter] drawn
    from a stable hash of (hypothesis, premise, seed), then renormalizes.
    """
    hyp = parse_sentinel(pair.hypothesis)
    prem = parse_sentinel(pair.premise)
    if hyp is not None and prem is not None and hyp.fact_id == prem.fact_id:
        base = MOCK_MATCH if hyp.positive == prem.positive else MOCK_OPPOSITE
    else:
        base = MOCK_UNRELATED
    if jitter <= 0.0:
        return base

    message = (
        pair.hypothesis.encode("utf-8")
        + b"\x1f"
        + pair.premise.encode("utf-8")
        + b"\x1f"
        + (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")
    )
    state = fnv1a64(message)
    perturbed = []
    for p in base.as_tuple():
        state, word = _splitmix64(state)
        delta = (2.0 * (word / 2**64) - 1.0) * jitter
        perturbed.append(p + delta)
    total = sum(perturbed)
    return ScoreTriple(*(p / total for p in perturbed))


class Backend(Protocol):
    """One synchronous scoring call for a single batch of pairs."""

    def score_pairs(self, pairs: Sequence[ScoreRequestPair]) -> list[ScoreTriple]: ...


class MockBackend:
    """Planted-fact mock with batch/pair call counters for budget tests."""

    def __init__(self, jitter: float = 0.0, seed: int = 0):
        self.jitter = jitter
        self.seed = seed
        self.calls = 0
        self.pairs_scored = 0
        self._lock = threading.Lock()

    def score_pairs(self, pairs: Sequence[ScoreRequestPair]) -> list[ScoreTriple]:
        with self._lock:
            self.calls += 1
            self.pairs_scored += len(pairs)
        return [mock_score(pair, self.jitter, self.seed) for pair in pairs]


class LookupBackend:
    """Scores from a precomputed (hypothesis, premise) -> triple table.

    Test-oracle backend: lets cluster-ranking runs be checked against a
    brute-force reference over the same table.
    """

    def __init__(self, table: Mapping[tuple[str, str], ScoreTriple]):
        self.table = dict(table)
        self.calls = 0
        self.pairs_scored = 0
        self._lock = threading.Lock()

    def score_pairs(self, pairs: Sequence[ScoreRequestPair]) -> list[ScoreTriple]:
        with self._lock:
            self.calls += 1
            self.pairs_scored += len(pairs)
        out = []
        for pair in pairs:
            key = (pair.hypothesis, pair.premise)
            if key not in self.table:
                raise ProtocolError(f"lookup table has no entry for pair {key!r}")
            out.append(self.table[key])
        return out


class RemoteBackend:
    """HTTP client for the /v1/score wire protocol.

    Transport failures and non-200 statuses are retried with exponential
    backoff; a malformed body, length mismatch, or invalid triple is raised
    immediately as its own error type.
    """

    def __init__(
        self,
        endpoint: str,
        max_retries: int = 3,
        retry_backoff: float = 0.1,
        session: requests.Session | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.max_retries = max_retries
        self.retry_backoff = retry_backoff
        self.session = session or requests.Session()
        self._sleep = sleep

    def score_pairs(self, pairs: Sequence[ScoreRequestPair]) -> list[ScoreTriple]:
        body = {
            "pairs": [
                {"hypothesis": p.hypothesis, "premise": p.premise} for p in pairs
            ]
        }
        response = self._post_with_retries(body)
        try:
            payload = response.json()
            scores = payload["scores"]
            triples = [
                ScoreTriple(float(s["e"]), float(s["n"]), float(s["c"]))
                for s in scores
            ]
        except (ValueError, KeyError, TypeError) as exc:
            raise RemoteMalformedError(f"unparseable scorer response: {exc}") from exc
        if len(triples) != len(pairs):
            raise RemoteLengthMismatchError(
                f"requested {len(pairs)} scores, received {len(triples)}"
            )
        return [validate_triple(t, pair_index=i) for i, t in enumerate(triples)]

    def health(self) -> dict:
        response = self.session.get(f"{self.endpoint}/v1/health", timeout=10)
        if response.status_code != 200:
            raise RemoteHTTPError(
                f"health check returned {response.status_code}", status=response.status_code
            )
        return response.json()

    def _post_with_retries(self, body: dict) -> requests.Response:
        url = f"{self.endpoint}/v1/score"
        last_error: Exception | None = None
        status: int | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                self._sleep(self.retry_backoff * 2 ** (attempt - 1))
            try:
                response = self.session.post(url, json=body, timeout=60)
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code == 200:
                return response
            status = response.status_code
            last_error = RemoteHTTPError(f"scorer returned HTTP {status}", status=status)
        if isinstance(last_error, RemoteHTTPError):
            raise last_error
        raise RemoteHTTPError(f"scorer unreachable: {last_error}", status=status)


class _LRUCache:
    """Bounded, internally synchronized (hypothesis, premise) -> triple cache."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._store: OrderedDict[tuple[str, str], ScoreTriple] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: tuple[str, str]) -> ScoreTriple | None:
        if self.capacity == 0:
            return None
        with self._lock:
            triple = self._store.get(key)
            if triple is not None:
                self._store.move_to_end(key)
            return triple

    def put(self, key: tuple[str, str], triple: ScoreTriple) -> None:
        if self.capacity == 0:
            return
        with self._lock:
            self._store[key] = triple
            self._store.move_to_end(key)
            while len(self._store) > self.capacity:
                self._store.popitem(last=False)


def make_backend(cfg: GatewayConfig) -> Backend:
    if cfg.backend == "mock":
        return MockBackend(jitter=cfg.mock_jitter, seed=cfg.seed)
    endpoint = os.environ.get(SCORER_URL_ENV) or cfg.endpoint
    return RemoteBackend(
        endpoint, max_retries=cfg.max_retries, retry_backoff=cfg.retry_backoff
    )


class ScorerGateway:
    """Batching, caching, order-preserving front of a scoring backend.

    Output order always matches input order regardless of internal batching
    or parallelism; duplicate pairs are scored once per call and their result
    reused; every triple is validated before release. Callers may invoke the
    gateway from multiple threads.
    """

    def __init__(self, cfg: GatewayConfig | None = None, backend: Backend | None = None):
        self.cfg = cfg or GatewayConfig()
        self.backend = backend if backend is not None else make_backend(self.cfg)
        self._cache = _LRUCache(self.cfg.cache_capacity)

    def score_pair(self, hypothesis: str, premise: str) -> ScoreTriple:
        return self.score_batch([ScoreRequestPair(hypothesis, premise)])[0]

    def score_batch(self, pairs: Sequence[ScoreRequestPair]) -> list[ScoreTriple]:
        if not pairs:
            raise ValidationError("score_batch requires a non-empty pair list")

        keys = [(p.hypothesis, p.premise) for p in pairs]
        resolved: dict[tuple[str, str], ScoreTriple] = {}
        missing: list[tuple[tuple[str, str], ScoreRequestPair]] = []
        seen: set[tuple[str, str]] = set()
        for key, pair in zip(keys, pairs):
            if key in seen:
                continue
            seen.add(key)
            cached = self._cache.get(key)
            if cached is not None:
                resolved[key] = cached
            else:
                missing.append((key, pair))

        chunks = [
            missing[i : i + self.cfg.batch_size]
            for i in range(0, len(missing), self.cfg.batch_size)
        ]
        if len(chunks) > 1 and self.cfg.max_in_flight > 1:
            workers = min(self.cfg.max_in_flight, len(chunks))
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(self._score_chunk, chunks))
        else:
            results = [self._score_chunk(chunk) for chunk in chunks]

        failed: list[tuple[str, str]] = []
        causes: list[Exception] = []
        for chunk, outcome in zip(chunks, results):
            if isinstance(outcome, Exception):
                failed.extend(key for key, _ in chunk)
                causes.append(outcome)
                continue
            for (key, _), triple in zip(chunk, outcome):
                resolved[key] = triple
                self._cache.put(key, triple)
        if failed:
            failed_set = set(failed)
            indices = [i for i, key in enumerate(keys) if key in failed_set]
            raise BatchScoreError(
                f"backend failed for {len(indices)} pair(s): {causes[0]}", indices
            ) from causes[0]

        return [resolved[key] for key in keys]

    def _score_chunk(
        self, chunk: Sequence[tuple[tuple[str, str], ScoreRequestPair]]
    ) -> list[ScoreTriple] | Exception:
        # Exceptions are returned, not raised, so a parallel map can gather
        # every chunk's outcome before the caller aggregates failures.
        try:
            triples = self.backend.score_pairs([pair for _, pair in chunk])
            if len(triples) != len(chunk):
                raise ProtocolError(
                    f"backend returned {len(triples)} scores for {len(chunk)} pairs"
                )
            return [validate_triple(t, pair_index=i) for i, t in enumerate(triples)]
        except Exception as exc:  # noqa: BLE001 - gathered and re-raised by caller
            return exc
