"""Long-document and multi-document inference on top of a sentence-pair
NLI scorer.

The engine never touches model weights directly: it formats inputs,
batches them through a scorer gateway (mock, table, or remote HTTP
backend), and reduces span-level score triples into document verdicts and
cluster-level discrepancy rankings.
"""

from .aggregate import (
    AggMode,
    BinaryKind,
    BinaryLabel,
    BinaryMethod,
    HypAggregation,
    aggregate_hypothesis,
    balanced_binary_decide,
    binary_decide,
    threshold_grid,
    tune_threshold,
)
from .cluster import (
    Alignment,
    ClusterMode,
    ClusterRanking,
    RankedSpan,
    rank_cluster,
    reference_rank,
)
from .config import EngineConfig
from .core import (
    Cluster,
    Document,
    Label,
    RawScores,
    ScoreTriple,
    Span,
    normalize_scores,
    validate_triple,
)
from .corruption import (
    CorruptionInstance,
    EditPair,
    apply_corruption,
    build_corpus,
    jaccard,
    match_edit,
    revert_corruption,
    tokenize,
)
from .docinfer import (
    DocVerdict,
    LabelMaxima,
    RerankConfig,
    RetrievalRankings,
    SpanScores,
    build_rerank_premises,
    rank_for_retrieval,
    retrieve_and_predict,
    retrieve_and_rerank,
    score_spans,
)
from .errors import (
    BackendError,
    BatchScoreError,
    EngineError,
    MetricError,
    ProtocolError,
    TuningError,
    ValidationError,
)
from .gateway import (
    GatewayConfig,
    MockBackend,
    RemoteBackend,
    ScoreRequestPair,
    ScorerGateway,
    format_input,
    make_backend,
    mock_score,
)
from .metrics import (
    RankedInstance,
    accuracy_at_k,
    balanced_accuracy,
    f1_class,
    precision_at_recall,
)
from .segment import (
    SegmenterConfig,
    ingest_presegmented,
    make_cluster,
    segment,
    segment_document,
)

__version__ = "0.1.0"

__all__ = [
    "AggMode",
    "Alignment",
    "BackendError",
    "BatchScoreError",
    "BinaryKind",
    "BinaryLabel",
    "BinaryMethod",
    "Cluster",
    "ClusterMode",
    "ClusterRanking",
    "CorruptionInstance",
    "DocVerdict",
    "Document",
    "EditPair",
    "EngineConfig",
    "EngineError",
    "GatewayConfig",
    "HypAggregation",
    "Label",
    "LabelMaxima",
    "MetricError",
    "MockBackend",
    "ProtocolError",
    "RankedInstance",
    "RankedSpan",
    "RawScores",
    "RemoteBackend",
    "RerankConfig",
    "RetrievalRankings",
    "ScoreRequestPair",
    "ScoreTriple",
    "ScorerGateway",
    "SegmenterConfig",
    "Span",
    "SpanScores",
    "TuningError",
    "ValidationError",
    "accuracy_at_k",
    "aggregate_hypothesis",
    "apply_corruption",
    "balanced_accuracy",
    "balanced_binary_decide",
    "binary_decide",
    "build_corpus",
    "build_rerank_premises",
    "f1_class",
    "format_input",
    "ingest_presegmented",
    "jaccard",
    "make_backend",
    "make_cluster",
    "match_edit",
    "mock_score",
    "normalize_scores",
    "precision_at_recall",
    "rank_cluster",
    "rank_for_retrieval",
    "reference_rank",
    "retrieve_and_predict",
    "retrieve_and_rerank",
    "revert_corruption",
    "score_spans",
    "segment",
    "segment_document",
    "threshold_grid",
    "tokenize",
    "tune_threshold",
    "validate_triple",
]
