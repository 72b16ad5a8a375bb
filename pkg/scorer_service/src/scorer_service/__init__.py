"""Reference sentence-pair entailment scoring microservice."""

from .app import create_app
from .config import CANONICAL_LABELS, DEFAULT_TEMPLATE, ServiceConfig
from .model import (
    HeuristicModel,
    Model,
    ModelError,
    TransformersModel,
    build_model,
    format_input,
    softmax3,
)

__version__ = "0.1.0"

__all__ = [
    "CANONICAL_LABELS",
    "DEFAULT_TEMPLATE",
    "HeuristicModel",
    "Model",
    "ModelError",
    "ServiceConfig",
    "TransformersModel",
    "build_model",
    "create_app",
    "format_input",
    "softmax3",
]
