"""Scoring models behind the service.

Two backends share one tiny protocol: given (hypothesis, premise) pairs,
return one raw score triple per pair in the model's own label order. The
service softmaxes and remaps to canonical keys, so models are free to emit
logits in whatever order their head was trained with.

The default is a deterministic lexical-overlap heuristic. It is not a
substitute for a trained entailment model, but it is self-contained, needs
no downloads, and behaves sensibly on the easy cases: a premise covering
every hypothesis word entails it, a near-identical sentence with words
swapped out contradicts it, and anything else is neutral. A transformers
backend is wired up for real checkpoints where that stack is available.
"""

from __future__ import annotations

import math
from typing import Protocol, Sequence

from .config import ServiceConfig

RawTriple = tuple[float, float, float]

_STRIP = ".,;:!?\"'()"


class ModelError(RuntimeError):
    """The underlying model could not be loaded or could not score."""


class Model(Protocol):
    name: str

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[RawTriple]:
        """Raw class scores per pair, in the model's own label order."""
        ...


def format_input(template: str, hypothesis: str, premise: str) -> str:
    """Render the single-string model input for template-driven backends."""
    return template.format(hypothesis=hypothesis, premise=premise)


def softmax3(scores: RawTriple) -> RawTriple:
    """Numerically stable three-way softmax."""
    m = max(scores)
    exps = [math.exp(s - m) for s in scores]
    total = sum(exps)
    return (exps[0] / total, exps[1] / total, exps[2] / total)


def _tokens(text: str) -> frozenset[str]:
    words = (w.strip(_STRIP).lower() for w in text.split())
    return frozenset(w for w in words if w)


class HeuristicModel:
    """Deterministic lexical-overlap scorer emitting (e, n, c)-ordered logits.

    Coverage is the fraction of hypothesis words found in the premise. Full
    coverage reads as entailment; high-but-partial coverage with words
    substituted on both sides reads as contradiction; everything else is
    neutral, with the non-neutral logits nudged up by whatever overlap
    exists. Scores are a pure function of the token sets, so identical
    requests produce identical responses.
    """

    name = "lexical-overlap-heuristic"

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[RawTriple]:
        return [self._logits(h, p) for h, p in pairs]

    def _logits(self, hypothesis: str, premise: str) -> RawTriple:
        h, p = _tokens(hypothesis), _tokens(premise)
        if not h or not p:
            return (-1.0, 2.0, -1.0)
        coverage = len(h & p) / len(h)
        if coverage == 1.0:
            return (2.0 + 2.0 * coverage, 0.0, -2.0)
        if coverage >= 0.5 and (h - p) and (p - h):
            return (-2.0, 0.0, 2.0 + 2.0 * coverage)
        return (coverage, 2.0, coverage)


class TransformersModel:
    """Adapter for a sequence-classification checkpoint via transformers.

    Inputs are rendered through the configured template before tokenization,
    matching the single-string form the engine's gateway produces. Inference
    runs in eval mode with gradients disabled, so repeated requests score
    identically.
    """

    def __init__(self, cfg: ServiceConfig):
        try:
            import torch
            from transformers import AutoModelForSequenceClassification, AutoTokenizer
        except ImportError as exc:
            raise ModelError(
                f"transformers backend requested for {cfg.model!r} but the "
                f"transformers/torch stack is not installed: {exc}"
            ) from exc
        self.name = cfg.model
        self.template = cfg.template
        self._torch = torch
        self._tokenizer = AutoTokenizer.from_pretrained(cfg.model)
        self._model = AutoModelForSequenceClassification.from_pretrained(cfg.model)
        self._model.to(cfg.device)
        self._model.eval()
        self._device = cfg.device

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[RawTriple]:
        texts = [format_input(self.template, h, p) for h, p in pairs]
        encoded = self._tokenizer(
            texts, padding=True, truncation=True, return_tensors="pt"
        ).to(self._device)
        with self._torch.no_grad():
            logits = self._model(**encoded).logits
        if logits.shape[-1] != 3:
            raise ModelError(
                f"model {self.name!r} emits {logits.shape[-1]} classes, expected 3"
            )
        return [tuple(row) for row in logits.cpu().tolist()]


def build_model(cfg: ServiceConfig) -> Model:
    """The model named by the config: the heuristic, or a checkpoint id."""
    if cfg.model == HeuristicModel.name:
        return HeuristicModel()
    return TransformersModel(cfg)
