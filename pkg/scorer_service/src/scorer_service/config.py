"""Service configuration."""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_TEMPLATE = "entailment: {hypothesis} [SEP] {premise}"

CANONICAL_LABELS = ("e", "n", "c")


@dataclass(frozen=True)
class ServiceConfig:
    """Which model to serve and how.

    ``label_order`` declares the class order of the model's raw output so the
    response can map positions onto the canonical (e, n, c) keys explicitly.
    A silent label-order mismatch is the classic failure mode for NLI
    services; making the map part of the config keeps it visible.
    """

    model: str = "lexical-overlap-heuristic"
    device: str = "cpu"
    max_batch: int = 128
    port: int = 8000
    template: str = DEFAULT_TEMPLATE
    label_order: tuple[str, str, str] = CANONICAL_LABELS

    def __post_init__(self) -> None:
        if self.max_batch < 1:
            raise ValueError(f"max_batch must be >= 1, got {self.max_batch}")
        if not 0 < self.port < 65536:
            raise ValueError(f"port must lie in (0, 65536), got {self.port}")
        if sorted(self.label_order) != sorted(CANONICAL_LABELS):
            raise ValueError(
                f"label_order must be a permutation of {CANONICAL_LABELS}, "
                f"got {self.label_order}"
            )
        for field in ("hypothesis", "premise"):
            if "{" + field + "}" not in self.template:
                raise ValueError(f"template must contain a {{{field}}} placeholder")
