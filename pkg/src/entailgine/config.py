"""Engine-wide configuration, loadable from a single JSON file.

Every field carries the default documented by its owning module; a config
file only needs the keys it changes. One seed drives all randomness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .aggregate import AggMode
from .cluster import ClusterMode
from .errors import ValidationError
from .gateway import GatewayConfig


@dataclass(frozen=True)
class EngineConfig:
    gateway: GatewayConfig = field(default_factory=GatewayConfig)
    t: float = 0.5
    k: int = 1
    agg_mode: AggMode = AggMode.SOFT
    cluster_mode: ClusterMode = ClusterMode.DISCREPANCY
    cluster_scope: str | None = None  # doc id, or None for all documents
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 1.0:
            raise ValidationError("decision threshold t must lie in [0, 1]")
        if self.k < 1:
            raise ValidationError("rerank depth k must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        data = dict(data)
        gateway_data = data.pop("gateway", {})
        seed = data.get("seed", 0)
        gateway = GatewayConfig(**{"seed": seed, **gateway_data})
        try:
            return cls(
                gateway=gateway,
                t=float(data.get("t", 0.5)),
                k=int(data.get("k", 1)),
                agg_mode=AggMode(data.get("agg_mode", "soft")),
                cluster_mode=ClusterMode(data.get("cluster_mode", "discrepancy")),
                cluster_scope=data.get("cluster_scope"),
                seed=int(seed),
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"invalid engine config: {exc}") from exc

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        with open(path, encoding="utf-8") as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValidationError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def with_overrides(self, **kwargs) -> "EngineConfig":
        """Copy with non-None keyword overrides applied.

        ``seed`` propagates to both the engine and its gateway config so one
        flag pins every source of randomness.
        """
        gateway_keys = {"backend", "endpoint", "mock_jitter", "batch_size",
                        "max_in_flight"}
        gw_updates = {k: v for k, v in kwargs.items() if k in gateway_keys and v is not None}
        updates = {k: v for k, v in kwargs.items()
                   if k not in gateway_keys and v is not None}
        if updates.get("seed") is not None:
            gw_updates["seed"] = updates["seed"]
        gateway = replace(self.gateway, **gw_updates) if gw_updates else self.gateway
        return replace(self, gateway=gateway, **updates)
