"""Clustering algorithms and their configuration."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..graph import Graph
from ..partition import Clustering
from .kway import kway_partition, size_window
from .louvain import louvain
from .lpa import label_propagation
from .mapequation import infomap_two_level, map_equation

__all__ = [
    "ALGORITHMS",
    "MethodConfig",
    "run_method",
    "default_cluster_count",
    "louvain",
    "infomap_two_level",
    "map_equation",
    "label_propagation",
    "kway_partition",
    "size_window",
]

ALGORITHMS = ("louvain", "mapeq", "lpa", "kway")


def default_cluster_count(n: int, variant: str | None = None) -> int:
    """``n // 15`` for the S variant and ``n // 50`` for L, never below 1.

    Without an explicit variant, S is used below a million nodes and L above.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if variant is None:
        variant = "S" if n < 10**6 else "L"
    divisor = {"S": 15, "L": 50}.get(variant.upper())
    if divisor is None:
        raise ValueError(f"variant must be 'S' or 'L', got {variant!r}")
    return max(1, n // divisor)


@dataclass(frozen=True)
class MethodConfig:
    algorithm: str
    seed: int = 0
    resolution: float = 1.0
    target_clusters: int | None = None
    variant: str | None = None
    max_passes: int = 100
    balance: float = 1.3

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if not self.resolution > 0:
            raise ValueError("resolution must be positive")
        if self.target_clusters is not None:
            if self.algorithm != "kway":
                raise ValueError("target_clusters only applies to kway")
            if self.target_clusters < 1:
                raise ValueError("target_clusters must be at least 1")
        if self.variant is not None and self.algorithm != "kway":
            raise ValueError("variant only applies to kway")
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")

    def with_seed(self, seed: int) -> "MethodConfig":
        return replace(self, seed=seed)

    def clusters_for(self, n: int) -> int:
        if self.target_clusters is not None:
            return min(self.target_clusters, n)
        return default_cluster_count(n, self.variant)


def run_method(g: Graph, cfg: MethodConfig) -> Clustering:
    if cfg.algorithm == "louvain":
        return louvain(g, cfg.resolution, cfg.seed, cfg.max_passes)
    if cfg.algorithm == "mapeq":
        return infomap_two_level(g, cfg.seed, cfg.max_passes)
    if cfg.algorithm == "lpa":
        return label_propagation(g, cfg.seed, cfg.max_passes)
    return kway_partition(g, cfg.clusters_for(g.n), cfg.seed, balance=cfg.balance)

