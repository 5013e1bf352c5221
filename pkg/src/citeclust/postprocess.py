"""Post-processing: split giant clusters, then absorb tiny ones."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .hybrid import derive_seed, refine_by_likelihood
from .metrics import LikelihoodTracker, intra_edge_counts
from .methods import MethodConfig, run_method
from .partition import Clustering, compact_relabel

__all__ = ["PostprocessConfig", "MergeDecision", "split_giants", "merge_tiny", "postprocess"]


@dataclass(frozen=True)
class PostprocessConfig:
    method: MethodConfig
    s_tiny: int = 15
    s_giant: int = 10**4
    seed: int = 0

    def __post_init__(self):
        if not self.s_tiny < self.s_giant:
            raise ValueError("s_tiny must be smaller than s_giant")


@dataclass(frozen=True)
class MergeDecision:
    cluster: int
    into: int | None
    log_l_after: float


def split_giants(g: Graph, c: Clustering, cfg: PostprocessConfig, trace: list | None = None) -> Clustering:
    """Re-cluster every cluster above ``s_giant`` with ``cfg.method``.

    A split replaces its cluster only when the log-likelihood strictly
    rises. Children that are still giant are not split again.
    """
    targets = np.flatnonzero(c.sizes > cfg.s_giant)

    def split(sub: Graph, i: int) -> Clustering:
        return run_method(sub, cfg.method.with_seed(derive_seed(cfg.seed, i)))

    return refine_by_likelihood(g, c, targets, split, trace)


def _cluster_links(g: Graph, c: Clustering) -> list[dict[int, int]]:
    u, v = g.edges
    a, b = c.labels[u], c.labels[v]
    cross = a != b
    a, b = a[cross], b[cross]
    k = c.cluster_count
    keys, counts = np.unique(np.concatenate([a * k + b, b * k + a]), return_counts=True)
    links = [dict() for _ in range(k)]
    for key, w in zip(keys.tolist(), counts.tolist()):
        links[key // k][key % k] = w
    return links


def merge_tiny(g: Graph, c: Clustering, cfg: PostprocessConfig, trace: list | None = None) -> Clustering:
    """Merge each cluster smaller than ``s_tiny`` into a linked cluster.

    Tiny clusters are visited in a seeded random order. Each one joins the
    adjacent cluster giving the highest log-likelihood after the merge, even
    if that is lower than before; ties go to the smallest cluster id. A
    cluster that has reached ``s_tiny`` by absorbing others is skipped, and
    a cluster without inter-cluster edges stays as it is.
    """
    sizes = c.sizes.tolist()
    tiny = [i for i, s in enumerate(sizes) if s < cfg.s_tiny]
    if not tiny:
        return c
    m_in = intra_edge_counts(g, c).tolist()
    links = _cluster_links(g, c)
    tracker = LikelihoodTracker(g, c)
    merged_into = list(range(c.cluster_count))
    random.Random(cfg.seed).shuffle(tiny)
    for t in tiny:
        if merged_into[t] != t or sizes[t] >= cfg.s_tiny:
            continue
        if not links[t]:
            if trace is not None:
                trace.append(MergeDecision(t, None, tracker.value))
            continue
        old_t = (m_in[t], sizes[t])
        best, best_val = None, None
        for b in sorted(links[t]):
            new = (m_in[t] + m_in[b] + links[t][b], sizes[t] + sizes[b])
            val = tracker.value_after([old_t, (m_in[b], sizes[b])], [new])
            if best_val is None or val > best_val:
                best, best_val = b, val
        b = best
        w_tb = links[t].pop(b)
        links[b].pop(t)
        tracker.apply([old_t, (m_in[b], sizes[b])], [(m_in[t] + m_in[b] + w_tb, sizes[t] + sizes[b])])
        m_in[b] += m_in[t] + w_tb
        sizes[b] += sizes[t]
        for x, w in links[t].items():
            links[x].pop(t)
            links[x][b] = links[x].get(b, 0) + w
            links[b][x] = links[b].get(x, 0) + w
        links[t] = {}
        merged_into[t] = b
        if trace is not None:
            trace.append(MergeDecision(t, b, tracker.value))

    def root(i):
        while merged_into[i] != i:
            i = merged_into[i]
        return i

    final = np.array([root(i) for i in range(c.cluster_count)], dtype=np.int64)
    return compact_relabel(final[c.labels])


def postprocess(g: Graph, c: Clustering, cfg: PostprocessConfig, trace: list | None = None) -> Clustering:
    """:func:`split_giants` followed by :func:`merge_tiny`."""
    return merge_tiny(g, split_giants(g, c, cfg, trace), cfg, trace)
