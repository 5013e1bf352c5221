"""Asynchronous label propagation."""

from __future__ import annotations

import random

from ..graph import Graph
from ..partition import Clustering, compact_relabel


def _neighbour_maxima(adj_v, labels):
    counts: dict[int, int] = {}
    for u in adj_v:
        lab = labels[u]
        counts[lab] = counts.get(lab, 0) + 1
    top = max(counts.values())
    return [lab for lab, k in counts.items() if k == top]


def _stable(adj, labels) -> bool:
    for v, nb in enumerate(adj):
        if nb and labels[v] not in _neighbour_maxima(nb, labels):
            return False
    return True


def label_propagation(g: Graph, seed=None, max_passes: int = 100) -> Clustering:
    """Label propagation with asynchronous updates in random order.

    Every node starts with its own label and repeatedly adopts the most
    frequent label among its neighbours, breaking ties uniformly at random.
    Stops once each node carries one of its neighbourhood's most frequent
    labels, or after ``max_passes`` sweeps.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    rng = random.Random(seed)
    adj = g.adjacency_lists
    labels = list(range(g.n))
    order = [v for v in range(g.n) if adj[v]]
    for _ in range(max_passes):
        rng.shuffle(order)
        for v in order:
            nb = adj[v]
            if len(nb) == 1:
                labels[v] = labels[nb[0]]
                continue
            best = _neighbour_maxima(nb, labels)
            labels[v] = best[0] if len(best) == 1 else rng.choice(best)
        if _stable(adj, labels):
            break
    return compact_relabel(labels)
