"""Weighted multigraph and the local-moving/aggregation loop.

Both modularity optimisation and map-equation minimisation run the same
control loop: move single nodes between modules until no move improves the
objective, collapse modules into super-nodes, repeat. Only the move rule
differs.
"""

from __future__ import annotations

import random
from typing import Callable

import numpy as np

from ..graph import Graph


class WeightedGraph:
    """Adjacency lists with edge weights and per-node self-loop weight.

    ``degree[v]`` counts a self-loop twice, so ``sum(degree)`` is ``2m``.
    """

    __slots__ = ("nbrs", "wts", "self_w", "degree", "total")

    def __init__(self, nbrs, wts, self_w):
        self.nbrs = nbrs
        self.wts = wts
        self.self_w = self_w
        self.degree = [sum(w) + 2 * s for w, s in zip(wts, self_w)]
        self.total = sum(self.degree)

    @classmethod
    def from_graph(cls, g: Graph) -> "WeightedGraph":
        adj = g.adjacency_lists
        return cls(adj, [[1.0] * len(a) for a in adj], [0.0] * g.n)

    def __len__(self):
        return len(self.nbrs)

    def aggregate(self, comm: list[int], k: int) -> "WeightedGraph":
        """Collapse nodes sharing a label in ``comm`` (labels ``0..k-1``)."""
        acc = [dict() for _ in range(k)]
        self_w = [0.0] * k
        for v, (nb, ws) in enumerate(zip(self.nbrs, self.wts)):
            a = comm[v]
            self_w[a] += self.self_w[v]
            row = acc[a]
            for u, w in zip(nb, ws):
                b = comm[u]
                if a == b:
                    self_w[a] += 0.5 * w
                else:
                    row[b] = row.get(b, 0.0) + w
        return WeightedGraph(
            [list(r.keys()) for r in acc], [list(r.values()) for r in acc], self_w
        )


def relabel_dense(comm: list[int]) -> tuple[list[int], int]:
    ids: dict[int, int] = {}
    out = [ids.setdefault(c, len(ids)) for c in comm]
    return out, len(ids)


MoveRule = Callable[[WeightedGraph, random.Random, int], "tuple[list[int], bool]"]


def multilevel(wg: WeightedGraph, move: MoveRule, rng: random.Random, max_passes: int) -> np.ndarray:
    """Run ``move`` then aggregate until a level produces no move.

    Returns the flattened labels of the original nodes.
    """
    assign = list(range(len(wg)))
    for _ in range(max_passes):
        comm, moved = move(wg, rng, max_passes)
        if not moved:
            break
        comm, k = relabel_dense(comm)
        assign = [comm[x] for x in assign]
        if k == len(wg):
            break
        wg = wg.aggregate(comm, k)
    return np.asarray(assign, dtype=np.int64)
