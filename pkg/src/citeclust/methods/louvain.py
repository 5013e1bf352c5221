"""Louvain-style greedy modularity optimisation with a resolution parameter."""

from __future__ import annotations

import random

from ..graph import Graph
from ..partition import Clustering, compact_relabel, singletons
from ._levels import WeightedGraph, multilevel

_TOL = 1e-12


def _modularity_moves(resolution: float):
    def move(wg: WeightedGraph, rng: random.Random, max_passes: int):
        n = len(wg)
        nbrs, wts, degree = wg.nbrs, wg.wts, wg.degree
        two_m = wg.total
        comm = list(range(n))
        tot = list(degree)
        moved = False
        order = list(range(n))
        for _ in range(max_passes):
            rng.shuffle(order)
            moves = 0
            for v in order:
                a = comm[v]
                dv = degree[v]
                links: dict[int, float] = {}
                for u, w in zip(nbrs[v], wts[v]):
                    c = comm[u]
                    links[c] = links.get(c, 0.0) + w
                tot[a] -= dv
                scale = resolution * dv / two_m
                best = a
                best_gain = links.get(a, 0.0) - scale * tot[a]
                for c, k in links.items():
                    gain = k - scale * tot[c]
                    if gain > best_gain + _TOL:
                        best, best_gain = c, gain
                tot[best] += dv
                if best != a:
                    comm[v] = best
                    moves += 1
            if not moves:
                break
            moved = True
        return comm, moved

    return move


def louvain(g: Graph, resolution: float = 1.0, seed=None, max_passes: int = 100) -> Clustering:
    """Maximise generalised modularity ``sum_c m_c/m - resolution (d_c/2m)^2``.

    Starts from singletons; each level moves nodes in a seeded random order
    to the neighbouring community with the largest positive gain, then
    aggregates communities into weighted super-nodes.
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    if g.n == 0:
        raise ValueError("empty graph")
    if g.m == 0:
        return singletons(g.n)
    rng = random.Random(seed)
    labels = multilevel(WeightedGraph.from_graph(g), _modularity_moves(resolution), rng, max_passes)
    return compact_relabel(labels)
