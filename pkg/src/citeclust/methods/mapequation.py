"""Two-level map equation and its greedy minimisation.

Flow follows the stationary distribution of an unrecorded random walk on
the undirected graph: node ``v`` is visited with rate ``k_v / 2m`` and a
module is exited at rate ``cut / 2m``. No teleportation is used.
"""

from __future__ import annotations

import math
import random

import numpy as np

from ..graph import Graph
from ..metrics import intra_edge_counts
from ..partition import Clustering, compact_relabel, singletons
from ._levels import WeightedGraph, multilevel

_TOL = 1e-12


def _plogp(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def _plogp_arr(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def map_equation(g: Graph, c: Clustering) -> float:
    """Description length in bits of a random walk under the two-level code.

    ``L = q H(Q) + sum_i p_i H(P_i)`` written in the expanded form
    ``plogp(q) - 2 sum plogp(q_i) - sum plogp(p_v) + sum plogp(q_i + p_i)``.
    """
    if g.n != c.n:
        raise ValueError(f"graph has {g.n} nodes but clustering covers {c.n}")
    if g.m == 0:
        return 0.0
    two_m = 2.0 * g.m
    p = g.degrees / two_m
    flow = np.bincount(c.labels, weights=g.degrees, minlength=c.cluster_count)
    cut = flow - 2 * intra_edge_counts(g, c)
    q_i = cut / two_m
    p_i = flow / two_m
    value = (
        _plogp(float(q_i.sum()))
        - 2 * _plogp_arr(q_i).sum()
        - _plogp_arr(p).sum()
        + _plogp_arr(q_i + p_i).sum()
    )
    return float(max(value, 0.0))


def _map_moves(wg: WeightedGraph, rng: random.Random, max_passes: int):
    n = len(wg)
    nbrs, wts, degree, self_w = wg.nbrs, wg.wts, wg.degree, wg.self_w
    two_m = wg.total
    p = [d / two_m for d in degree]
    node_exit = [(d - 2 * s) / two_m for d, s in zip(degree, self_w)]
    comm = list(range(n))
    exit_ = list(node_exit)
    flow = list(p)
    size = [1] * n
    empty: list[int] = []
    q = sum(exit_)
    plogp = _plogp
    moved = False
    order = list(range(n))
    for _ in range(max_passes):
        rng.shuffle(order)
        moves = 0
        for v in order:
            a = comm[v]
            links: dict[int, float] = {}
            for u, w in zip(nbrs[v], wts[v]):
                c = comm[u]
                links[c] = links.get(c, 0.0) + w
            if not links:
                continue
            pv, ev = p[v], node_exit[v]
            ea, fa = exit_[a], flow[a]
            ea_new = max(ea - ev + 2 * links.get(a, 0.0) / two_m, 0.0)
            fa_new = fa - pv
            base_a = -2 * (plogp(ea_new) - plogp(ea)) + plogp(ea_new + fa_new) - plogp(ea + fa)
            q_wo = q - ea + ea_new
            plogp_q = plogp(q)
            candidates = [c for c in links if c != a]
            if size[a] > 1 and empty:
                candidates.append(empty[-1])
            best, best_delta, best_eb = a, -_TOL, 0.0
            for b in candidates:
                eb, fb = exit_[b], flow[b]
                eb_new = max(eb + ev - 2 * links.get(b, 0.0) / two_m, 0.0)
                fb_new = fb + pv
                delta = (
                    plogp(q_wo - eb + eb_new) - plogp_q
                    + base_a
                    - 2 * (plogp(eb_new) - plogp(eb))
                    + plogp(eb_new + fb_new) - plogp(eb + fb)
                )
                if delta < best_delta:
                    best, best_delta, best_eb = b, delta, eb_new
            if best == a:
                continue
            b = best
            if size[b] == 0:
                empty.pop()
            q = q - ea + ea_new - exit_[b] + best_eb
            exit_[a], flow[a] = ea_new, fa_new
            exit_[b], flow[b] = best_eb, flow[b] + pv
            size[a] -= 1
            size[b] += 1
            if size[a] == 0:
                exit_[a] = flow[a] = 0.0
                empty.append(a)
            comm[v] = b
            moves += 1
        if not moves:
            break
        moved = True
    return comm, moved


def infomap_two_level(g: Graph, seed=None, max_passes: int = 100) -> Clustering:
    """Minimise the two-level map equation by local moving and aggregation."""
    if g.n == 0:
        raise ValueError("empty graph")
    if g.m == 0:
        return singletons(g.n)
    rng = random.Random(seed)
    labels = multilevel(WeightedGraph.from_graph(g), _map_moves, rng, max_passes)
    return compact_relabel(labels)
