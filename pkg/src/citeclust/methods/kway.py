"""Multilevel balanced k-way partitioning.

Coarsening by randomized heavy-edge matching, greedy graph-growing of the
coarsest graph into exactly ``k`` parts, then projection back level by
level with boundary refinement that lowers the edge cut while keeping every
part inside a size window.
"""

from __future__ import annotations

import heapq
import math
import random

import numpy as np

from ..graph import Graph
from ..partition import Clustering, all_in_one, compact_relabel, singletons


class _Level:
    __slots__ = ("nbrs", "wts", "vw", "parent")

    def __init__(self, nbrs, wts, vw, parent=None):
        self.nbrs = nbrs
        self.wts = wts
        self.vw = vw
        # fine node -> coarse node of the next level, set when coarsened
        self.parent = parent


def size_window(n: int, k: int, balance: float) -> tuple[int, int]:
    """Allowed part sizes ``[lo, hi]`` with ``hi / lo <= balance`` when possible.

    Falls back to ``[floor(n/k), ceil(n/k)]`` when the ratio window is too
    narrow to hold the average part.
    """
    t = n / k
    lo = max(1, math.floor(t / math.sqrt(balance)))
    hi = math.floor(balance * lo)
    if hi < math.ceil(t):
        lo, hi = max(1, math.floor(t)), math.ceil(t)
    return lo, hi


def _coarsen(lv: _Level, rng: random.Random) -> _Level:
    n = len(lv.nbrs)
    match = [-1] * n
    order = list(range(n))
    rng.shuffle(order)
    coarse = [-1] * n
    k = 0
    for v in order:
        if match[v] >= 0:
            continue
        best, best_w = -1, -1.0
        for u, w in zip(lv.nbrs[v], lv.wts[v]):
            if match[u] < 0 and u != v and w > best_w:
                best, best_w = u, w
        match[v] = v
        coarse[v] = k
        if best >= 0:
            match[best] = v
            coarse[best] = k
        k += 1
    acc = [dict() for _ in range(k)]
    vw = [0] * k
    for v in range(n):
        a = coarse[v]
        vw[a] += lv.vw[v]
        row = acc[a]
        for u, w in zip(lv.nbrs[v], lv.wts[v]):
            b = coarse[u]
            if b != a:
                row[b] = row.get(b, 0) + w
    lv.parent = coarse
    return _Level([list(r) for r in acc], [list(r.values()) for r in acc], vw)


def _grow(lv: _Level, k: int, rng: random.Random) -> list[int]:
    """Grow ``k`` parts one after another from random seeds."""
    n = len(lv.nbrs)
    part = [-1] * n
    remaining_w = sum(lv.vw)
    unassigned = n
    pool = list(range(n))
    rng.shuffle(pool)
    for p in range(k - 1):
        target = remaining_w / (k - p)
        reserve = k - p - 1  # nodes that must stay for later parts
        while part[pool[-1]] >= 0:
            pool.pop()
        heap = [(0.0, rng.random(), pool[-1])]
        conn: dict[int, float] = {}
        weight = 0
        while unassigned > reserve and weight < target:
            if not heap:
                while part[pool[-1]] >= 0:
                    pool.pop()
                heap.append((0.0, rng.random(), pool[-1]))
            _, _, v = heapq.heappop(heap)
            if part[v] >= 0:
                continue
            if weight and weight + lv.vw[v] - target > target - weight:
                break
            part[v] = p
            weight += lv.vw[v]
            unassigned -= 1
            for u, w in zip(lv.nbrs[v], lv.wts[v]):
                if part[u] < 0:
                    c = conn.get(u, 0.0) + w
                    conn[u] = c
                    heapq.heappush(heap, (-c, rng.random(), u))
        remaining_w -= weight
    for v in range(n):
        if part[v] < 0:
            part[v] = k - 1
    return part


def _cut(lv: _Level, part) -> float:
    return sum(
        w for v in range(len(lv.nbrs)) for u, w in zip(lv.nbrs[v], lv.wts[v]) if part[u] != part[v]
    ) / 2


def _connections(lv: _Level, part, v) -> dict[int, float]:
    conn: dict[int, float] = {}
    for u, w in zip(lv.nbrs[v], lv.wts[v]):
        p = part[u]
        conn[p] = conn.get(p, 0.0) + w
    return conn


def _refine(lv: _Level, part, pw, lo, hi, rng, passes=8):
    """Greedy boundary moves with positive gain inside the size window.

    Zero-gain moves are taken when they shrink an oversized part.
    """
    n = len(lv.nbrs)
    order = list(range(n))
    for _ in range(passes):
        rng.shuffle(order)
        moves = 0
        for v in order:
            own = part[v]
            wv = lv.vw[v]
            if pw[own] - wv < lo:
                continue
            for u in lv.nbrs[v]:
                if part[u] != own:
                    break
            else:
                continue
            conn = _connections(lv, part, v)
            internal = conn.get(own, 0.0)
            best, best_key = own, (0.0, 0)
            for p, w in conn.items():
                if p == own or pw[p] + wv > hi:
                    continue
                gain = w - internal
                key = (gain, pw[own] - pw[p])
                if gain > 0 or (gain == 0 and pw[own] - pw[p] > wv):
                    if key > best_key or best == own:
                        best, best_key = p, key
            if best != own:
                part[v] = best
                pw[own] -= wv
                pw[best] += wv
                moves += 1
        if not moves:
            break


def _swap_pass(lv: _Level, part, rng, limit=64):
    """Kernighan-Lin style pairwise exchanges of equal-weight nodes."""
    n = len(lv.nbrs)
    improved = True
    rounds = 0
    while improved and rounds < 8:
        improved = False
        rounds += 1
        boundary: dict[tuple[int, int], list[int]] = {}
        for v in range(n):
            for p in _connections(lv, part, v):
                if p != part[v]:
                    boundary.setdefault((part[v], p), []).append(v)
        order = list(range(n))
        rng.shuffle(order)
        for v in order:
            a = part[v]
            cv = _connections(lv, part, v)
            for b, wb in cv.items():
                if b == a:
                    continue
                gv = wb - cv.get(a, 0.0)
                best_u, best_gain = -1, 0.0
                for u in boundary.get((b, a), [])[:limit]:
                    if part[u] != b or lv.vw[u] != lv.vw[v]:
                        continue
                    cu = _connections(lv, part, u)
                    w_uv = sum(w for x, w in zip(lv.nbrs[v], lv.wts[v]) if x == u)
                    gain = gv + cu.get(a, 0.0) - cu.get(b, 0.0) - 2 * w_uv
                    if gain > best_gain + 1e-12:
                        best_u, best_gain = u, gain
                if best_u >= 0:
                    part[v], part[best_u] = b, a
                    improved = True
                    break


def _balance(lv: _Level, part, pw, k, lo, hi):
    """Move unit-weight nodes until every part size lies in ``[lo, hi]``."""
    n = len(lv.nbrs)
    members = [set() for _ in range(k)]
    for v in range(n):
        members[part[v]].add(v)

    def best_move(sources, dest_ok):
        best = None
        for v in sources:
            own = part[v]
            conn = _connections(lv, part, v)
            for p, w in conn.items():
                if p != own and dest_ok(p):
                    gain = w - conn.get(own, 0.0)
                    if best is None or gain > best[0]:
                        best = (gain, v, p)
        return best

    def do_move(v, p):
        own = part[v]
        members[own].discard(v)
        members[p].add(v)
        part[v] = p
        pw[own] -= 1
        pw[p] += 1

    for _ in range(4 * n):
        big = max(range(k), key=lambda p: pw[p])
        if pw[big] <= hi:
            break
        mv = best_move(members[big], lambda p: pw[p] < hi)
        if mv is None:
            dest = min(range(k), key=lambda p: pw[p])
            v = min(members[big], key=lambda x: _connections(lv, part, x).get(big, 0.0))
            do_move(v, dest)
        else:
            do_move(mv[1], mv[2])
    for _ in range(4 * n):
        small = min(range(k), key=lambda p: pw[p])
        if pw[small] >= lo:
            break
        frontier = {u for v in members[small] for u in lv.nbrs[v] if pw[part[u]] > lo}
        mv = best_move(frontier, lambda p: p == small)
        if mv is None:
            donor = max(range(k), key=lambda p: pw[p])
            v = min(members[donor], key=lambda x: _connections(lv, part, x).get(donor, 0.0))
            do_move(v, small)
        else:
            do_move(mv[1], small)


def kway_partition(
    g: Graph,
    target_clusters: int,
    seed=None,
    balance: float = 1.3,
    coarsen_floor: int | None = None,
    tries: int = 4,
) -> Clustering:
    """Split ``g`` into exactly ``target_clusters`` parts with a small edge cut.

    Part sizes stay within :func:`size_window`; the coarsest graph has at most
    ``max(10 * k, 200)`` nodes unless matching stalls earlier.
    """
    k = int(target_clusters)
    n = g.n
    if k < 1:
        raise ValueError("target_clusters must be at least 1")
    if k > n:
        raise ValueError(f"cannot split {n} nodes into {k} clusters")
    if k == 1:
        return all_in_one(n)
    if k == n:
        return singletons(n)
    rng = random.Random(seed)
    floor = coarsen_floor if coarsen_floor is not None else max(10 * k, 200)
    lo, hi = size_window(n, k, balance)

    adj = g.adjacency_lists
    levels = [_Level(adj, [[1] * len(a) for a in adj], [1] * n)]
    while len(levels[-1].nbrs) > floor:
        nxt = _coarsen(levels[-1], rng)
        if len(nxt.nbrs) > 0.95 * len(levels[-1].nbrs):
            levels[-1].parent = None
            break
        levels.append(nxt)

    top = levels[-1]
    best_part, best_cut = None, math.inf
    for _ in range(max(1, tries)):
        part = _grow(top, k, rng)
        pw = [0] * k
        for v, p in enumerate(part):
            pw[p] += top.vw[v]
        _refine(top, part, pw, lo, hi, rng)
        cut = _cut(top, part)
        if cut < best_cut:
            best_part, best_cut = part, cut
    part = best_part

    for lv in reversed(levels[:-1]):
        part = [part[c] for c in lv.parent]
        pw = [0] * k
        for v, p in enumerate(part):
            pw[p] += lv.vw[v]
        _refine(lv, part, pw, lo, hi, rng)

    finest = levels[0]
    pw = np.bincount(part, minlength=k).tolist()
    _balance(finest, part, pw, k, lo, hi)
    _refine(finest, part, pw, lo, hi, rng)
    if hi - lo <= 1:
        # single moves are nearly always blocked by the window
        _swap_pass(finest, part, rng)
    return compact_relabel(part)
