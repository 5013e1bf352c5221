"""Brute-force reference implementations used as test oracles.

Everything here is written from the textbook definitions with plain Python
loops and shares no code with the package under test.
"""

from __future__ import annotations

import math
from itertools import combinations


def set_partitions(n: int):
    """All partitions of ``range(n)`` as restricted growth strings."""
    labels = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(labels)
            return
        for c in range(top + 2):
            labels[i] = c
            yield from rec(i + 1, max(top, c))

    if n == 0:
        yield ()
        return
    yield from rec(1, 0)


def edge_set(edges):
    return {(min(a, b), max(a, b)) for a, b in edges if a != b}


def adjacency(n, edges):
    A = [[0] * n for _ in range(n)]
    for a, b in edge_set(edges):
        A[a][b] = A[b][a] = 1
    return A


def modularity_pairwise(n, edges, labels, gamma=1.0):
    A = adjacency(n, edges)
    k = [sum(r) for r in A]
    two_m = sum(k)
    total = 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] == labels[j]:
                total += A[i][j] - gamma * k[i] * k[j] / two_m
    return total / two_m


def log_likelihood_direct(n, edges, labels):
    """Log of the product form with ``0**0 = 1``."""
    es = edge_set(edges)
    groups = {}
    for v, c in enumerate(labels):
        groups.setdefault(c, []).append(v)
    logl = 0.0
    m_in_total = 0
    M_in_total = 0
    for members in groups.values():
        s = len(members)
        M = s * (s - 1) // 2
        m = sum(1 for a, b in combinations(sorted(members), 2) if (a, b) in es)
        m_in_total += m
        M_in_total += M
        logl += _log_bern(m, M)
    m_t = len(es) - m_in_total
    M_t = n * (n - 1) // 2 - M_in_total
    return logl + _log_bern(m_t, M_t)


def _log_bern(m, M):
    if M == 0:
        return 0.0
    theta = m / M
    out = 0.0
    if m > 0:
        out += m * math.log(theta)
    if M - m > 0:
        out += (M - m) * math.log(1 - theta)
    return out


def map_equation_entropy(n, edges, labels):
    """Two-level map equation as ``q H(Q) + sum_i p_i H(P_i)`` in bits."""
    A = adjacency(n, edges)
    k = [sum(r) for r in A]
    two_m = sum(k)
    p = [x / two_m for x in k]
    groups = {}
    for v, c in enumerate(labels):
        groups.setdefault(c, []).append(v)
    exits = {}
    for c, members in groups.items():
        cut = sum(A[a][b] for a in members for b in range(n) if labels[b] != c)
        exits[c] = cut / two_m
    q = sum(exits.values())

    def H(ws):
        tot = sum(ws)
        return -sum(w / tot * math.log2(w / tot) for w in ws if w > 0) if tot > 0 else 0.0

    L = q * H(list(exits.values())) if q > 0 else 0.0
    for c, members in groups.items():
        within = [exits[c]] + [p[v] for v in members]
        L += sum(within) * H(within)
    return L


def components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups = {}
    for v in range(n):
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def vi_direct(x, y):
    """Variation of information from explicit set intersections (nats)."""
    n = len(x)
    cx = {}
    cy = {}
    for i, (a, b) in enumerate(zip(x, y)):
        cx.setdefault(a, set()).add(i)
        cy.setdefault(b, set()).add(i)
    v = 0.0
    for A in cx.values():
        for B in cy.values():
            r = len(A & B)
            if r:
                v -= r / n * (math.log(r / len(A)) + math.log(r / len(B)))
    return v


def same_partition(x, y):
    return canonical(x) == canonical(y)


def canonical(labels):
    seen = {}
    return tuple(seen.setdefault(c, len(seen)) for c in labels)


BARBELL = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]
TRIANGLES = (0, 0, 0, 1, 1, 1)
