import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from citeclust.graph import Graph  # noqa: E402
from oracles import BARBELL  # noqa: E402


def graph_from_pairs(n, pairs):
    pairs = list(pairs)
    u = [a for a, _ in pairs]
    v = [b for _, b in pairs]
    return Graph.from_index_edges(n, u, v)


def clique_pairs(nodes):
    nodes = list(nodes)
    return [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]]


def disjoint_cliques(count, size):
    pairs = []
    for b in range(count):
        pairs += clique_pairs(range(b * size, (b + 1) * size))
    return graph_from_pairs(count * size, pairs)


def random_graph(rng, n, p):
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph.from_index_edges(n, iu[keep], ju[keep])


def random_connected_graph(rng, n, p):
    """Random tree plus extra edges, so the graph is always connected."""
    perm = rng.permutation(n)
    pairs = [(int(perm[i]), int(perm[rng.integers(i)])) for i in range(1, n)]
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    pairs += list(zip(iu[keep].tolist(), ju[keep].tolist()))
    return graph_from_pairs(n, pairs)


@pytest.fixture
def barbell():
    return graph_from_pairs(6, BARBELL)


@pytest.fixture
def path10():
    return graph_from_pairs(10, [(i, i + 1) for i in range(9)])


@pytest.fixture
def four_cliques():
    return disjoint_cliques(4, 10)


@pytest.fixture
def star5():
    return graph_from_pairs(6, [(0, i) for i in range(1, 6)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
