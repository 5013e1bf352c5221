"""Simple undirected graphs in compressed adjacency form.

Citation data arrives as directed, possibly repeated pairs of publication
identifiers. :func:`build_simple_graph` reduces such a list to a simple
undirected unweighted graph, dropping self-citations, duplicates and
publications left without any link.
"""

from __future__ import annotations

import gzip
import math
import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "Graph",
    "DegreeStats",
    "PlantedBenchmark",
    "EdgeListParseError",
    "EmptyGraphError",
    "build_simple_graph",
    "read_edgelist",
    "write_edgelist",
    "largest_connected_component",
    "induced_subgraph",
    "rewire",
    "generate_planted_partition",
    "generate_citation_like",
]


class EdgeListParseError(ValueError):
    """Malformed line in an edge-list file."""

    def __init__(self, path, lineno: int, line: str):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: expected 'src dst', got {line.strip()!r}")


class EmptyGraphError(ValueError):
    """No edge survives cleaning."""


def _natural_key(token: str):
    return (0, int(token), "") if re.fullmatch(r"-?\d+", token) else (1, 0, token)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph.

    ``indptr``/``indices`` hold the CSR adjacency with sorted neighbor rows;
    ``ids[i]`` is the external identifier of internal node ``i``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    ids: tuple = field(default=())

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        if not self.ids:
            object.__setattr__(self, "ids", tuple(str(i) for i in range(len(self.indptr) - 1)))

    @classmethod
    def from_index_edges(cls, n: int, u, v, ids: Sequence[str] | None = None) -> "Graph":
        """Build from internal index pairs; loops and duplicates are removed."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        keep = u != v
        u, v = u[keep], v[keep]
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        if len(lo):
            key = np.unique(lo * n + hi)
            lo, hi = key // n, key % n
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst.astype(np.int64), tuple(ids) if ids is not None else ())

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.setflags(write=False)
        return d

    @cached_property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Arrays ``(u, v)`` with ``u < v``, one entry per edge, sorted."""
        src = np.repeat(np.arange(self.n), self.degrees)
        mask = src < self.indices
        return src[mask], self.indices[mask]

    @cached_property
    def adjacency_lists(self) -> list[list[int]]:
        ind = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [ind[ptr[i]:ptr[i + 1]] for i in range(self.n)]

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def to_csr(self) -> csr_matrix:
        data = np.ones(len(self.indices), dtype=np.float64)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def index_of(self, node_id) -> int:
        try:
            return self._id_index[str(node_id)]
        except KeyError:
            raise KeyError(f"unknown node id {node_id!r}") from None

    @cached_property
    def _id_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.ids)}

    def same_as(self, other: "Graph") -> bool:
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class DegreeStats:
    n: int
    m: int
    k: float
    lcc_fraction: float
    dropped_nodes: int


@dataclass(frozen=True)
class PlantedBenchmark:
    graph: Graph
    truth: "object"  # partition.Clustering
    p_in: float
    p_out: float


def degree_stats(g: Graph, dropped_nodes: int = 0) -> DegreeStats:
    lcc = largest_connected_component(g)
    return DegreeStats(g.n, g.m, 2 * g.m / g.n, len(lcc) / g.n, dropped_nodes)


def build_simple_graph(raw_edges: Iterable[tuple]) -> tuple[Graph, DegreeStats]:
    """Clean a raw citation list into a simple undirected graph.

    Directions are discarded, repeated and reciprocal citations collapse to a
    single edge, self-citations vanish, and identifiers that end up without
    any edge are dropped. Node indices follow the natural sort order of the
    identifiers, so rebuilding from the exported edge list is idempotent.
    """
    seen: set[str] = set()
    pairs = []
    for a, b in raw_edges:
        a, b = str(a), str(b)
        seen.add(a)
        seen.add(b)
        if a != b:
            pairs.append((a, b))
    if not pairs:
        raise EmptyGraphError("edge list is empty after removing self-loops")
    ids = sorted({x for p in pairs for x in p}, key=_natural_key)
    index = {s: i for i, s in enumerate(ids)}
    u = np.fromiter((index[a] for a, _ in pairs), dtype=np.int64, count=len(pairs))
    v = np.fromiter((index[b] for _, b in pairs), dtype=np.int64, count=len(pairs))
    g = Graph.from_index_edges(len(ids), u, v, ids)
    return g, degree_stats(g, dropped_nodes=len(seen) - len(ids))


def _open_text(path: Path):
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def iter_edgelist(path) -> Iterable[tuple[str, str]]:
    """Yield ``(src, dst)`` tokens; ``#`` lines and blank lines are skipped."""
    path = Path(path)
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise EdgeListParseError(path, lineno, line)
            yield parts[0], parts[1]


def read_edgelist(path) -> tuple[Graph, DegreeStats]:
    return build_simple_graph(iter_edgelist(path))


def write_edgelist(g: Graph, path) -> None:
    u, v = g.edges
    ids = g.ids
    with open(path, "w", encoding="utf-8") as fh:
        for a, b in zip(u.tolist(), v.tolist()):
            fh.write(f"{ids[a]}\t{ids[b]}\n")


def largest_connected_component(g: Graph) -> np.ndarray:
    """Sorted node indices of the largest component.

    Ties go to the component whose smallest node index is lowest.
    """
    _, labels = connected_components(g.to_csr(), directed=False)
    comps, first, sizes = np.unique(labels, return_index=True, return_counts=True)
    best = min(np.flatnonzero(sizes == sizes.max()), key=lambda c: first[c])
    return np.flatnonzero(labels == comps[best])


def induced_subgraph(g: Graph, nodes) -> tuple[Graph, np.ndarray]:
    """Subgraph on ``nodes`` keeping only internal edges.

    Nodes isolated inside the subgraph are kept. Returns the subgraph and the
    array mapping subgraph index to parent index.
    """
    if isinstance(nodes, (set, frozenset)):
        nodes = list(nodes)
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    if len(nodes) and (nodes[0] < 0 or nodes[-1] >= g.n):
        bad = nodes[0] if nodes[0] < 0 else nodes[-1]
        raise KeyError(f"unknown node index {int(bad)}")
    local = np.full(g.n, -1, dtype=np.int64)
    local[nodes] = np.arange(len(nodes))
    u, v = g.edges
    keep = (local[u] >= 0) & (local[v] >= 0)
    sub = Graph.from_index_edges(
        len(nodes), local[u[keep]], local[v[keep]], [g.ids[i] for i in nodes.tolist()]
    )
    return sub, nodes


def double_edge_swaps(g: Graph, n_swaps: int, rng: np.random.Generator, max_tries: int):
    """Perform up to ``n_swaps`` simplicity-preserving double-edge swaps.

    Returns ``(u, v, performed)`` with the rewired edge arrays.
    """
    u, v = (a.copy() for a in g.edges)
    m = len(u)
    present = set(zip(u.tolist(), v.tolist()))
    performed = tries = 0
    while performed < n_swaps and tries < max_tries and m >= 2:
        tries += 1
        i, j = rng.integers(m, size=2)
        if i == j:
            continue
        a, b = int(u[i]), int(v[i])
        c, d = (int(u[j]), int(v[j])) if rng.random() < 0.5 else (int(v[j]), int(u[j]))
        if a == d or c == b:
            continue
        e1 = (a, d) if a < d else (d, a)
        e2 = (c, b) if c < b else (b, c)
        if e1 in present or e2 in present or e1 == e2:
            continue
        present.discard((a, b) if a < b else (b, a))
        present.discard((c, d) if c < d else (d, c))
        present.add(e1)
        present.add(e2)
        u[i], v[i] = e1
        u[j], v[j] = e2
        performed += 1
    return u, v, performed


def rewire(g: Graph, alpha: float, seed=None) -> Graph:
    """Degree-preserving random rewiring of roughly ``alpha * m`` edges.

    Performs ``ceil(alpha * m / 2)`` accepted double-edge swaps
    ``(a, b), (c, d) -> (a, d), (c, b)``. Swaps that would create a loop or a
    repeated edge are rejected; after ``100`` times the target number of
    attempts the function gives up with a warning.
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    target = math.ceil(alpha * g.m / 2)
    if target == 0:
        return g
    rng = np.random.default_rng(seed)
    u, v, performed = double_edge_swaps(g, target, rng, max_tries=100 * target)
    if performed < target:
        warnings.warn(
            f"rewire: only {performed} of {target} swaps succeeded", RuntimeWarning, stacklevel=2
        )
    return Graph.from_index_edges(g.n, u, v, g.ids)


def _sample_pairs_within(size: int, p: float, rng) -> tuple[np.ndarray, np.ndarray]:
    total = size * (size - 1) // 2
    k = rng.binomial(total, p)
    if k == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    lin = np.sort(rng.choice(total, size=k, replace=False))
    i, j = np.triu_indices(size, 1)
    return i[lin].astype(np.int64), j[lin].astype(np.int64)


def generate_planted_partition(
    blocks: int, block_size: int, p_in: float, p_out: float, seed=None
) -> PlantedBenchmark:
    """Random graph with ``blocks`` equal planted communities.

    Each intra-block pair is linked with probability ``p_in`` and each
    inter-block pair with ``p_out``. Nodes left isolated are dropped from
    both the graph and the ground truth.
    """
    from .partition import compact_relabel

    if not (0 <= p_out <= 1 and 0 <= p_in <= 1):
        raise ValueError("probabilities must lie in [0, 1]")
    if p_in <= p_out:
        raise ValueError("p_in must exceed p_out")
    rng = np.random.default_rng(seed)
    n = blocks * block_size
    us, vs = [], []
    for b in range(blocks):
        i, j = _sample_pairs_within(block_size, p_in, rng)
        us.append(i + b * block_size)
        vs.append(j + b * block_size)
    inter_total = n * (n - 1) // 2 - blocks * (block_size * (block_size - 1) // 2)
    k = rng.binomial(inter_total, p_out) if inter_total else 0
    if k:
        found = np.empty(0, np.int64)
        while len(found) < k:
            a = rng.integers(n, size=2 * (k - len(found)) + 16)
            c = rng.integers(n, size=len(a))
            ok = a // block_size != c // block_size
            lo, hi = np.minimum(a[ok], c[ok]), np.maximum(a[ok], c[ok])
            merged = np.concatenate([found, lo * n + hi])
            _, first = np.unique(merged, return_index=True)
            found = merged[np.sort(first)]
        found = found[:k]
        us.append(found // n)
        vs.append(found % n)
    u = np.concatenate(us) if us else np.empty(0, np.int64)
    v = np.concatenate(vs) if vs else np.empty(0, np.int64)
    if len(u) == 0:
        raise EmptyGraphError("planted partition parameters produced no edges")
    present = np.zeros(n, dtype=bool)
    present[u] = present[v] = True
    kept = np.flatnonzero(present)
    local = np.cumsum(present) - 1
    g = Graph.from_index_edges(len(kept), local[u], local[v], [str(i) for i in kept.tolist()])
    return PlantedBenchmark(g, compact_relabel(kept // block_size), p_in, p_out)


def generate_citation_like(
    n: int,
    mean_refs: float = 5.0,
    fields: int = 200,
    locality: float = 0.9,
    seed=None,
) -> PlantedBenchmark:
    """Growing citation network with topical fields of very uneven size.

    Publications arrive one at a time. Each joins a field drawn with Pareto
    weights and cites ``Poisson(mean_refs)`` earlier publications. A
    reference stays inside the citing field with probability ``locality``,
    where half of the time it copies the target of an earlier in-field
    citation (cumulative advantage) and otherwise picks an in-field
    publication uniformly. Remaining references go to any earlier
    publication. Publications without links are dropped. ``truth`` holds the field labels; ``p_in``/``p_out`` are NaN.
    """
    from .partition import compact_relabel

    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 <= locality <= 1:
        raise ValueError("locality must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    weights = rng.pareto(1.2, size=fields) + 1.0
    field_of = rng.choice(fields, size=n, p=weights / weights.sum())
    refs = rng.poisson(mean_refs, size=n)
    coin = rng.random(int(refs.sum()) * 3 + 1)
    members: list[list[int]] = [[] for _ in range(fields)]
    cited: list[list[int]] = [[] for _ in range(fields)]
    u, v = [], []
    pos = 0
    for i in range(n):
        f = int(field_of[i])
        for _ in range(min(int(refs[i]), i)):
            a, b, c = coin[pos], coin[pos + 1], coin[pos + 2]
            pos += 3
            if a < locality and members[f]:
                pool = cited[f] if b < 0.5 and cited[f] else members[f]
                j = pool[int(c * len(pool))]
            else:
                j = int(c * i)
            u.append(i)
            v.append(j)
            cited[int(field_of[j])].append(j)
        members[f].append(i)
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if len(u) == 0:
        raise EmptyGraphError("parameters produced no citations")
    present = np.zeros(n, dtype=bool)
    present[u] = present[v] = True
    kept = np.flatnonzero(present)
    local = np.cumsum(present) - 1
    g = Graph.from_index_edges(len(kept), local[u], local[v], [str(i) for i in kept.tolist()])
    return PlantedBenchmark(g, compact_relabel(field_of[kept]), math.nan, math.nan)
