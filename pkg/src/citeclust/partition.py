"""Partitions of graph nodes into clusters."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from .graph import Graph, _natural_key

__all__ = [
    "Clustering",
    "ContingencyTable",
    "ClusteringMismatchError",
    "compact_relabel",
    "cluster_sizes",
    "flatten_overlaps",
    "contingency",
    "singletons",
    "all_in_one",
    "read_clustering",
    "write_clustering",
]


class ClusteringMismatchError(ValueError):
    """Clustering does not cover the same node set as the graph or peer clustering."""


@dataclass(frozen=True, eq=False)
class Clustering:
    """Hard partition stored as dense 0-based labels.

    Build instances through :func:`compact_relabel`; label ``j`` is then the
    ``j``-th cluster by first appearance and every cluster is non-empty.
    """

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or (len(labels) and labels.dtype.kind not in "iu"):
            raise ValueError("labels must be a one-dimensional integer array")
        labels = labels.astype(np.int64, copy=False)
        if len(labels) and (labels.min() < 0 or np.any(np.bincount(labels) == 0)):
            raise ValueError("labels must use every id in 0..K-1; use compact_relabel")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.cluster_count)

    @cached_property
    def cluster_count(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def members(self) -> list[np.ndarray]:
        """Node indices of each cluster, in cluster-id order."""
        order = np.argsort(self.labels, kind="stable")
        return np.split(order, np.cumsum(self.sizes)[:-1])

    def same_partition(self, other: "Clustering") -> bool:
        """Equality up to relabeling."""
        return np.array_equal(compact_relabel(self.labels).labels, compact_relabel(other.labels).labels)

    def __eq__(self, other):
        return isinstance(other, Clustering) and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())

    def __repr__(self):
        return f"Clustering(n={self.n}, clusters={self.cluster_count})"


def compact_relabel(raw_labels, n: int | None = None) -> Clustering:
    """Map arbitrary integer labels to ``0..K-1`` by order of first appearance."""
    raw = np.asarray(raw_labels)
    if raw.ndim != 1:
        raise ValueError("labels must be one-dimensional")
    if n is not None and len(raw) != n:
        raise ClusteringMismatchError(f"expected {n} labels, got {len(raw)}")
    if len(raw) == 0:
        return Clustering(np.empty(0, dtype=np.int64))
    _, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return Clustering(rank[inverse.ravel()])


def singletons(n: int) -> Clustering:
    return Clustering(np.arange(n, dtype=np.int64))


def all_in_one(n: int) -> Clustering:
    return Clustering(np.zeros(n, dtype=np.int64))


def cluster_sizes(c: Clustering, descending: bool = False) -> np.ndarray:
    s = c.sizes.copy()
    if descending:
        s[::-1].sort()
    return s


def flatten_overlaps(cover: Sequence[Iterable[int]], n: int) -> Clustering:
    """Turn an ordered cover into a partition.

    A node belonging to several sets goes to the first set listing it; sets
    that end up empty disappear.
    """
    labels = np.full(n, -1, dtype=np.int64)
    for j, members in enumerate(cover):
        idx = np.fromiter(members, dtype=np.int64)
        if len(idx) and (idx.min() < 0 or idx.max() >= n):
            raise ValueError(f"cover set {j} references a node outside 0..{n - 1}")
        idx = idx[labels[idx] < 0]
        labels[idx] = j
    missing = np.flatnonzero(labels < 0)
    if len(missing):
        raise ValueError(f"node {int(missing[0])} is not covered by any set")
    return compact_relabel(labels)


@dataclass(frozen=True)
class ContingencyTable:
    """``counts[i, j] = |C_i & D_j|`` as a sparse matrix."""

    counts: csr_matrix
    row_sums: np.ndarray
    col_sums: np.ndarray

    @property
    def n(self) -> int:
        return int(self.row_sums.sum())

    def to_dense(self) -> np.ndarray:
        return self.counts.toarray()

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.counts.T.tocsr(), self.col_sums, self.row_sums)

    def write_csv(self, path) -> None:
        """Non-zero cells as ``row_cluster,col_cluster,count`` rows."""
        coo = self.counts.tocoo()
        order = np.lexsort((coo.col, coo.row))
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["row_cluster", "col_cluster", "count"])
            for i, j, x in zip(coo.row[order], coo.col[order], coo.data[order]):
                w.writerow([int(i), int(j), int(x)])


def contingency(c: Clustering, d: Clustering) -> ContingencyTable:
    if c.n != d.n:
        raise ClusteringMismatchError(f"clusterings cover {c.n} and {d.n} nodes")
    ones = np.ones(c.n, dtype=np.int64)
    counts = coo_matrix(
        (ones, (c.labels, d.labels)), shape=(c.cluster_count, d.cluster_count)
    ).tocsr()
    counts.sum_duplicates()
    return ContingencyTable(counts, c.sizes.copy(), d.sizes.copy())


def write_clustering(g: Graph, c: Clustering, path) -> None:
    """One ``node_id<TAB>cluster_id`` line per node, sorted by node id."""
    if c.n != g.n:
        raise ClusteringMismatchError(f"graph has {g.n} nodes, clustering {c.n}")
    order = sorted(range(g.n), key=lambda i: _natural_key(g.ids[i]))
    labels = c.labels.tolist()
    with open(path, "w", encoding="utf-8") as fh:
        for i in order:
            fh.write(f"{g.ids[i]}\t{labels[i]}\n")


def read_clustering(g: Graph, path) -> Clustering:
    """Read a clustering file and align it with ``g``'s node indices."""
    labels = np.zeros(g.n, dtype=np.int64)
    seen = np.zeros(g.n, dtype=bool)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'node_id cluster_id'")
            try:
                i = g.index_of(parts[0])
            except KeyError:
                raise ClusteringMismatchError(
                    f"{path}:{lineno}: node {parts[0]!r} not in graph"
                ) from None
            labels[i] = int(parts[1])
            seen[i] = True
    missing = np.flatnonzero(~seen)
    if len(missing):
        raise ClusteringMismatchError(f"{path}: node {g.ids[missing[0]]!r} has no cluster")
    return compact_relabel(labels)
