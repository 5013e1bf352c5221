"""Distances between clusterings and grouping of methods by those distances."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .graph import Graph, rewire
from .hybrid import derive_seed
from .methods import MethodConfig, run_method
from .partition import Clustering, ClusteringMismatchError, contingency

__all__ = [
    "DistanceMatrix",
    "MethodClasses",
    "variation_of_information",
    "uncertainty",
    "robustness_curve",
    "distance_matrix",
    "classify_methods",
    "cosine_dissimilarity",
    "write_robustness_csv",
]

Method = Union[MethodConfig, Callable[[Graph, int], Clustering]]


def _runner(method: Method) -> Callable[[Graph, int], Clustering]:
    if isinstance(method, MethodConfig):
        return lambda g, seed: run_method(g, method.with_seed(seed))
    return method


def variation_of_information(c: Clustering, d: Clustering) -> tuple[float, float]:
    """Return ``(V, V / ln n)`` with ``V = H(C|D) + H(D|C)`` in nats."""
    if c.n != d.n:
        raise ClusteringMismatchError(f"clusterings cover {c.n} and {d.n} nodes")
    if c.n < 2:
        raise ValueError("normalized variation of information needs n >= 2")
    table = contingency(c, d).counts.tocoo()
    n = float(c.n)
    nij = table.data.astype(np.float64)
    ni = c.sizes[table.row].astype(np.float64)
    nj = d.sizes[table.col].astype(np.float64)
    h_c_given_d = -np.sum(nij / n * np.log(nij / nj))
    h_d_given_c = -np.sum(nij / n * np.log(nij / ni))
    v = float(h_c_given_d + h_d_given_c)
    v = v if v > 0 else 0.0
    return v, v / math.log(n)


def uncertainty(g: Graph, method: Method, seed_pair: tuple[int, int] = (0, 1)) -> float:
    """Normalized distance between two runs of ``method`` with different seeds."""
    run = _runner(method)
    return variation_of_information(run(g, seed_pair[0]), run(g, seed_pair[1]))[1]


def robustness_curve(
    g: Graph,
    method: Method,
    alphas: Sequence[float],
    seed: int = 0,
    seed_pair: tuple[int, int] | None = None,
) -> list[tuple[float, float]]:
    """Normalized distance between the clustering of ``g`` and that of ``g``
    with a fraction ``alpha`` of links rewired.

    The baseline uses the first seed of ``seed_pair`` and every perturbed run
    the second, so the point at ``alpha = 0`` equals :func:`uncertainty` for
    the same pair.
    """
    run = _runner(method)
    s0, s1 = seed_pair if seed_pair is not None else (seed, seed + 1)
    base = run(g, s0)
    curve = []
    for j, alpha in enumerate(alphas):
        perturbed = rewire(g, float(alpha), derive_seed(seed, j)) if alpha > 0 else g
        curve.append((float(alpha), variation_of_information(base, run(perturbed, s1))[1]))
    return curve


def write_robustness_csv(curve, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "v_norm"])
        for a, v in curve:
            w.writerow([f"{a:.6g}", f"{v:.6g}"])


@dataclass
class DistanceMatrix:
    labels: list[str]
    d: np.ndarray

    def write_csv(self, path, order: Sequence[int] | None = None) -> None:
        idx = list(order) if order is not None else list(range(len(self.labels)))
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([""] + [self.labels[i] for i in idx])
            for i in idx:
                w.writerow([self.labels[i]] + [f"{self.d[i, j]:.6g}" for j in idx])

    def write_svg(self, path, order: Sequence[int] | None = None, cell: int = 16) -> None:
        """Linear grayscale heatmap; 0 is white, 1 is black."""
        idx = list(order) if order is not None else list(range(len(self.labels)))
        size = cell * len(idx)
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">'
        ]
        for r, i in enumerate(idx):
            for col, j in enumerate(idx):
                g = int(round(255 * (1 - min(max(self.d[i, j], 0.0), 1.0))))
                parts.append(
                    f'<rect x="{col * cell}" y="{r * cell}" width="{cell}" height="{cell}" '
                    f'fill="rgb({g},{g},{g})"><title>{self.labels[i]} / {self.labels[j]}: '
                    f"{self.d[i, j]:.6g}</title></rect>"
                )
        parts.append("</svg>")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(parts) + "\n")


def distance_matrix(runs: Sequence[Clustering], labels: Sequence[str] | None = None) -> DistanceMatrix:
    if labels is None:
        labels = [f"run{i}" for i in range(len(runs))]
    if len(labels) != len(runs):
        raise ValueError("one label per run is required")
    k = len(runs)
    d = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            d[i, j] = d[j, i] = variation_of_information(runs[i], runs[j])[1]
    return DistanceMatrix(list(labels), d)


def cosine_dissimilarity(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Pairwise ``1 - cos`` between rows of ``x`` and ``y``.

    Two zero vectors are identical (0); a zero vector against a non-zero one
    is maximally dissimilar (1).
    """
    nx = np.linalg.norm(x, axis=1)
    ny = np.linalg.norm(y, axis=1)
    denom = np.outer(nx, ny)
    with np.errstate(invalid="ignore", divide="ignore"):
        sim = np.where(denom > 0, (x @ y.T) / np.where(denom > 0, denom, 1.0), 0.0)
    both_zero = np.outer(nx == 0, ny == 0)
    out = 1.0 - np.clip(sim, -1.0, 1.0)
    out[both_zero] = 0.0
    return np.maximum(out, 0.0)


@dataclass
class MethodClasses:
    assignment: dict[str, int]
    k: int
    silhouettes: dict[str, float]
    classes: list[list[str]] = field(default_factory=list)

    def order(self, labels: Sequence[str]) -> list[int]:
        """Row order listing classes by size and members by silhouette."""
        pos = {lab: i for i, lab in enumerate(labels)}
        return [pos[lab] for cls in self.classes for lab in cls]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["label", "class", "silhouette"])
            for cls in self.classes:
                for lab in cls:
                    w.writerow([lab, self.assignment[lab], f"{self.silhouettes[lab]:.6g}"])


def _kmeans_once(x: np.ndarray, k: int, rng: np.random.Generator, iters: int = 100):
    n = len(x)
    first = int(rng.integers(n))
    centers = [x[first]]
    for _ in range(1, k):
        dist = cosine_dissimilarity(x, np.array(centers)).min(axis=1)
        total = dist.sum()
        nxt = int(rng.choice(n, p=dist / total)) if total > 0 else int(rng.integers(n))
        centers.append(x[nxt])
    centers = np.array(centers)
    assign = np.full(n, -1)
    for _ in range(iters):
        dist = cosine_dissimilarity(x, centers)
        new = dist.argmin(axis=1)
        # keep every class non-empty: hand an empty class the worst-fitting point
        counts = np.bincount(new, minlength=k)
        for empty in np.flatnonzero(counts == 0):
            fit = dist[np.arange(n), new]
            donors = counts[new] > 1
            if not donors.any():
                break
            cand = np.flatnonzero(donors)
            p = cand[np.argmax(fit[cand])]
            counts[new[p]] -= 1
            new[p] = empty
            counts[empty] = 1
        if np.array_equal(new, assign):
            break
        assign = new
        centers = np.array([x[assign == j].mean(axis=0) for j in range(k)])
    cost = float(cosine_dissimilarity(x, centers)[np.arange(n), assign].sum())
    return cost, assign


def _silhouettes(dis: np.ndarray, assign: np.ndarray, k: int) -> np.ndarray:
    n = len(assign)
    out = np.zeros(n)
    if k == 1:
        return out
    for i in range(n):
        own = assign[i]
        mates = (assign == own) & (np.arange(n) != i)
        if not mates.any():
            continue
        a = dis[i, mates].mean()
        b = min(dis[i, assign == j].mean() for j in range(k) if j != own and (assign == j).any())
        top = max(a, b)
        out[i] = (b - a) / top if top > 0 else 0.0
    return out


def classify_methods(dm: DistanceMatrix, k: int, seed=None, restarts: int = 100) -> MethodClasses:
    """Group runs by k-means on the rows of the distance matrix.

    Rows act as feature vectors with arithmetic-mean centroids and cosine
    dissimilarity; the best of ``restarts`` seeded k-means++ runs is kept.
    Classes are listed by decreasing size, members by decreasing silhouette.
    """
    labels = list(dm.labels)
    n = len(labels)
    if k < 1 or k > n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    x = np.asarray(dm.d, dtype=np.float64)
    if k == n:
        assign = np.arange(n)
    elif k == 1:
        assign = np.zeros(n, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        best = None
        for _ in range(restarts):
            cost, a = _kmeans_once(x, k, rng)
            if best is None or cost < best[0] - 1e-12:
                best = (cost, a)
        assign = best[1]
    sil = _silhouettes(cosine_dissimilarity(x, x), assign, k)
    groups = [np.flatnonzero(assign == j) for j in range(k)]
    groups.sort(key=lambda grp: (-len(grp), grp[0]))
    classes, assignment, silhouettes = [], {}, {}
    for cid, grp in enumerate(groups):
        members = sorted(grp.tolist(), key=lambda i: (-sil[i], i))
        classes.append([labels[i] for i in members])
        for i in members:
            assignment[labels[i]] = cid
            silhouettes[labels[i]] = float(sil[i])
    return MethodClasses(assignment, k, silhouettes, classes)
