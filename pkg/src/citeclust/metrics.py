"""Statistics of a clustering on a graph.

Covers internal/external degree, the Flake fraction, modularity, the
block-model log-likelihood, size spread, effective cluster diameter,
degeneracy and a power-law tail fit of cluster sizes.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import xlogy

from .graph import Graph
from .partition import Clustering

__all__ = [
    "MetricsReport",
    "LikelihoodParts",
    "LikelihoodTracker",
    "PowerLawFit",
    "UndefinedFitError",
    "connectivity",
    "modularity",
    "log_likelihood",
    "size_stats",
    "effective_diameter",
    "degeneracy",
    "powerlaw_fit",
    "cluster_coverage",
    "intra_edge_counts",
    "evaluate",
    "REPORT_FIELDS",
]

REPORT_FIELDS = (
    "clusters", "S", "K", "E", "F", "Q", "logL", "O", "O5", "D90",
    "coverage", "deg_lo", "deg_hi", "T_sec",
)


class UndefinedFitError(ValueError):
    pass


def _check(g: Graph, c: Clustering):
    if g.n != c.n:
        raise ValueError(f"graph has {g.n} nodes but clustering covers {c.n}")


def intra_edge_counts(g: Graph, c: Clustering) -> np.ndarray:
    """Number of edges inside each cluster."""
    u, v = g.edges
    lu = c.labels[u]
    same = lu == c.labels[v]
    return np.bincount(lu[same], minlength=c.cluster_count)


def connectivity(g: Graph, c: Clustering) -> dict[str, float]:
    """Average internal degree ``K``, expansion ``E``, Flake fraction ``F``
    and the covered-link fraction ``K/k``."""
    _check(g, c)
    u, v = g.edges
    same = c.labels[u] == c.labels[v]
    internal = np.bincount(u[same], minlength=g.n) + np.bincount(v[same], minlength=g.n)
    n = g.n
    m_in = int(same.sum())
    K = 2 * m_in / n
    E = 2 * (g.m - m_in) / n
    F = float(np.count_nonzero(internal < g.degrees / 2)) / n
    coverage = m_in / g.m if g.m else 0.0
    return {"K": K, "E": E, "F": F, "coverage": coverage}


def modularity(g: Graph, c: Clustering, resolution: float = 1.0) -> float:
    _check(g, c)
    if g.m == 0:
        return 0.0
    m_c = intra_edge_counts(g, c)
    d_c = np.bincount(c.labels, weights=g.degrees, minlength=c.cluster_count)
    two_m = 2.0 * g.m
    return float(m_c.sum() / g.m - resolution * np.sum((d_c / two_m) ** 2))


def _bernoulli_loglik(m, M):
    """``m ln(m/M) + (M-m) ln(1-m/M)`` with ``0 ln 0 = 0``; zero where ``M = 0``."""
    m = np.asarray(m, dtype=np.float64)
    M = np.asarray(M, dtype=np.float64)
    safe = np.where(M > 0, M, 1.0)
    out = xlogy(m, m / safe) + xlogy(M - m, (M - m) / safe)
    return np.where(M > 0, out, 0.0)


@dataclass(frozen=True)
class LikelihoodParts:
    m_i: np.ndarray
    M_i: np.ndarray
    m_tilde: int
    M_tilde: int

    @property
    def theta_i(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.M_i > 0, self.m_i / np.maximum(self.M_i, 1), 0.0)

    @property
    def theta_tilde(self) -> float:
        return self.m_tilde / self.M_tilde if self.M_tilde else 0.0


def log_likelihood(g: Graph, c: Clustering) -> tuple[float, LikelihoodParts]:
    """Natural log of the planted-partition likelihood with plug-in MLEs."""
    _check(g, c)
    m_i = intra_edge_counts(g, c)
    s = c.sizes.astype(np.int64)
    M_i = s * (s - 1) // 2
    m_t = g.m - int(m_i.sum())
    M_t = g.n * (g.n - 1) // 2 - int(M_i.sum())
    value = float(np.sum(_bernoulli_loglik(m_i, M_i)) + _bernoulli_loglik(m_t, M_t))
    return value, LikelihoodParts(m_i, M_i, m_t, M_t)


class LikelihoodTracker:
    """Incremental log-likelihood under cluster replacements.

    Clusters are described by ``(internal_edges, size)`` pairs; replacing a
    set of clusters by another set only touches their own terms and the
    shared inter-cluster term.
    """

    def __init__(self, g: Graph, c: Clustering):
        _, parts = log_likelihood(g, c)
        self.n = g.n
        self.m = g.m
        self._pairs_total = g.n * (g.n - 1) // 2
        self._sum_terms = float(np.sum(_bernoulli_loglik(parts.m_i, parts.M_i)))
        self._sum_m = int(parts.m_i.sum())
        self._sum_M = int(parts.M_i.sum())

    @staticmethod
    def _term(m_in: int, size: int) -> float:
        M = size * (size - 1) // 2
        if M == 0:
            return 0.0
        out = 0.0
        if m_in:
            out += m_in * math.log(m_in / M)
        if M - m_in:
            out += (M - m_in) * math.log((M - m_in) / M)
        return out

    def _total(self, sum_terms, sum_m, sum_M) -> float:
        return sum_terms + self._term_tilde(self.m - sum_m, self._pairs_total - sum_M)

    @staticmethod
    def _term_tilde(m_t: int, M_t: int) -> float:
        if M_t == 0:
            return 0.0
        out = 0.0
        if m_t:
            out += m_t * math.log(m_t / M_t)
        if M_t - m_t:
            out += (M_t - m_t) * math.log((M_t - m_t) / M_t)
        return out

    @property
    def value(self) -> float:
        return self._total(self._sum_terms, self._sum_m, self._sum_M)

    def _shift(self, old, new):
        dt = dm = dM = 0
        for m_in, s in old:
            dt -= self._term(m_in, s)
            dm -= m_in
            dM -= s * (s - 1) // 2
        for m_in, s in new:
            dt += self._term(m_in, s)
            dm += m_in
            dM += s * (s - 1) // 2
        return dt, dm, dM

    def value_after(self, old, new) -> float:
        dt, dm, dM = self._shift(old, new)
        return self._total(self._sum_terms + dt, self._sum_m + dm, self._sum_M + dM)

    def apply(self, old, new) -> float:
        dt, dm, dM = self._shift(old, new)
        self._sum_terms += dt
        self._sum_m += dm
        self._sum_M += dM
        return self.value


def size_stats(c: Clustering) -> dict[str, float]:
    """Average size ``S`` and orders of magnitude ``O`` and ``O5``.

    ``O5`` discards the ``floor(0.05 * K)`` smallest of the ``K`` clusters
    before taking the ratio.
    """
    s = np.sort(c.sizes)
    if len(s) == 0:
        raise ValueError("clustering has no clusters")
    trim = int(math.floor(0.05 * len(s)))
    return {
        "S": c.n / len(s),
        "O": math.log10(s[-1] / s[0]),
        "O5": math.log10(s[-1] / s[trim]),
    }


def _hops_to_cover(adj, labels, seed: int, need: int) -> int:
    if need <= 1:
        return 0
    lab = labels[seed]
    seen = {seed}
    frontier = [seed]
    depth = 0
    while frontier:
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in seen and labels[y] == lab:
                    seen.add(y)
                    nxt.append(y)
        if not nxt:
            break
        depth += 1
        if len(seen) >= need:
            return depth
        frontier = nxt
    return depth


def effective_diameter(g: Graph, c: Clustering, sample: int = 1000, seed=None) -> float:
    """Mean number of in-cluster BFS hops needed to reach 90% of a cluster.

    Seeds are ``sample`` nodes drawn uniformly without replacement, or every
    node when ``n <= sample``. A seed that cannot reach 90% of its cluster
    contributes its maximum BFS depth.
    """
    _check(g, c)
    if g.n <= sample:
        seeds = np.arange(g.n)
    else:
        seeds = np.random.default_rng(seed).choice(g.n, size=sample, replace=False)
    adj = g.adjacency_lists
    labels = c.labels.tolist()
    need = np.ceil(0.9 * c.sizes).astype(np.int64).tolist()
    hops = [_hops_to_cover(adj, labels, int(s), need[labels[s]]) for s in seeds.tolist()]
    return float(np.mean(hops)) if hops else 0.0


def degeneracy(c: Clustering, s_tiny: int = 15) -> tuple[float, float]:
    s = c.sizes
    return float(s[s < s_tiny].sum() / c.n), float(1 - s.max() / c.n)


@dataclass(frozen=True)
class PowerLawFit:
    gamma: float
    s_min: float
    tail_count: int


def powerlaw_fit(sizes, s_min: float) -> PowerLawFit:
    """Continuous maximum-likelihood exponent of the tail ``s >= s_min``."""
    if s_min <= 1:
        raise ValueError("s_min must exceed 1")
    tail = np.asarray(sizes, dtype=np.float64)
    tail = tail[tail >= s_min]
    if len(tail) < 2:
        raise UndefinedFitError(f"need at least two sizes >= {s_min}")
    denom = float(np.sum(np.log(tail / s_min)))
    if denom <= 0:
        raise UndefinedFitError("all tail sizes equal s_min")
    return PowerLawFit(1.0 + len(tail) / denom, float(s_min), len(tail))


def cluster_coverage(g: Graph, c: Clustering, cluster: int) -> float:
    """Twice the internal edges of one cluster over its total degree."""
    _check(g, c)
    if not 0 <= cluster < c.cluster_count:
        raise KeyError(f"unknown cluster id {cluster}")
    members = c.labels == cluster
    total = int(g.degrees[members].sum())
    if total == 0:
        return 0.0
    return 2 * int(intra_edge_counts(g, c)[cluster]) / total


@dataclass
class MetricsReport:
    clusters: int
    S: float
    K: float
    E: float
    F: float
    Q: float
    logL: float
    O: float
    O5: float
    D90: float | None
    coverage: float
    deg_lo: float
    deg_hi: float
    T_sec: float | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def to_json(self) -> str:
        return json.dumps({k: round_sig(v) for k, v in self.to_dict().items()}, indent=2) + "\n"

    def csv_row(self) -> list[str]:
        d = asdict(self)
        return ["" if d[k] is None else str(round_sig(d[k])) for k in REPORT_FIELDS]


def round_sig(x, digits: int = 6):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, float):
        return float(f"{x:.{digits}g}")
    return x


def evaluate(
    g: Graph,
    c: Clustering,
    runtime: float | None = None,
    d90_sample: int | None = 1000,
    seed=0,
    s_tiny: int = 15,
) -> MetricsReport:
    """Every scalar statistic of ``(g, c)``; ``d90_sample=None`` skips D90."""
    conn = connectivity(g, c)
    sz = size_stats(c)
    lo, hi = degeneracy(c, s_tiny)
    d90 = None if d90_sample is None else effective_diameter(g, c, d90_sample, seed)
    return MetricsReport(
        clusters=c.cluster_count,
        S=sz["S"],
        K=conn["K"],
        E=conn["E"],
        F=conn["F"],
        Q=modularity(g, c),
        logL=log_likelihood(g, c)[0],
        O=sz["O"],
        O5=sz["O5"],
        D90=d90,
        coverage=conn["coverage"],
        deg_lo=lo,
        deg_hi=hi,
        T_sec=runtime,
    )


class Stopwatch:
    """Context manager recording wall-clock seconds in ``elapsed``."""

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self._t0
        return False
