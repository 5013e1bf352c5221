import numpy as np
import pytest

from citeclust.graph import generate_planted_partition
from citeclust.hybrid import RefinementDecision
from citeclust.methods import MethodConfig
from citeclust.metrics import log_likelihood
from citeclust.postprocess import MergeDecision, PostprocessConfig, merge_tiny, postprocess, split_giants
from citeclust.partition import all_in_one, compact_relabel
from conftest import disjoint_cliques, graph_from_pairs
from oracles import BARBELL, components, log_likelihood_direct

LOUVAIN = MethodConfig("louvain")


def test_split_identity_when_nothing_is_giant(barbell):
    c = compact_relabel([0, 0, 0, 1, 1, 1])
    assert split_giants(barbell, c, PostprocessConfig(LOUVAIN, s_tiny=2, s_giant=3)) == c


def test_split_two_cliques():
    g = disjoint_cliques(2, 20)
    trace = []
    out = split_giants(g, all_in_one(40), PostprocessConfig(LOUVAIN, s_tiny=5, s_giant=30), trace)
    assert out.same_partition(compact_relabel(np.repeat([0, 1], 20)))
    assert trace[0].accepted and trace[0].log_l_after > trace[0].log_l_before


def test_split_rejects_trivial_refinement():
    g = disjoint_cliques(2, 20)
    cfg = PostprocessConfig(MethodConfig("kway", target_clusters=1), s_tiny=5, s_giant=30)
    assert split_giants(g, all_in_one(40), cfg) == all_in_one(40)


def test_merge_identity():
    g = disjoint_cliques(2, 20)
    c = compact_relabel(np.repeat([0, 1], 20))
    assert merge_tiny(g, c, PostprocessConfig(LOUVAIN, s_tiny=15)) == c


def test_merge_barbell_example(barbell):
    c = compact_relabel([0, 0, 0, 1, 1, 2])
    out = merge_tiny(barbell, c, PostprocessConfig(LOUVAIN, s_tiny=2, s_giant=30))
    assert out.same_partition(compact_relabel([0, 0, 0, 1, 1, 1]))
    # node 5 only touches {3, 4}, so that is the single candidate
    assert log_likelihood(barbell, out)[0] == pytest.approx(log_likelihood_direct(6, BARBELL, [0, 0, 0, 1, 1, 1]))


def test_merge_picks_best_likelihood_neighbour():
    # tiny cluster {6} hangs off a dense triangle and a sparse path
    pairs = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (6, 0), (6, 3)]
    g = graph_from_pairs(7, pairs)
    c = compact_relabel([0, 0, 0, 1, 1, 1, 2])
    trace = []
    out = merge_tiny(g, c, PostprocessConfig(LOUVAIN, s_tiny=2, s_giant=30), trace)
    cands = [[0, 0, 0, 1, 1, 1, 0], [0, 0, 0, 1, 1, 1, 1]]
    best = max(cands, key=lambda lab: log_likelihood_direct(7, pairs, lab))
    assert out.same_partition(compact_relabel(best))
    assert isinstance(trace[0], MergeDecision)
    assert trace[0].log_l_after == pytest.approx(log_likelihood(g, out)[0])


def test_isolated_tiny_component_survives():
    pairs = [(a, b) for a in range(20) for b in range(a + 1, 20)] + [(20, 21)]
    g = graph_from_pairs(22, pairs)
    c = compact_relabel([0] * 20 + [1, 1])
    trace = []
    out = merge_tiny(g, c, PostprocessConfig(LOUVAIN), trace)
    assert out == c
    assert trace[0].into is None


def test_postprocess_tiny_clusters_are_components():
    pb = generate_planted_partition(8, 30, 0.3, 0.01, seed=6)
    g = pb.graph
    rng = np.random.default_rng(0)
    c = compact_relabel(rng.integers(0, 60, g.n))
    trace = []
    out = postprocess(g, c, PostprocessConfig(LOUVAIN, s_tiny=15, s_giant=200, seed=2), trace)
    comps = {frozenset(x) for x in components(g.n, zip(*[a.tolist() for a in g.edges]))}
    for i in np.flatnonzero(out.sizes < 15):
        assert frozenset(np.flatnonzero(out.labels == i).tolist()) in comps
    splits = [d for d in trace if isinstance(d, RefinementDecision)]
    values = [d.log_l_after for d in splits]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_postprocess_is_seeded():
    pb = generate_planted_partition(6, 20, 0.3, 0.02, seed=1)
    c = compact_relabel(np.random.default_rng(1).integers(0, 30, pb.graph.n))
    cfg = PostprocessConfig(LOUVAIN, s_tiny=15, s_giant=60, seed=4)
    assert postprocess(pb.graph, c, cfg) == postprocess(pb.graph, c, cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        PostprocessConfig(LOUVAIN, s_tiny=100, s_giant=50)


@pytest.mark.slow
def test_postprocess_grows_map_equation_clusters_at_scale():
    from citeclust.graph import generate_citation_like
    from citeclust.hybrid import named_hybrid
    from citeclust.metrics import evaluate

    g = generate_citation_like(30_000, seed=0).graph
    c = named_hybrid("metimap", g, seed=0)
    out = postprocess(g, c, PostprocessConfig(MethodConfig("mapeq")))
    before = evaluate(g, c, d90_sample=None)
    after = evaluate(g, out, d90_sample=None)
    assert after.S > before.S
    assert abs(after.coverage - before.coverage) <= 0.01
