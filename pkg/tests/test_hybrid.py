import numpy as np
import pytest

from citeclust.graph import generate_planted_partition
from citeclust.hybrid import (
    HybridConfig,
    RefinementDecision,
    derive_seed,
    first_stage_count,
    named_hybrid,
    refine_by_likelihood,
    two_stage,
)
from citeclust.methods import MethodConfig, louvain, run_method
from citeclust.metrics import log_likelihood
from citeclust.partition import all_in_one, compact_relabel
from oracles import TRIANGLES

TRI = compact_relabel(TRIANGLES)


def test_barbell_refinement_accepted(barbell):
    trace = []
    cfg = HybridConfig(MethodConfig("kway", target_clusters=1), MethodConfig("louvain"), refine_threshold=2)
    c = two_stage(barbell, cfg, trace)
    assert c.same_partition(TRI)
    (d,) = trace
    assert d.accepted
    assert d.log_l_before == pytest.approx(log_likelihood(barbell, all_in_one(6))[0])
    assert d.log_l_after == pytest.approx(log_likelihood(barbell, TRI)[0])


def test_threshold_above_n_is_identity(barbell):
    first = MethodConfig("kway", target_clusters=1)
    cfg = HybridConfig(first, MethodConfig("louvain"), refine_threshold=7)
    assert two_stage(barbell, cfg) == run_method(barbell, first)


def test_refinement_rejected_without_strict_gain(barbell):
    trace = []
    out = refine_by_likelihood(barbell, TRI, [0, 1], lambda sub, i: all_in_one(sub.n), trace)
    assert out == TRI
    assert [d.accepted for d in trace] == [False, False]


def test_refinement_rejected_when_worse(barbell):
    trace = []
    split = lambda sub, i: compact_relabel(np.arange(sub.n) % 2)
    assert refine_by_likelihood(barbell, TRI, [0], split, trace) == TRI
    assert not trace[0].accepted


def test_planted_trace_monotone():
    pb = generate_planted_partition(6, 40, 0.4, 0.02, seed=3)
    trace = []
    cfg = HybridConfig(MethodConfig("kway", target_clusters=12, seed=1), MethodConfig("mapeq", seed=2), 10)
    c = two_stage(pb.graph, cfg, trace)
    assert trace and all(isinstance(d, RefinementDecision) for d in trace)
    values = [trace[0].log_l_before] + [d.log_l_after for d in trace]
    assert all(b >= a for a, b in zip(values, values[1:]))
    first = run_method(pb.graph, cfg.first)
    assert log_likelihood(pb.graph, c)[0] >= log_likelihood(pb.graph, first)[0]
    assert values[-1] == pytest.approx(log_likelihood(pb.graph, c)[0])


def test_first_stage_count():
    assert first_stage_count(32628) == 3
    assert first_stage_count(1_200_000) == 24
    assert first_stage_count(500) == 1


def test_named_hybrids():
    pb = generate_planted_partition(5, 40, 0.5, 0.01, seed=0)
    g = pb.graph
    for name in ("gracmap", "metimap", "louvmap", "labmap"):
        c = named_hybrid(name, g, seed=1, refine_threshold=20)
        assert c.n == g.n
    # refine threshold beyond n: louvmap equals plain louvain
    assert named_hybrid("louvmap", g, seed=5, refine_threshold=g.n + 1) == louvain(g, seed=5)
    with pytest.raises(ValueError):
        named_hybrid("nope", g)


def test_metimap_uses_count_rule(monkeypatch):
    import citeclust.hybrid as hybrid

    seen = {}

    def fake_two_stage(g, cfg, trace=None):
        seen["k"] = cfg.first.target_clusters
        return all_in_one(g.n)

    monkeypatch.setattr(hybrid, "two_stage", fake_two_stage)

    class Fake:
        n = 32628

    hybrid.named_hybrid("metimap", Fake())
    assert seen["k"] == 3


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(1, 0) == derive_seed(1, 0)
    assert len({derive_seed(1, i) for i in range(50)}) == 50


def test_threshold_validation():
    with pytest.raises(ValueError):
        HybridConfig(MethodConfig("louvain"), MethodConfig("mapeq"), refine_threshold=1)
