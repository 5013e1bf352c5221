"""
Two-stage clustering and cleanup
================================

A coarse k-way cut followed by the map equation inside each large part,
then a pass that splits oversized clusters and folds tiny ones into their
best-fitting neighbour.
"""

import numpy as np

from citeclust import (
    HybridConfig,
    MethodConfig,
    PostprocessConfig,
    compact_relabel,
    evaluate,
    generate_planted_partition,
    postprocess,
    two_stage,
)

pb = generate_planted_partition(blocks=12, block_size=60, p_in=0.25, p_out=0.01, seed=3)
g = pb.graph

# first stage: three coarse parts; second stage refines any part above 50 nodes
cfg = HybridConfig(
    first=MethodConfig("kway", target_clusters=3, seed=0),
    second=MethodConfig("mapeq", seed=0),
    refine_threshold=50,
)
trace = []
c = two_stage(g, cfg, trace)
for d in trace:
    print(f"part {d.cluster}: {d.size} nodes -> {d.parts} pieces, "
          f"lnL {d.log_l_before:.1f} -> {d.log_l_after:.1f} {'kept' if d.accepted else 'rejected'}")
print("two-stage result:", c.cluster_count, "clusters")

# a deliberately poor clustering: one giant plus many crumbs
rng = np.random.default_rng(0)
labels = np.where(rng.random(g.n) < 0.6, 0, rng.integers(1, 80, g.n))
messy = compact_relabel(labels)
before = evaluate(g, messy, d90_sample=None)

trace = []
clean = postprocess(g, messy, PostprocessConfig(MethodConfig("louvain"), s_tiny=15, s_giant=200), trace)
after = evaluate(g, clean, d90_sample=None)
print(f"before: {before.clusters} clusters, lnL={before.logL:.1f}, tiny-cluster share={before.deg_lo:.2f}")
print(f"after:  {after.clusters} clusters, lnL={after.logL:.1f}, tiny-cluster share={after.deg_lo:.2f}")
