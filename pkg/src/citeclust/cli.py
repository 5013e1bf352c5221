"""Command-line interface: ``citeclust {cluster,eval,compare,stats}``.

Exit codes: 0 success, 1 unreadable input, 2 invalid arguments,
3 node sets that do not match.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import numpy as np

from .compare import (
    DistanceMatrix,
    classify_methods,
    distance_matrix,
    robustness_curve,
    variation_of_information,
    write_robustness_csv,
)
from .graph import EdgeListParseError, EmptyGraphError, Graph, read_edgelist
from .hybrid import HYBRID_PRESETS, named_hybrid
from .methods import ALGORITHMS, MethodConfig, run_method
from .metrics import REPORT_FIELDS, Stopwatch, evaluate, round_sig
from .partition import Clustering, ClusteringMismatchError, compact_relabel, read_clustering, write_clustering
from .postprocess import PostprocessConfig, postprocess

EXIT_PARSE, EXIT_USAGE, EXIT_MISMATCH = 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class MethodSpec:
    """Everything needed to re-run one method with a given seed."""

    name: str
    resolution: float | None = None
    clusters: int | None = None
    variant: str | None = None
    refine_threshold: int = 50
    first_clusters: int | None = None

    def config(self, seed: int) -> MethodConfig:
        algo = self.name if self.name in ALGORITHMS else "mapeq"
        return MethodConfig(
            algo,
            seed=seed,
            resolution=self.resolution or 1.0,
            target_clusters=self.clusters,
            variant=self.variant,
        )

    def run(self, g: Graph, seed: int) -> Clustering:
        if self.name in HYBRID_PRESETS:
            return named_hybrid(self.name, g, seed, self.refine_threshold, self.first_clusters)
        return run_method(g, self.config(seed))


def _default_seed() -> int:
    return int(os.environ.get("CITECLUST_SEED", "0"))


def _method_spec(args, name: str | None = None) -> MethodSpec:
    name = (name or args.method).lower()
    if name not in ALGORITHMS + HYBRID_PRESETS:
        raise UsageError(f"unknown method {name!r}")
    if args.resolution is not None and name != "louvain":
        raise UsageError("--resolution only applies to louvain")
    if (args.clusters is not None or args.variant is not None) and name != "kway":
        raise UsageError("--clusters/--variant only apply to kway")
    if args.clusters is not None and args.clusters < 1:
        raise UsageError("--clusters must be at least 1")
    if args.resolution is not None and args.resolution <= 0:
        raise UsageError("--resolution must be positive")
    hybrid_flags = getattr(args, "refine_threshold", None) is not None or getattr(args, "first_clusters", None) is not None
    if hybrid_flags and name not in HYBRID_PRESETS:
        raise UsageError("--refine-threshold/--first-clusters only apply to hybrid methods")
    if getattr(args, "first_clusters", None) is not None and name not in ("gracmap", "metimap"):
        raise UsageError("--first-clusters only applies to gracmap/metimap")
    return MethodSpec(
        name,
        resolution=args.resolution,
        clusters=args.clusters,
        variant=args.variant,
        refine_threshold=getattr(args, "refine_threshold", None) or 50,
        first_clusters=getattr(args, "first_clusters", None),
    )


def _load_graph(path) -> Graph:
    g, _ = read_edgelist(path)
    return g


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n", encoding="utf-8")


def _summary(reports: list[dict]) -> dict:
    out = {}
    for key in REPORT_FIELDS:
        vals = [r[key] for r in reports if r.get(key) is not None]
        if not vals:
            continue
        arr = np.asarray(vals, dtype=np.float64)
        out[key] = {
            "mean": round_sig(float(arr.mean())),
            "std": round_sig(float(arr.std(ddof=1))) if np.ptp(arr) > 0 else 0.0,
        }
    return out


def _metrics_dict(g, c, d90_sample, seed) -> dict:
    rep = evaluate(g, c, runtime=None, d90_sample=d90_sample, seed=seed)
    return {k: round_sig(v) for k, v in rep.to_dict().items()}


def _one_replicate(g: Graph, spec: MethodSpec, post: PostprocessConfig | None, seed: int):
    with Stopwatch() as sw:
        c = spec.run(g, seed)
        c_post = postprocess(g, c, post) if post is not None else None
    return c, c_post, sw.elapsed, seed


def cmd_cluster(args) -> int:
    spec = _method_spec(args)
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    if not args.post and (args.s_tiny is not None or args.s_giant is not None):
        raise UsageError("--s-tiny/--s-giant require --post")
    s_tiny = args.s_tiny if args.s_tiny is not None else 15
    s_giant = args.s_giant if args.s_giant is not None else 10**4
    if args.post and not s_tiny < s_giant:
        raise UsageError("--s-tiny must be smaller than --s-giant")
    g = _load_graph(args.input)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    seeds = [args.seed + r for r in range(args.reps)]
    posts = [
        PostprocessConfig(spec.config(s), s_tiny=s_tiny, s_giant=s_giant, seed=s) if args.post else None
        for s in seeds
    ]
    jobs = args.jobs or os.cpu_count() or 1
    work = partial(_one_replicate, g, spec)
    if jobs > 1 and args.reps > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, args.reps)) as pool:
            results = list(pool.map(work, posts, seeds))
    else:
        results = [work(p, s) for p, s in zip(posts, seeds)]

    reports, reports_post, timings = [], [], []
    for r, (c, c_post, elapsed, seed) in enumerate(results):
        final = c_post if c_post is not None else c
        write_clustering(g, final, out / f"clustering_{r}.txt")
        rep = _metrics_dict(g, c, args.d90_sample, seed)
        doc = {"method": spec.name, "seed": seed, "metrics": rep}
        if c_post is not None:
            write_clustering(g, c, out / f"clustering_{r}.pre.txt")
            rep_post = _metrics_dict(g, c_post, args.d90_sample, seed)
            doc = {"method": spec.name, "seed": seed, "pre": rep, "post": rep_post}
            reports_post.append(rep_post)
        _write_json(out / f"metrics_{r}.json", doc)
        reports.append(rep)
        timings.append({"replicate": r, "seed": seed, "T_sec": round_sig(elapsed)})

    summary = {"method": spec.name, "reps": args.reps, "seed": args.seed}
    if args.post:
        summary["pre"] = _summary(reports)
        summary["post"] = _summary(reports_post)
    else:
        summary["metrics"] = _summary(reports)
    _write_json(out / "summary.json", summary)
    _write_json(
        out / "provenance.json",
        {
            "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "input": str(args.input),
            "timings": timings,
            "T_sec": _summary([{"T_sec": t["T_sec"]} for t in timings]).get("T_sec"),
        },
    )
    return 0


def _runtime_from_provenance(path: Path) -> float | None:
    prov = path.parent / "provenance.json"
    stem = path.name
    if not (prov.exists() and stem.startswith("clustering_")):
        return None
    try:
        idx = int(stem.split("_", 1)[1].split(".")[0])
        for t in json.loads(prov.read_text(encoding="utf-8")).get("timings", []):
            if t.get("replicate") == idx:
                return float(t["T_sec"])
    except (ValueError, KeyError, json.JSONDecodeError):
        return None
    return None


def cmd_eval(args) -> int:
    g = _load_graph(args.input)
    path = Path(args.clustering)
    c = read_clustering(g, path)
    runtime = args.runtime if args.runtime is not None else _runtime_from_provenance(path)
    sample = None if args.no_d90 else args.d90_sample
    rep = evaluate(g, c, runtime=runtime, d90_sample=sample, seed=args.seed)
    if args.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(REPORT_FIELDS)
        w.writerow(rep.csv_row())
    else:
        sys.stdout.write(rep.to_json())
    return 0


def _read_label_map(path) -> dict[str, int]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise EdgeListParseError(path, lineno, line)
            out[parts[0]] = int(parts[1])
    return out


def _parse_floats(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError("empty list")
    return vals


def cmd_compare(args) -> int:
    classes = [int(k) for k in _parse_floats(args.classes)] if args.classes else []
    out = Path(args.out_dir)
    if args.clusterings:
        if len(args.clusterings) < 2:
            raise UsageError("need at least two clustering files")
        labels = args.labels.split(",") if args.labels else [Path(p).stem for p in args.clusterings]
        if len(labels) != len(args.clusterings):
            raise UsageError("--labels must name every clustering")
        for k in classes:
            if not 1 <= k <= len(labels):
                raise UsageError(f"--classes {k} outside 1..{len(labels)}")
        maps = [_read_label_map(p) for p in args.clusterings]
        ids = sorted(maps[0])
        for p, mp in zip(args.clusterings, maps):
            if set(mp) != set(ids):
                raise ClusteringMismatchError(f"{p}: node set differs from {args.clusterings[0]}")
        runs = [compact_relabel([mp[i] for i in ids]) for mp in maps]
        dm = distance_matrix(runs, labels)
        out.mkdir(parents=True, exist_ok=True)
        dm.write_csv(out / "distances.csv")
        _write_classes(dm, classes, args.seed, out)
        return 0

    if not args.input or not (args.methods or args.method):
        raise UsageError("give clustering files, or --in with --method/--methods")
    names = args.methods.split(",") if args.methods else [args.method]
    specs = [_method_spec(args, name) for name in names]
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    for k in classes:
        if not 1 <= k <= len(specs):
            raise UsageError(f"--classes {k} outside 1..{len(specs)}")
    alphas = _parse_floats(args.robustness) if args.robustness else None
    if alphas and any(not 0 <= a <= 1 for a in alphas):
        raise UsageError("--robustness values must lie in [0, 1]")
    g = _load_graph(args.input)
    out.mkdir(parents=True, exist_ok=True)

    if alphas:
        for spec in specs:
            curves = [
                robustness_curve(g, spec.run, alphas, seed=args.seed + 2 * r,
                                 seed_pair=(args.seed + 2 * r, args.seed + 2 * r + 1))
                for r in range(args.reps)
            ]
            mean = [(a, float(np.mean([cv[j][1] for cv in curves]))) for j, a in enumerate(alphas)]
            write_robustness_csv(mean, out / f"robustness_{spec.name}.csv")

    if len(specs) >= 2 or args.reps >= 2:
        runs = {s.name: [s.run(g, args.seed + r) for r in range(args.reps)] for s in specs}
        k = len(specs)
        d = np.zeros((k, k))
        for i in range(k):
            for j in range(i + 1, k):
                vals = [
                    variation_of_information(a, b)[1]
                    for a, b in zip(runs[specs[i].name], runs[specs[j].name])
                ]
                d[i, j] = d[j, i] = float(np.mean(vals))
        dm = DistanceMatrix([s.name for s in specs], d)
        if k >= 2:
            dm.write_csv(out / "distances.csv")
            _write_classes(dm, classes, args.seed, out)
        if args.reps >= 2:
            with open(out / "uncertainty.csv", "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["method", "U"])
                for s in specs:
                    rs = runs[s.name]
                    u = np.mean([variation_of_information(rs[r], rs[r + 1])[1] for r in range(len(rs) - 1)])
                    w.writerow([s.name, f"{u:.6g}"])
    return 0


def _write_classes(dm, classes, seed, out: Path) -> None:
    for k in classes:
        mc = classify_methods(dm, k, seed)
        mc.write_csv(out / f"classes_k{k}.csv")
        order = mc.order(dm.labels)
        dm.write_svg(out / f"heatmap_k{k}.svg", order)


def cmd_stats(args) -> int:
    _, st = read_edgelist(args.input)
    doc = {"n": st.n, "m": st.m, "k": round_sig(st.k), "lcc": round_sig(st.lcc_fraction), "dropped": st.dropped_nodes}
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def _add_method_flags(p, require_method: bool):
    p.add_argument("--method", required=require_method, help="louvain, mapeq, lpa, kway or a hybrid preset")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--resolution", type=float)
    p.add_argument("--clusters", type=int)
    p.add_argument("--variant", choices=["S", "L"])
    p.add_argument("--refine-threshold", type=int)
    p.add_argument("--first-clusters", type=int)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--jobs", type=int, default=0, help="worker processes (default: all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="citeclust", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a graph, write clusterings and metrics")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-dir", default="out")
    _add_method_flags(p, require_method=True)
    p.add_argument("--post", action="store_true")
    p.add_argument("--s-tiny", type=int)
    p.add_argument("--s-giant", type=int)
    p.add_argument("--d90-sample", type=int, default=1000)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("eval", help="print every metric of a clustering")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--clustering", required=True)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--runtime", type=float)
    p.add_argument("--d90-sample", type=int, default=1000)
    p.add_argument("--no-d90", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="distance matrices, method classes, robustness curves")
    p.add_argument("clusterings", nargs="*")
    p.add_argument("--labels")
    p.add_argument("--in", dest="input")
    p.add_argument("--methods")
    p.add_argument("--robustness")
    p.add_argument("--classes")
    p.add_argument("--out-dir", default="out")
    _add_method_flags(p, require_method=False)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("stats", help="network statistics of an edge list")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except ValueError:
        print("citeclust: error: CITECLUST_SEED must be an integer", file=sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (EdgeListParseError, EmptyGraphError, FileNotFoundError) as exc:
        print(f"citeclust: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ClusteringMismatchError as exc:
        print(f"citeclust: error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        print(f"citeclust: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return 0


if __name__ == "__main__":
    sys.exit(main())
