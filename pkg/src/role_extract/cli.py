"""Command-line surface: graph generation, role extraction, scoring, bounds,
and scripted reproduction of the benchmark experiments.

All CSV outputs start with the versioned header line "# role-extract v1".
Every command is deterministic given its inputs and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .approx import export_trace
from .cost import depth_cost, short_term_cost
from .experiments import (ExperimentConfig, METHODS, run_experiment1,
                          run_experiment2, run_method)
from .graph import Graph, load_edge_list, save_edge_list
from .metrics import CENTRALITY_KINDS, centrality, overlap
from .partition import (CSV_VERSION_HEADER, Partition, load_partition_csv,
                        save_partition_csv)
from .rip import (RipParams, expected_adjacency, min_n_for_recovery,
                  min_s_for_recovery, recovery_separation, sample)
from .spectral import eigenvector_embedding
from .wl import coarsest_ep

EXTRACT_METHODS = ("cep", "ev", "awl-avg", "awl-fuzzy")


def _read_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return load_edge_list(fh)


def _write_text(path: str, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    lines = [CSV_VERSION_HEADER, ",".join(header)]
    lines += [",".join(str(v) for v in row) for row in rows]
    _write_text(path, "\n".join(lines) + "\n")


def _load_params(path: str) -> RipParams:
    with open(path, "r", encoding="utf-8") as fh:
        return RipParams.from_json(fh.read())


def cmd_gen_rip(args) -> int:
    params = _load_params(args.params)
    g = expected_adjacency(params) if args.expected else sample(params)
    _write_text(args.out + ".edges", save_edge_list(g) or "")
    _write_text(args.out + ".labels.csv",
                save_partition_csv(Partition(params.roles())) or "")
    return 0


def cmd_extract(args) -> int:
    g = _read_graph(args.graph)
    if args.method == "cep":
        part = coarsest_ep(g)
    else:
        method = {"ev": "ev", "awl-avg": "awl_avg", "awl-fuzzy": "awl_fuzzy"}[args.method]
        if args.k < 1:
            raise ValueError("--k must be >= 1")
        part = run_method(method, g, args.k, seed=args.seed)
    _write_text(args.out + ".partition.csv", save_partition_csv(part) or "")
    costs = {
        "short_term": short_term_cost(g, part, norm=args.norm).to_dict(),
        f"depth_{args.depth}": depth_cost(g, part, args.depth, norm=args.norm).to_dict(),
    }
    _write_text(args.out + ".costs.json", json.dumps(costs, indent=2) + "\n")
    if args.trace:
        if args.method not in ("awl-avg", "awl-fuzzy"):
            raise ValueError("--trace is only available for awl methods")
        from .approx import ApproxWLConfig, approximate_wl

        backend = "average_linkage" if args.method == "awl-avg" else "fuzzy_cmeans"
        result = approximate_wl(g, ApproxWLConfig(k=args.k, backend=backend, seed=args.seed))
        _write_text(args.out + ".trace.json", export_trace(result) + "\n")
    return 0


def _parse_k_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def cmd_experiment1(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    rip_raw = dict(raw["rip"])
    k = rip_raw["k"]
    omega = rip_raw.get("omega_role") or np.full((k, k), 0.5)
    params = RipParams(p=rip_raw["p"], c=rip_raw["c"], k=k, n=rip_raw["n"],
                       omega_role=omega, seed=rip_raw.get("seed", 0))
    config = ExperimentConfig(
        rip=params,
        sample_counts=tuple(raw["sample_counts"]),
        trials=raw.get("trials", 100),
        methods=tuple(raw.get("methods", list(METHODS))),
        master_seed=raw.get("master_seed", 0),
        fixed_omega=bool(raw.get("fixed_omega", False)) or args.fixed_omega,
    )
    rows = run_experiment1(config)
    header = ["method", "s", "overlap_mean", "overlap_std", "short_cost_mean",
              "short_cost_std", "long_cost_mean", "long_cost_std"]
    _write_csv(args.out, header, [[r[h] for h in header] for r in rows])
    return 0


def cmd_experiment2(args) -> int:
    g = _read_graph(args.graph)
    k_values = _parse_k_range(args.k_range)
    methods = tuple(args.methods.split(",")) if args.methods else METHODS
    rows = run_experiment2(g, k_values, methods=methods, trials=args.trials,
                           seed=args.seed)
    header = ["method", "k", "short_cost_mean", "short_cost_std",
              "dev_pagerank", "dev_eigenvector", "dev_closeness", "dev_betweenness"]
    _write_csv(args.out, header, [[r[h] for h in header] for r in rows])
    return 0


def cmd_bound(args) -> int:
    params = _load_params(args.params)
    result = {
        "delta": recovery_separation(params),
        "min_n": min_n_for_recovery(params, args.q),
        "min_s": min_s_for_recovery(params, args.q),
    }
    text = json.dumps(result, indent=2) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_embed(args) -> int:
    g = _read_graph(args.graph)
    emb = eigenvector_embedding(g, args.k)
    text = CSV_VERSION_HEADER + "\n" + emb.to_csv_row() + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_overlap(args) -> int:
    with open(args.found, "r", encoding="utf-8") as fh:
        found = load_partition_csv(fh)
    with open(args.truth, "r", encoding="utf-8") as fh:
        truth = load_partition_csv(fh)
    score = overlap(found, truth)
    result = {"value": score.value, "raw_sum": score.raw_sum,
              "permutation": list(score.permutation)}
    text = json.dumps(result, indent=2) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_centrality(args) -> int:
    g = _read_graph(args.graph)
    vectors = [centrality(g, kind) for kind in CENTRALITY_KINDS]
    rows = [[v] + [repr(float(vec[v])) for vec in vectors] for v in range(g.n)]
    _write_csv(args.out, ["node", *CENTRALITY_KINDS], rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="role-extract",
        description="Extract node roles from graphs by approximating equitable partitions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-rip", help="sample (or expand) a planted-role benchmark graph")
    p.add_argument("params", help="path to benchmark params JSON")
    p.add_argument("out", help="output prefix; writes <out>.edges and <out>.labels.csv")
    p.add_argument("--expected", action="store_true",
                   help="write the expected (weighted) adjacency instead of a sample")
    p.set_defaults(func=cmd_gen_rip)

    p = sub.add_parser("extract", help="extract roles from an edge-list graph")
    p.add_argument("graph", help="path to edge-list file")
    p.add_argument("--method", choices=EXTRACT_METHODS, required=True)
    p.add_argument("--k", type=int, default=2, help="class count (ignored for cep)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--norm", choices=("l1", "l2", "l2_squared"), default="l2")
    p.add_argument("--depth", type=int, default=20, help="depth for the depth cost report")
    p.add_argument("--trace", action="store_true", help="also export the awl step trace")
    p.add_argument("--out", required=True,
                   help="output prefix; writes <out>.partition.csv and <out>.costs.json")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("experiment1", help="sample-sweep recovery experiment")
    p.add_argument("config", help="path to experiment config JSON")
    p.add_argument("--fixed-omega", action="store_true",
                   help="reuse the configured role matrix instead of redrawing per trial")
    p.add_argument("--out", required=True, help="results CSV path")
    p.set_defaults(func=cmd_experiment1)

    p = sub.add_parser("experiment2", help="class-count sweep with centrality deviations")
    p.add_argument("graph", help="path to edge-list file")
    p.add_argument("--k-range", default="2..20", help="'LO..HI' inclusive or comma list")
    p.add_argument("--methods", default=None, help="comma list from ev,awl_avg,awl_fuzzy")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="results CSV path")
    p.set_defaults(func=cmd_experiment2)

    p = sub.add_parser("bound", help="recovery-bound computation for benchmark params")
    p.add_argument("params", help="path to benchmark params JSON")
    p.add_argument("--q", type=float, default=0.9, help="target success probability")
    p.add_argument("--out", default=None, help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("embed", help="eigenvector role embedding of a graph")
    p.add_argument("graph", help="path to edge-list file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("overlap", help="score a partition CSV against ground truth")
    p.add_argument("found", help="path to found partition CSV")
    p.add_argument("truth", help="path to ground-truth partition CSV")
    p.add_argument("--out", default=None, help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("centrality", help="centrality report CSV for a graph")
    p.add_argument("graph", help="path to edge-list file")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_centrality)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"role-extract: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
