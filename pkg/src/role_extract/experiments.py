"""Reproduction drivers for the benchmark experiments.

Experiment 1 sweeps the number of averaged samples of a planted-role graph
and scores each method's recovered roles (overlap with ground truth, plus
short-term and depth-20 costs). Experiment 2 sweeps the requested class count
on a fixed graph and reports cost together with how well the clusters explain
four node centralities. Trials run on a bounded worker pool; the
ROLE_EXTRACT_THREADS environment variable overrides the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .approx import ApproxWLConfig, approximate_wl
from .cost import depth_cost, short_term_cost
from .graph import Graph
from .metrics import centrality, cluster_deviation, overlap
from .partition import Partition
from .rip import RipParams, sample_mean
from .spectral import eigenvector_clustering

METHODS = ("ev", "awl_avg", "awl_fuzzy")
DEPTH = 20
_OMEGA_STREAM = 424242  # sub-stream tag so omega draws never alias edge draws


@dataclass(frozen=True)
class ExperimentConfig:
    """Experiment 1 settings.

    ``omega_role`` in ``rip`` is a template: unless ``fixed_omega`` is set, a
    fresh matrix is drawn i.i.d. uniform [0, 1] per trial (from the
    trial-seeded sub-stream). Per-trial seeds are ``master_seed + trial``.
    """

    rip: RipParams
    sample_counts: tuple[int, ...]
    trials: int = 100
    methods: tuple[str, ...] = METHODS
    master_seed: int = 0
    fixed_omega: bool = False
    k_range: tuple[int, ...] = tuple(range(2, 21))

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.methods:
            raise ValueError("methods must be non-empty")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}, expected subset of {METHODS}")
        if not self.sample_counts:
            raise ValueError("sample_counts must be non-empty")


def worker_count(n_tasks: int) -> int:
    env = os.environ.get("ROLE_EXTRACT_THREADS")
    if env:
        workers = int(env)
    else:
        workers = os.cpu_count() or 1
    return max(1, min(workers, n_tasks))


def run_method(method: str, g: Graph, k: int, seed: int) -> Partition:
    if method == "ev":
        return eigenvector_clustering(g, k)
    backend = "average_linkage" if method == "awl_avg" else "fuzzy_cmeans"
    cfg = ApproxWLConfig(k=k, backend=backend, seed=seed)
    return approximate_wl(g, cfg).partition


def _trial_params(config: ExperimentConfig, trial: int) -> RipParams:
    base = config.rip
    trial_seed = config.master_seed + trial
    if config.fixed_omega:
        omega = base.omega_role
    else:
        rng = np.random.default_rng([trial_seed, _OMEGA_STREAM])
        omega = rng.uniform(0.0, 1.0, size=(base.k, base.k))
    return RipParams(p=base.p, c=base.c, k=base.k, n=base.n,
                     omega_role=omega, seed=trial_seed)


def _experiment1_trial(config: ExperimentConfig, trial: int) -> dict:
    params = _trial_params(config, trial)
    truth = Partition(params.roles())
    out: dict[tuple[str, int], tuple[float, float, float]] = {}
    for s in config.sample_counts:
        g = sample_mean(params, s)
        for method in config.methods:
            part = run_method(method, g, params.k, seed=config.master_seed + trial)
            score = overlap(part, truth).value
            short = short_term_cost(g, part).value
            long_ = depth_cost(g, part, DEPTH).value
            out[(method, s)] = (score, short, long_)
    return out


def run_experiment1(config: ExperimentConfig) -> list[dict]:
    """Per (method, s): mean and std of overlap, short-term, and depth-20 cost
    across trials. Rows come back sorted by (method, s)."""
    workers = worker_count(config.trials)
    if workers == 1:
        per_trial = [_experiment1_trial(config, t) for t in range(config.trials)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(_experiment1_trial, [config] * config.trials,
                                      range(config.trials)))
    rows = []
    for method in config.methods:
        for s in config.sample_counts:
            triples = np.array([per_trial[t][(method, s)] for t in range(config.trials)])
            rows.append({
                "method": method,
                "s": s,
                "overlap_mean": float(triples[:, 0].mean()),
                "overlap_std": float(triples[:, 0].std()),
                "short_cost_mean": float(triples[:, 1].mean()),
                "short_cost_std": float(triples[:, 1].std()),
                "long_cost_mean": float(triples[:, 2].mean()),
                "long_cost_std": float(triples[:, 2].std()),
            })
    return rows


def run_experiment2(g: Graph, k_values, methods=METHODS, trials: int = 1,
                    seed: int = 0) -> list[dict]:
    """Per (method, k): mean/std short-term cost plus the per-node l1 deviation
    of each centrality from its cluster mean (averaged over trials)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cents = {kind: centrality(g, kind) for kind in
             ("pagerank", "eigenvector", "closeness", "betweenness")}
    rows = []
    for method in methods:
        for k in k_values:
            k_eff = min(k, g.n)
            costs = []
            devs = {kind: [] for kind in cents}
            for trial in range(trials):
                part = run_method(method, g, k_eff, seed=seed + trial)
                costs.append(short_term_cost(g, part).value)
                for kind, vec in cents.items():
                    devs[kind].append(cluster_deviation(vec, part) / g.n)
            costs = np.asarray(costs)
            rows.append({
                "method": method,
                "k": k,
                "short_cost_mean": float(costs.mean()),
                "short_cost_std": float(costs.std()),
                **{f"dev_{kind}": float(np.mean(vals)) for kind, vals in devs.items()},
            })
    return rows
