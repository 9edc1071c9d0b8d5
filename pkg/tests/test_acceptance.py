"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings. Criteria marked with runtime limits assert them.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

import role_extract as rx
from role_extract.experiments import ExperimentConfig, run_experiment1

from oracles import (clustering_cost_1d, connected_gnp, gnp,
                     overlap_bruteforce, set_partitions)


@contextmanager
def criterion(number: int, name: str, limit_s: float):
    start = time.time()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} {name}: FAIL ({time.time() - start:.1f}s)")
        raise
    elapsed = time.time() - start
    print(f"ACCEPTANCE {number} {name}: PASS ({elapsed:.1f}s)")
    assert elapsed < limit_s, f"runtime {elapsed:.1f}s exceeds {limit_s}s"


def _structured_graph(rng, max_n=60):
    """Random graphs with non-trivial equitable structure mixed in, so the
    zero-cost checks exercise more than singleton partitions."""
    kind = rng.integers(3)
    if kind == 0:
        return gnp(int(rng.integers(4, max_n + 1)), float(rng.uniform(0.1, 0.6)),
                   rng, weighted=bool(rng.integers(2)))
    if kind == 1:
        k = int(rng.integers(2, 5))
        params = rx.RipParams(p=float(rng.uniform(0.05, 0.3)), c=2, k=k,
                              n=int(rng.integers(2, max_n // (2 * k) + 1)),
                              omega_role=rng.uniform(size=(k, k)),
                              seed=int(rng.integers(2 ** 31)))
        return rx.expected_adjacency(params)
    blocks = int(rng.integers(2, 7))
    size = int(rng.integers(1, max(2, max_n // blocks + 1)))
    base = rng.uniform(0.1, 2.0, size=(blocks, blocks))
    return rx.Graph(np.kron((base + base.T) / 2, np.ones((size, size))))


def test_criterion_1_exact_ep_zero_cost():
    with criterion(1, "exact-EP zero cost", 10.0):
        rng = np.random.default_rng(101)
        for _ in range(50):
            g = _structured_graph(rng)
            cep = rx.coarsest_ep(g)
            for norm in ("l1", "l2"):
                assert rx.short_term_cost(g, cep, norm=norm).value <= 1e-9
                assert rx.depth_cost(g, cep, 20, norm=norm).value <= 1e-9


def test_criterion_2_definition1_realization():
    with criterion(2, "planted roles are the coarsest EP of E[A]", 10.0):
        rng = np.random.default_rng(102)
        for _ in range(20):
            params = rx.RipParams(p=0.1, c=2, k=3, n=10,
                                  omega_role=rng.uniform(size=(3, 3)),
                                  seed=int(rng.integers(2 ** 31)))
            cep = rx.coarsest_ep(rx.expected_adjacency(params))
            assert cep.k == 3
            assert cep == rx.Partition(params.roles())


def test_criterion_3_eigenvector_optimality():
    with criterion(3, "eigenvector clustering minimizes long-term cost", 60.0):
        rng = np.random.default_rng(103)
        done = 0
        while done < 100:
            g = connected_gnp(int(rng.integers(4, 9)), 0.5, rng)
            if not rx.dominant_eigenpair(g).simple:
                continue
            part = rx.eigenvector_clustering(g, 2)
            value = rx.long_term_cost(g, part).value
            _, best = rx.brute_force_min_cost(g, 2, "long_term_l1",
                                              cep_compatible_only=True)
            assert abs(value - best) <= 1e-6
            done += 1


def test_criterion_4_1d_clustering_exactness():
    with criterion(4, "1-D clustering matches set-partition enumeration", 30.0):
        rng = np.random.default_rng(104)
        for case in range(200):
            n = int(rng.integers(2, 9))
            k = int(rng.integers(1, min(3, n) + 1))
            objective = ("abs_dev_from_mean", "squared_dev_from_mean")[case % 2]
            values = rng.uniform(-5.0, 5.0, size=n)
            part = rx.cluster_1d(values, k, objective=objective)
            got = clustering_cost_1d(part.classes(), values, objective)
            best = min(clustering_cost_1d(groups, values, objective)
                       for groups in set_partitions(n, k))
            assert got == best, f"{values} k={k} {objective}: {got} != {best}"


def test_criterion_5_recovery_at_bound_size():
    with criterion(5, "single-sample recovery at the bound size", 300.0):
        omega = np.array([[0.9, 0.9, 0.1], [0.9, 0.1, 0.1], [0.1, 0.1, 0.1]])
        probe = rx.RipParams(p=0.1, c=2, k=3, n=1, omega_role=omega, seed=0)
        n_star = rx.min_n_for_recovery(probe, q=0.9)
        params = rx.RipParams(p=0.1, c=2, k=3, n=n_star, omega_role=omega, seed=0)
        assert params.total_nodes <= 5000
        truth = rx.Partition(params.roles())
        wins = 0
        for trial in range(100):
            g = rx.sample(params, seed=1000 + trial)
            res = rx.approximate_wl(g, rx.ApproxWLConfig(k=3))
            if rx.overlap(res.partition, truth).value == 1.0:
                wins += 1
        print(f"  [criterion 5] n*={n_star}, N={params.total_nodes}, "
              f"exact recoveries: {wins}/100")
        assert wins >= 85


def test_criterion_6_experiment1_trends():
    with criterion(6, "sample-sweep trends", 600.0):
        base = rx.RipParams(p=0.05, c=5, k=5, n=10,
                            omega_role=np.full((5, 5), 0.5), seed=0)
        config = ExperimentConfig(rip=base, sample_counts=(1, 4, 16, 64),
                                  trials=100, methods=("ev", "awl_avg", "awl_fuzzy"),
                                  master_seed=600)
        rows = run_experiment1(config)
        table = {(r["method"], r["s"]): r for r in rows}
        for method in ("awl_avg", "awl_fuzzy"):
            curve = [table[(method, s)]["overlap_mean"] for s in (1, 4, 16, 64)]
            print(f"  [criterion 6] {method} overlap by s: "
                  + ", ".join(f"{v:.3f}" for v in curve))
            assert all(b >= a - 1e-12 for a, b in zip(curve, curve[1:])), curve
            assert curve[-1] - curve[0] >= 0.1
        for s in (1, 4, 16, 64):
            costs = {m: table[(m, s)]["long_cost_mean"]
                     for m in ("ev", "awl_avg", "awl_fuzzy")}
            print(f"  [criterion 6] long-term cost at s={s}: "
                  + ", ".join(f"{m}={v:.3f}" for m, v in costs.items()))
            assert costs["ev"] <= min(costs.values()) + 1e-12


def test_criterion_7_lambert_round_trip():
    with criterion(7, "Lambert W lower branch accuracy", 1.0):
        xs = -np.geomspace(1e-8, (1.0 / math.e) * (1 - 1e-12), 1000)
        for x in xs:
            y = rx.lambert_w_minus1(float(x))
            assert abs(y * math.exp(y) - x) <= 1e-12 * abs(x)
        assert abs(rx.lambert_w_minus1(-1.0 / math.e) + 1.0) <= 1e-10


def test_criterion_8_quotient_spectrum_inheritance():
    with criterion(8, "quotient eigenvalues inherited by the graph", 30.0):
        rng = np.random.default_rng(108)
        for _ in range(50):
            g = _structured_graph(rng, max_n=30)
            cep = rx.coarsest_ep(g)
            quotient_eigs = np.linalg.eigvals(rx.quotient_matrix(g, cep))
            assert np.max(np.abs(quotient_eigs.imag)) <= 1e-8
            graph_eigs = np.linalg.eigvalsh(g.toarray())
            for lam in quotient_eigs.real:
                assert np.min(np.abs(graph_eigs - lam)) <= 1e-8


def test_criterion_9_overlap_exactness():
    with criterion(9, "overlap matching equals factorial enumeration", 10.0):
        rng = np.random.default_rng(109)
        for _ in range(200):
            n = int(rng.integers(2, 13))
            found = rx.Partition(rng.integers(0, int(rng.integers(1, 6)), size=n))
            truth = rx.Partition(rng.integers(0, int(rng.integers(1, 6)), size=n))
            fast = rx.overlap(found, truth)
            assert abs(fast.value - overlap_bruteforce(found, truth)) <= 1e-12


def test_criterion_10_experiment2_shape(tmp_path, monkeypatch):
    # short-term cost trends downward in k; at most one local increase per
    # method (the tolerance the criterion grants its noisiest backend; the
    # deterministic methods' curves also jitter once k exceeds the true role
    # count, see the decisions ledger)
    with criterion(10, "class-count sweep cost shape", 120.0):
        from role_extract.cli import main

        monkeypatch.setenv("ROLE_EXTRACT_THREADS", "1")
        omega = np.random.default_rng(5).uniform(size=(3, 3))
        params = rx.RipParams(p=0.1, c=2, k=3, n=20, omega_role=omega, seed=0)
        edges = tmp_path / "exp2.edges"
        edges.write_text(rx.save_edge_list(rx.sample(params)))
        out = tmp_path / "exp2.csv"
        assert main(["experiment2", str(edges), "--k-range", "2..10",
                     "--trials", "5", "--seed", "0", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        header = lines[1].split(",")
        cost_col = header.index("short_cost_mean")
        curves: dict[str, list[float]] = {}
        for line in lines[2:]:
            fields = line.split(",")
            curves.setdefault(fields[0], []).append(float(fields[cost_col]))
        for method, curve in curves.items():
            increases = sum(1 for a, b in zip(curve, curve[1:]) if b > a + 1e-9)
            print(f"  [criterion 10] {method}: increases={increases}, curve="
                  + ", ".join(f"{v:.1f}" for v in curve))
            assert increases <= 1, (method, curve)
            assert curve[-1] < curve[0], (method, curve)
