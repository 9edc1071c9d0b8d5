import math

import numpy as np
import pytest

from role_extract import (Graph, Partition, SoftAssignment, coarsest_ep,
                          depth_cost, harden, is_equitable, long_term_cost,
                          short_term_cost)
from role_extract.cost import CostReport

from oracles import (connected_gnp, cycle_graph, gnp, path_graph,
                     short_term_residual, star_graph)


def test_zero_at_coarsest_equitable_partition():
    rng = np.random.default_rng(1)
    for _ in range(10):
        g = gnp(int(rng.integers(4, 15)), 0.4, rng)
        cep = coarsest_ep(g)
        for norm in ("l1", "l2", "l2_squared"):
            assert short_term_cost(g, cep, norm=norm).value <= 1e-10


def test_p3_equitable_partition_zero():
    assert short_term_cost(path_graph(3), Partition([0, 1, 0])).value <= 1e-12


def test_p3_hand_value_against_dense_algebra():
    g = path_graph(3)
    p = Partition([0, 0, 1])
    resid = short_term_residual(g.toarray(), p.indicator())
    assert short_term_cost(g, p, norm="l2_squared").value == pytest.approx(0.5)
    assert (resid ** 2).sum() == pytest.approx(0.5)
    assert short_term_cost(g, p, norm="l1").value == pytest.approx(np.abs(resid).sum())
    assert short_term_cost(g, p, norm="l2").value == pytest.approx(np.sqrt((resid ** 2).sum()))


def test_soft_assignment_cost_matches_dense_algebra():
    rng = np.random.default_rng(8)
    g = gnp(7, 0.5, rng, weighted=True)
    w = rng.dirichlet(np.ones(3), size=7)
    soft = SoftAssignment(w)
    h = soft.weights
    sizes = h.sum(axis=0)
    resid = g.toarray() @ h - h @ ((h.T @ (g.toarray() @ h)) / sizes[:, None])
    assert short_term_cost(g, soft, norm="l1").value == pytest.approx(np.abs(resid).sum())


def test_zero_column_soft_class_rejected():
    g = path_graph(3)
    soft = SoftAssignment(np.array([[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match="empty class"):
        short_term_cost(g, soft)


def test_zero_iff_equitable():
    rng = np.random.default_rng(10)
    for _ in range(30):
        n = int(rng.integers(3, 10))
        g = gnp(n, 0.5, rng)
        p = Partition(rng.integers(0, 3, size=n))
        value = short_term_cost(g, p).value
        assert (value <= 1e-10) == is_equitable(g, p, tol=1e-10)


def test_norm_ordering():
    rng = np.random.default_rng(13)
    for _ in range(10):
        g = gnp(8, 0.5, rng)
        p = Partition(rng.integers(0, 3, size=8))
        l1 = short_term_cost(g, p, norm="l1").value
        l2 = short_term_cost(g, p, norm="l2").value
        assert l2 <= l1 + 1e-12


def test_depth_cost_zero_at_cep():
    rng = np.random.default_rng(3)
    for _ in range(5):
        g = gnp(int(rng.integers(4, 12)), 0.5, rng)
        cep = coarsest_ep(g)
        for norm in ("l1", "l2"):
            assert depth_cost(g, cep, 20, norm=norm).value <= 1e-9


def test_depth_one_matches_rescaled_short_term():
    rng = np.random.default_rng(4)
    g = gnp(9, 0.5, rng)
    p = Partition(rng.integers(0, 2, size=9))
    report = depth_cost(g, p, 1)
    assert report.value == pytest.approx(short_term_cost(g, p).value / report.spectral_radius)


def test_depth_cost_c4_one_class_zero():
    for d in (1, 5, 20):
        assert depth_cost(cycle_graph(4), Partition.single_class(4), d).value <= 1e-12


def test_depth_cost_nondecreasing_in_d():
    rng = np.random.default_rng(5)
    g = gnp(8, 0.5, rng)
    p = Partition(rng.integers(0, 3, size=8))
    values = [depth_cost(g, p, d).value for d in (1, 2, 5, 10, 25)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_depth_cost_errors_on_edgeless_graph():
    g = Graph(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        depth_cost(g, Partition.single_class(3), 5)


def _depth_term(g, p, d):
    # d-th summand of the depth family, evaluated by explicit dense algebra
    a = g.toarray()
    h = p.indicator()
    rho = np.linalg.eigvalsh(a).max()
    ad = np.linalg.matrix_power(a, d)
    sizes = h.sum(axis=0)
    resid = ad @ h - h @ ((h.T @ (ad @ h)) / sizes[:, None])
    return np.abs(resid).sum() / rho ** d


def test_long_term_cost_zero_at_cep_and_star():
    rng = np.random.default_rng(6)
    for _ in range(5):
        g = connected_gnp(int(rng.integers(4, 10)), 0.5, rng)
        assert long_term_cost(g, coarsest_ep(g)).value <= 1e-9
    assert long_term_cost(star_graph(3), Partition([0, 1, 1, 1])).value <= 1e-12


def test_long_term_cost_p4_balanced_partitions_match_limit():
    # partitions for which the depth-term limit exists on the (bipartite) path
    g = path_graph(4)
    for labels in ([0, 1, 1, 0], [0, 0, 1, 1], [0, 1, 0, 1]):
        p = Partition(labels)
        assert long_term_cost(g, p).value == pytest.approx(_depth_term(g, p, 60), abs=1e-6)


def test_long_term_cost_matches_limit_nonbipartite():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 15:
        n = int(rng.integers(4, 21))
        g = connected_gnp(n, 0.45, rng)
        eigs = np.linalg.eigvalsh(g.toarray())
        if eigs.max() + eigs.min() < 1e-3:  # skip (near-)bipartite draws
            continue
        p = Partition(rng.integers(0, 3, size=n))
        assert long_term_cost(g, p).value == pytest.approx(_depth_term(g, p, 60), abs=1e-6)
        checked += 1


def test_long_term_cost_requires_simple_dominant():
    from role_extract import NonSimpleDominantError

    two_triangles = np.zeros((6, 6))
    for a, b in ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)):
        two_triangles[a, b] = two_triangles[b, a] = 1.0
    g = Graph(two_triangles)
    with pytest.raises(NonSimpleDominantError):
        long_term_cost(g, Partition([0, 0, 0, 1, 1, 1]))


def test_long_term_cost_rejects_soft_assignment():
    g = path_graph(3)
    soft = SoftAssignment(np.full((3, 2), 0.5))
    with pytest.raises(TypeError):
        long_term_cost(g, soft)


def test_permutation_invariance_of_costs():
    rng = np.random.default_rng(20)
    for _ in range(5):
        n = 9
        g = connected_gnp(n, 0.5, rng)
        labels = rng.integers(0, 3, size=n)
        perm = rng.permutation(n)
        g_perm = Graph(g.toarray()[np.ix_(perm, perm)])
        p = Partition(labels)
        p_perm = Partition(labels[perm])
        for fn in (lambda gg, pp: short_term_cost(gg, pp).value,
                   lambda gg, pp: depth_cost(gg, pp, 7).value):
            assert fn(g, p) == pytest.approx(fn(g_perm, p_perm), abs=1e-9)
        if rx_simple(g) and rx_simple(g_perm):
            assert long_term_cost(g, p).value == pytest.approx(
                long_term_cost(g_perm, p_perm).value, abs=1e-8)


def rx_simple(g):
    from role_extract import dominant_eigenpair

    return dominant_eigenpair(g).simple


def test_cost_report_serialization():
    report = CostReport(value=1.25, norm="l2", depth=20, spectral_radius=3.0)
    data = report.to_dict()
    assert data == {"value": 1.25, "norm": "l2", "depth": 20, "spectral_radius": 3.0}
    inf_report = CostReport(value=0.0, norm="l1", depth=math.inf, spectral_radius=2.0)
    assert inf_report.to_dict()["depth"] == "inf"
