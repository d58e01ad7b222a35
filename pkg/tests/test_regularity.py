from fractions import Fraction as F
from itertools import combinations

import numpy as np
import pytest

from extremal_lab import regularity as reg
from extremal_lab.errors import BudgetExceeded, PreconditionError
from extremal_lab.graph import Graph, complete_graph, complete_multipartite, cycle_graph, disjoint_union, join, is_clique


def half_density_pair(seed: int):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 12])))
    hit = rng.random((12, 12)) < 0.5
    return Graph.from_edges(24, [(int(a), 12 + int(b)) for a, b in zip(*np.nonzero(hit))])


def blown_up_c5(size: int) -> Graph:
    edges = [(i * size + a, ((i + 1) % 5) * size + b) for i in range(5) for a in range(size) for b in range(size)]
    return Graph.from_edges(5 * size, edges)


def test_equipartition_validation():
    p = reg.Equipartition.contiguous(10, 3)
    assert sorted(len(x) for x in p.parts) == [3, 3, 4]
    with pytest.raises(PreconditionError):
        reg.Equipartition(6, (frozenset({0, 1, 2, 3}), frozenset({4, 5})))
    with pytest.raises(PreconditionError):
        reg.Equipartition(4, (frozenset({0, 1}), frozenset({1, 2})))
    r = reg.Equipartition.random(11, 4, seed=3)
    assert sorted(v for part in r.parts for v in part) == list(range(11))


def test_complete_bipartite_pair_is_regular():
    g = complete_multipartite([6, 6])
    for eps in (F(1, 10), F(1, 4), F(1, 2)):
        cert = reg.check_pair_regular(g, range(6), range(6, 12), eps)
        assert cert.regular and cert.density == 1


def test_half_complete_pair_is_irregular_with_witness():
    edges = [(a, b) for a in range(4) for b in range(8, 16)]
    g = Graph.from_edges(16, edges)
    cert = reg.check_pair_regular(g, range(8), range(8, 16), F(1, 4))
    assert not cert.regular
    a2, b2, d = cert.witness
    assert len(a2) >= 2 and len(b2) >= 2
    cross = sum(g.has_edge(u, v) for u in a2 for v in b2)
    assert F(cross, len(a2) * len(b2)) == d and abs(d - F(1, 2)) > F(1, 4)


def test_random_half_density_pair_verdicts():
    # Measured verdicts: irregular at eps = 3/10, regular from 2/5.
    g = half_density_pair(0)
    a, b = range(12), range(12, 24)
    assert not reg.check_pair_regular(g, a, b, F(3, 10)).regular
    assert reg.check_pair_regular(g, a, b, F(2, 5)).regular


def test_exhaustive_cap():
    g = complete_multipartite([15, 15])
    with pytest.raises(BudgetExceeded):
        reg.check_pair_regular(g, range(15), range(15, 30), F(1, 4))
    assert reg.check_pair_regular(g, range(15), range(15, 30), F(1, 4), mode="sampled", samples=200).regular


def test_sampled_finds_half_complete_violation():
    edges = [(a, b) for a in range(4) for b in range(8, 16)]
    g = Graph.from_edges(16, edges)
    cert = reg.check_pair_regular(g, range(8), range(8, 16), F(1, 4), mode="sampled", samples=2000, seed=1)
    assert not cert.regular and cert.witness is not None


def test_slicing_examples():
    assert reg.slicing_params(0.01, 0.5, 0.5) == (F(1, 50), F(49, 100))
    with pytest.raises(PreconditionError, match="alpha_fraction"):
        reg.slicing_params(0.01, 0.5, 0.001)
    e1, _ = reg.slicing_params(F(1, 10), F(1, 2), F(1, 2))
    assert e1 == F(1, 10) / F(1, 2) == 2 * F(1, 10)


def test_cluster_graph_examples():
    g = complete_multipartite([4, 4, 4])
    part = reg.Equipartition.contiguous(12, 3)
    r = reg.build_cluster_graph(g, part, F(1, 4), F(1, 10))
    assert r.edges == ((0, 1), (0, 2), (1, 2))
    cliques = disjoint_union([complete_graph(4)] * 3)
    assert reg.build_cluster_graph(cliques, part, F(1, 4), F(1, 10)).edges == ()
    c5 = reg.build_cluster_graph(blown_up_c5(3), reg.Equipartition.contiguous(15, 5), F(1, 4), F(1, 10))
    assert set(c5.edges) == {(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}
    assert reg.detect_heavy_triangles(c5, F(2, 3), F(1, 10)) == []


def test_cluster_graph_edge_rule():
    d = [[0, F(1, 2), F(1, 20)], [F(1, 2), 0, F(1, 2)], [F(1, 20), F(1, 2), 0]]
    flags = [[False, True, True], [True, False, False], [True, False, False]]
    r = reg.ClusterGraph.from_densities(d, F(1, 10), F(1, 10), flags)
    assert r.edges == ((0, 1),)


def test_heavy_and_chubby_examples():
    def tri(a, b, c):
        return reg.ClusterGraph.from_densities([[0, a, b], [a, 0, c], [b, c, 0]])
    assert reg.detect_heavy_triangles(tri(0.9, 0.9, 0.9), F(2, 3), 0.1) == [(0, 1, 2)]
    assert reg.detect_heavy_triangles(tri(0.9, 0.9, 0.5), F(2, 3), 0.1) == []
    assert reg.detect_chubby(tri(0.9, 0.5, 0.5), F(3, 4), 0.1) == [(0, 1, 2)]
    assert reg.detect_heavy_triangles(tri(0.9, 0.5, 0.5), F(3, 4), 0.1) == []
    k4 = [[0 if i == j else F(1, 2) for j in range(4)] for i in range(4)]
    k4[1][2] = k4[2][1] = F(4, 5)
    assert reg.detect_chubby(reg.ClusterGraph.from_densities(k4), F(2, 3), 0.1, clique_order=4) == [(0, 1, 2, 3)]


def test_residual_bound_examples():
    yes = reg.residual_edge_bound(1000, 100, 0.003, 0.1)
    assert yes.gamma_third and yes.coefficient == F(33, 1000)
    no = reg.residual_edge_bound(1000, 100, 0.01, 0.1)
    assert not no.gamma_third and no.coefficient == F(4, 100)
    zero = reg.residual_edge_bound(1000, 100, 0, 0.1)
    assert zero.chained == (F(1, 40) + F(1, 200)) * 1000 ** 2
    assert yes.exact_sum <= yes.chained


def test_edge_decomposition_examples():
    part = reg.Equipartition.contiguous(12, 3)
    g = complete_multipartite([4, 4, 4])
    r = reg.build_cluster_graph(g, part, F(1, 4), F(1, 10))
    dec = reg.edge_decomposition(g, part, r)
    assert dec.residual_part == 0 and dec.cluster_part == 48 == dec.cluster_bound
    cl = disjoint_union([complete_graph(4)] * 3)
    dec = reg.edge_decomposition(cl, part, reg.build_cluster_graph(cl, part, F(1, 4), F(1, 10)))
    assert dec.cluster_part == 0 and dec.residual_part == 18


def test_edge_decomposition_blown_up_c5_with_inner_edges(rng):
    base = blown_up_c5(4)
    rows = list(base.rows)
    for i in range(5):
        for a, b in combinations(range(4 * i, 4 * i + 4), 2):
            if rng.random() < 0.5:
                rows[a] |= 1 << b
                rows[b] |= 1 << a
    g = Graph._trusted(20, rows)
    part = reg.Equipartition.contiguous(20, 5)
    r = reg.build_cluster_graph(g, part, F(1, 4), F(1, 10))
    dec = reg.edge_decomposition(g, part, r)
    lab = part.labels()
    direct_cluster = sum(1 for u, v in g.edges() if lab[u] != lab[v] and r.has_edge(lab[u], lab[v]))
    assert dec.cluster_part == direct_cluster == 80
    assert dec.residual_part == g.num_edges() - 80


def test_lift_examples():
    g = join([cycle_graph(5)] * 3)
    part = reg.Equipartition.contiguous(15, 3)
    r = reg.build_cluster_graph(g, part, F(1, 4), F(1, 10))
    k6 = reg.lift_clique(g, part, r, [0, 1, 2], 2)
    assert k6 is not None and len(k6) == 6 and is_clique(g, k6)
    kb = complete_multipartite([3, 3])
    p2 = reg.Equipartition.contiguous(6, 2)
    rb = reg.build_cluster_graph(kb, p2, F(1, 4), F(1, 10))
    k2 = reg.lift_clique(kb, p2, rb, [0, 1], 1)
    assert len(k2) == 2 and is_clique(kb, k2)


def test_lift_requires_cluster_clique():
    sparse = Graph.from_edges(8, [(0, 4)])
    part = reg.Equipartition.contiguous(8, 2)
    r = reg.build_cluster_graph(sparse, part, F(1, 4), F(1, 2))
    assert r.edges == ()
    with pytest.raises(PreconditionError):
        reg.lift_clique(sparse, part, r, [0, 1], 1)


def test_hierarchy_examples():
    rep = reg.validate_hierarchy(reg.ParamHierarchy(10 ** 6, 10 ** 6, F(1, 10 ** 7), 10 ** 5, F(1, 1000), F(1, 20)))
    assert rep.failures == ["1/n << delta"]
    good = reg.ParamHierarchy(10 ** 12, 10 ** 12, F(1, 10 ** 7), 10 ** 5, F(1, 1000), F(1, 20))
    assert reg.validate_hierarchy(good).ok
    assert "gamma << 1" in reg.validate_hierarchy(reg.ParamHierarchy(10 ** 12, 10 ** 12, F(1, 10 ** 7), 10 ** 5, F(1, 1000), 1)).failures
    assert "delta < 1/M'" in reg.validate_hierarchy(reg.ParamHierarchy(10 ** 12, 10 ** 12, F(1, 10 ** 5), 10 ** 5, F(1, 1000), F(1, 20))).failures


def test_prune_low_crossing_degree():
    g = complete_multipartite([4, 4])
    rows = list(g.rows)
    for b in range(4, 7):  # vertex 0 keeps one cross edge
        rows[0] &= ~(1 << b)
        rows[b] &= ~1
    h = Graph._trusted(8, rows)
    res = reg.prune_low_crossing_degree(h, [range(4), range(4, 8)], 2)
    assert res.status == "floor_met" and res.deleted == (0,)
    res = reg.prune_low_crossing_degree(Graph.from_edges(4, []), [[0, 1], [2, 3]], 1)
    assert res.status == "part_emptied"
