"""Property-based checks of the structural invariants."""

from fractions import Fraction as F
from itertools import combinations

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from extremal_lab import drc
from extremal_lab import regularity as reg
from extremal_lab import rtsearch as rts
from extremal_lab import weighting as wt
from extremal_lab.canon import certificate
from extremal_lab.constructions import random_cliquefree_small_alpha, two_part_join, verify_construction
from extremal_lab.generate import ClassSpec, generate
from extremal_lab.graph import (
    Graph,
    clique_number,
    complement,
    from_graph6,
    independence_number,
    join,
    pair_density,
    to_graph6,
)

from conftest import random_graph

FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_n=8, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for v in range(n) for u in range(v)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


@st.composite
def fractions01(draw, den=20):
    return F(draw(st.integers(0, den)), den)


# --- graph core -------------------------------------------------------------

@FAST
@given(graphs(max_n=8))
def test_symmetric_irreflexive(g):
    for u in range(g.n):
        assert not g.has_edge(u, u)
        for v in range(g.n):
            assert g.has_edge(u, v) == g.has_edge(v, u)


@FAST
@given(graphs(max_n=8))
def test_alpha_equals_complement_omega(g):
    assert independence_number(g) == clique_number(complement(g))


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=62, min_n=0))
def test_graph6_round_trip_hypothesis(g):
    text = to_graph6(g)
    assert from_graph6(text).rows == g.rows and to_graph6(from_graph6(text)) == text


def test_graph6_round_trip_ten_thousand(rng):
    for _ in range(10 ** 4):
        n = int(rng.integers(0, 63))
        g = random_graph(n, float(rng.random()), rng)
        assert from_graph6(to_graph6(g)).rows == g.rows


@FAST
@given(graphs(max_n=9, min_n=2), st.data())
def test_pair_density_symmetric(g, data):
    verts = list(range(g.n))
    a = data.draw(st.lists(st.sampled_from(verts), min_size=1, unique=True))
    rest = [v for v in verts if v not in a]
    if not rest:
        return
    b = data.draw(st.lists(st.sampled_from(rest), min_size=1, unique=True))
    x, y = pair_density(g, a, b), pair_density(g, b, a)
    assert x.density == y.density and 0 <= x.density <= 1
    assert x.cross_edges <= x.a_size * x.b_size


def test_join_laws_all_pairs_up_to_five_vertices():
    small = [g for level in generate(ClassSpec(), 5).levels[1:] for g in level]
    assert len(small) == 1 + 2 + 4 + 11 + 34
    props = [(g, clique_number(g), independence_number(g), g.num_edges()) for g in small]
    for (g, wg, ag, eg), (h, wh, ah, eh) in combinations(props, 2):
        j = join([g, h])
        assert clique_number(j) == wg + wh
        assert independence_number(j) == max(ag, ah)
        assert j.num_edges() == eg + eh + g.n * h.n


@FAST
@given(graphs(max_n=8), st.randoms(use_true_random=False))
def test_certificate_is_relabelling_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert certificate(g.relabel(perm)) == certificate(g)


# --- weighting --------------------------------------------------------------

@FAST
@given(graphs(max_n=9))
def test_standard_weight_range_and_triangle_rule(g):
    w = wt.standard_weighting(g)
    assert set(w.weights) == set(g.edges())
    assert w.total == sum(w.weights.values())
    orders = wt.edge_clique_orders(g)
    for e, x in w.weights.items():
        assert F(1, 2) <= x <= 1
        in_triangle = any(g.has_edge(e[0], z) and g.has_edge(e[1], z) for z in range(g.n))
        assert (x == 1) == (not in_triangle)
        assert x == wt.standard_weight(orders[e])
    ws = [wt.standard_weight(r) for r in range(2, 12)]
    assert all(a > b for a, b in zip(ws, ws[1:]))


def test_quarter_bound_on_random_graphs(rng):
    for _ in range(500):
        n = int(rng.integers(1, 51))
        g = random_graph(n, float(rng.random()), rng)
        assert wt.verify_quarter_bound(g).holds


@FAST
@given(graphs(max_n=9))
def test_chubby_versus_standard(g):
    if clique_number(g) >= 5:
        return
    orders = wt.edge_clique_orders(g)
    tri_only = sum(1 for r in orders.values() if r == 3)
    chubby = wt.chubby_weighting_k5free(g).total
    assert chubby <= wt.standard_weighting(g).total + (F(4, 5) - F(3, 4)) * tri_only


@FAST
@given(graphs(max_n=6), st.sampled_from([F(1, 2), F(2, 3), F(3, 4)]))
def test_heavy_free_optimum_is_admissible_and_matches_rounding(g, a):
    if clique_number(g) >= 4:
        return
    opt = wt.heavy_free_optimum(wt.HeavyFreeInstance(g, a))
    assert wt.is_admissible(g, opt.witness.weights, a)
    assert opt.witness.total == opt.value
    assert opt.value == len(g.edges()) - (1 - a) * wt.triangle_cover_number(g)


# --- constructions ----------------------------------------------------------

@settings(max_examples=20, deadline=None)
@given(st.integers(2, 30), st.integers(2, 3), st.integers(0, 10 ** 6))
def test_two_part_join_edges_and_claims(n, p, seed):
    g, r = two_part_join(n, p, seed)
    assert r.edges >= n * n // 4
    assert r.clique_free_ok and r.alpha_ok and r.omega <= 2 * p
    again = verify_construction(g, r.s, r.alpha_budget)
    assert (again.omega, again.alpha, again.edges) == (r.omega, r.alpha, r.edges)
    assert to_graph6(two_part_join(n, p, seed)[0]) == to_graph6(g)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 25), st.integers(3, 5), st.integers(0, 1000))
def test_random_cliquefree_postcondition(n, t, seed):
    g, a = random_cliquefree_small_alpha(n, t, seed)
    assert clique_number(g) < t and independence_number(g) == a


# --- Ramsey-Turán -----------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(3, 7), st.integers(1, 12), st.integers(0, 99))
def test_heuristic_below_upper_and_certified(n, s, b, seed):
    q = rts.RTQuery(n, s, min(b, n))
    rec = rts.rt_heuristic_lower(q, seed=seed, iterations=5)
    assert rts.certify_record(rec)
    if rec.lower is not None:
        assert rec.lower <= rts.rt_upper_trivial(q)


# --- dependent random choice -----------------------------------------------

@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.integers(2, 10 ** 9), st.fractions(F(1, 100), F(99, 100)),
       st.fractions(F(1, 100), F(3)), st.integers(2, 6))
def test_drc_identities_hold(k, n, gamma, c, t):
    assert drc.drc_expectation_identities(drc.DRCParams(k, n, gamma, c, t)).holds


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([0.6, 0.75, 0.9]))
def test_drc_deletion_count(seed, density):
    host = drc.random_multipartite_host(2, 24, density, seed=seed % 7)
    p = drc.DRCParams(2, 24, F(1, 4), F(1), 2)
    try:
        out = drc.drc_run(host, p, seed=seed)
    except ValueError:
        return  # host misses the degree condition
    assert len(out.s) >= len(out.s_prime) - out.bad_count
    assert out.guarantee_ok


# --- regularity -------------------------------------------------------------

@st.composite
def cluster_graphs(draw):
    m = draw(st.integers(1, 7))
    d = [[F(0)] * m for _ in range(m)]
    flags = [[False] * m for _ in range(m)]
    for i, j in combinations(range(m), 2):
        d[i][j] = d[j][i] = draw(fractions01())
        flags[i][j] = flags[j][i] = draw(st.booleans())
    return reg.ClusterGraph.from_densities(d, F(1, 10), draw(fractions01()), flags)


@FAST
@given(cluster_graphs(), fractions01(), fractions01())
def test_heavy_subset_of_chubby(r, threshold, gamma):
    heavy = set(reg.detect_heavy_triangles(r, threshold, gamma))
    assert heavy <= set(reg.detect_chubby(r, threshold, gamma))
    for i, j in combinations(range(r.m), 2):
        assert r.has_edge(i, j) == (r.regular_flags[i][j] and r.densities[i][j] >= r.gamma)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(4, 8), st.sampled_from([F(1, 5), F(1, 4), F(1, 3)]))
def test_sampled_never_contradicts_exhaustive_regular(seed, size, eps):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    g = random_graph(2 * size, 0.5, rng)
    a, b = range(size), range(size, 2 * size)
    if reg.check_pair_regular(g, a, b, eps).regular:
        assert reg.check_pair_regular(g, a, b, eps, mode="sampled", samples=300, seed=seed).regular


def test_edge_decomposition_sums_on_ten_thousand_instances(rng):
    for _ in range(10 ** 4):
        n = int(rng.integers(2, 13))
        m = int(rng.integers(1, n + 1))
        g = random_graph(n, float(rng.random()), rng)
        part = reg.Equipartition.random(n, m, seed=int(rng.integers(2 ** 31)))
        d = [[F(0)] * m for _ in range(m)]
        flags = [[False] * m for _ in range(m)]
        for i, j in combinations(range(m), 2):
            d[i][j] = d[j][i] = F(int(rng.integers(0, 5)), 4)
            flags[i][j] = flags[j][i] = bool(rng.integers(0, 2))
        r = reg.ClusterGraph.from_densities(d, F(1, 10), F(1, 4), flags)
        dec = reg.edge_decomposition(g, part, r)
        assert dec.cluster_part + dec.residual_part == g.num_edges()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 5), st.integers(2, 5))
def test_residual_bound_covers_premise_instances(seed, m, size):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    gamma, eps = F(1, 2), F(1, 10)
    n = m * size
    edges = []
    for i in range(m):
        block = range(i * size, (i + 1) * size)
        edges += [(u, v) for u, v in combinations(block, 2) if rng.random() < 0.5]
    for i, j in combinations(range(m), 2):
        if rng.random() < 0.5:  # complete pair: regular with density 1
            edges += [(u, v) for u in range(i * size, (i + 1) * size) for v in range(j * size, (j + 1) * size)]
        elif size * size >= 5:  # one cross edge: density below gamma/2
            edges.append((i * size, j * size))
    g = Graph.from_edges(n, edges)
    part = reg.Equipartition.contiguous(n, m)
    r = reg.build_cluster_graph(g, part, eps, gamma)
    dec = reg.edge_decomposition(g, part, r)
    assert dec.residual_part <= reg.residual_edge_bound(n, m, eps, gamma).exact_sum


@FAST
@given(st.fractions(F(1, 1000), F(49, 100)), st.fractions(F(1, 2), F(1)), st.fractions(F(1, 2), F(1)))
def test_slicing_params_properties(eps, gamma, alpha):
    e2, g2 = reg.slicing_params(eps, gamma, alpha)
    assert e2 >= 2 * eps and e2 >= eps / alpha
    assert e2 == 2 * eps or e2 == eps / alpha
    assert g2 == gamma - eps
