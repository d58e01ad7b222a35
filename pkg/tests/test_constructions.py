import json
from fractions import Fraction as F

import pytest

from extremal_lab import constructions as c
from extremal_lab.errors import PreconditionError
from extremal_lab.graph import (
    clique_number,
    complete_graph,
    cycle_graph,
    empty_graph,
    find_clique,
    independence_number,
    join,
    to_graph6,
)


def test_turan_examples():
    t73 = c.turan_graph(7, 3)
    assert c.turan_part_sizes(7, 3) == [3, 2, 2]
    assert t73.num_edges() == 3 * 2 + 3 * 2 + 2 * 2 == c.turan_edges(7, 3)
    assert c.turan_graph(5, 1).num_edges() == 0
    t63 = c.turan_graph(6, 3)
    assert t63.num_edges() == 12 and independence_number(t63) == 2
    for bad in ((3, 0), (3, 4)):
        with pytest.raises(PreconditionError):
            c.turan_graph(*bad)


def test_random_cliquefree_examples():
    g, a = c.random_cliquefree_small_alpha(5, 3)
    assert a == 2 and find_clique(g, 3) is None
    for n in (4, 9, 17, 30):
        g, a = c.random_cliquefree_small_alpha(n, 3, seed=n)
        assert find_clique(g, 3) is None and independence_number(g) == a
    g, a = c.random_cliquefree_small_alpha(50, 4, seed=0)
    assert (a, g.num_edges()) == (11, 416)  # pinned seed-0 output
    assert clique_number(g) <= 3


def test_verify_construction_examples():
    r = c.verify_construction(c.turan_graph(6, 3), 4, 2)
    assert r.clique_free_ok and r.alpha_ok and r.edges == 12 and r.omega == 3
    assert not c.verify_construction(complete_graph(5), 5, 1).clique_free_ok
    r = c.verify_construction(join([cycle_graph(5)] * 2), 9, 2)
    assert r.clique_free_ok and r.alpha_ok and r.edges == 35


def test_two_part_join_of_c5s():
    g, r = c.two_part_join(10, 2, halves=[cycle_graph(5), cycle_graph(5)])
    assert (r.omega, r.alpha, r.edges) == (4, 2, 35)
    for s in (9, 10, 11):
        assert c.verify_construction(g, s, 2).clique_free_ok


def test_three_part_join_of_c5s_and_empty_parts():
    g, r = c.three_part_join(15, 2, parts=[cycle_graph(5)] * 3)
    assert (r.omega, r.alpha, r.edges) == (6, 2, 90) and r.clique_free_ok
    g, r = c.three_part_join(9, 5, parts=[empty_graph(2), empty_graph(3), empty_graph(4)])
    assert r.edges == 2 * 3 + 2 * 4 + 3 * 4
    g, r = c.three_part_join(12, 5, parts=[empty_graph(4)] * 3)
    assert r.edges == 12 * 12 // 3


def test_three_part_join_rejects_bad_part():
    with pytest.raises(PreconditionError):
        c.three_part_join(15, 2, parts=[cycle_graph(5), cycle_graph(5), complete_graph(5)])
    with pytest.raises(PreconditionError):
        c.three_part_join(15, 4)


@pytest.mark.parametrize("n", [10, 15, 20, 26])
def test_conjectured_k9(n):
    g, r = c.conjectured_k9(n, seed=1)
    big, small = c.largest_remainder(n, [F(3, 5), F(2, 5)])
    assert r.clique_free_ok and r.alpha_ok and r.omega <= 8
    assert r.edges >= big * small
    assert r.target_edges == F(3, 10) * n * n


@pytest.mark.parametrize("n", [13, 20, 26])
def test_conjectured_k12(n):
    g, r = c.conjectured_k12(n, seed=2)
    big, small = c.largest_remainder(n, [F(8, 13), F(5, 13)])
    assert r.clique_free_ok and r.alpha_ok and r.omega <= 11
    assert r.edges >= big * small
    assert r.target_edges == F(4, 13) * n * n
    if n % 13 == 0:
        assert big * small == F(40, 169) * n * n


def test_largest_remainder():
    assert c.largest_remainder(10, [F(3, 5), F(2, 5)]) == [6, 4]
    assert sum(c.largest_remainder(17, [F(1, 3)] * 3)) == 17


def test_spec_json_and_determinism():
    text = json.dumps({"kind": "conjectured_k9", "n": 20, "seed": 4})
    spec = c.ConstructionSpec.from_json(text)
    g1, r1 = c.build(spec)
    g2, r2 = c.build(c.ConstructionSpec.from_json(text))
    assert to_graph6(g1) == to_graph6(g2) and r1 == r2
    out = c.construction_json(g1, r1)
    assert out["graph6"] == to_graph6(g1) and out["report"]["omega"] == r1.omega


def test_spec_validation():
    with pytest.raises(PreconditionError):
        c.ConstructionSpec("nonsense", 10)
    with pytest.raises(PreconditionError):
        c.ConstructionSpec("turan", 10, part_ratios=(F(1, 2), F(1, 3)))


@pytest.mark.parametrize("kind,n", [("turan", 12), ("two_part_join", 14), ("three_part_join", 18),
                                    ("conjectured_k9", 15), ("conjectured_k12", 13)])
def test_every_kind_passes_its_own_claims(kind, n):
    for seed in range(3):
        g, r = c.build(c.ConstructionSpec(kind, n, seed=seed))
        again = c.verify_construction(g, r.s, r.alpha_budget)
        assert r.clique_free_ok and r.alpha_ok
        assert (again.omega, again.alpha, again.edges) == (r.omega, r.alpha, r.edges)
