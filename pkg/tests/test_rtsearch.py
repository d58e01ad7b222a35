import json

import pytest

from extremal_lab import rtsearch as rts
from extremal_lab.canon import are_isomorphic
from extremal_lab.constructions import turan_edges, turan_graph
from extremal_lab.errors import BudgetExceeded, PreconditionError
from extremal_lab.graph import complete_multipartite, cycle_graph, join


def q(n, s, b):
    return rts.RTQuery(n, s, b)


def test_query_validation():
    for bad in ((0, 3, 1), (5, 2, 1), (5, 3, 0)):
        with pytest.raises(PreconditionError):
            rts.RTQuery(*bad)


@pytest.mark.parametrize("query,value,witness", [
    ((5, 3, 2), 5, cycle_graph(5)),
    ((6, 3, 3), 9, complete_multipartite([3, 3])),
    ((6, 4, 2), 12, turan_graph(6, 3)),
])
def test_exact_examples(query, value, witness):
    rec = rts.rt_exact(q(*query))
    assert rec.value == value == rts.rt_naive(*query)
    assert rts.certify_record(rec)
    assert are_isomorphic(rec.witness, witness)


def test_exact_refuses_over_limit():
    with pytest.raises(BudgetExceeded):
        rts.rt_exact(q(11, 4, 3))


def test_infeasible_query():
    rec = rts.rt_exact(q(6, 3, 2))  # R(3,3) = 6
    assert rec.value is None and rec.witness is None and rts.certify_record(rec)
    assert rts.rt_naive(6, 3, 2) is None


def test_upper_examples():
    assert rts.rt_upper_trivial(q(6, 4, 6)) == 12 == turan_edges(6, 3)
    assert rts.rt_upper_trivial(q(5, 3, 2)) >= 5


def test_heuristic_with_seed_construction():
    jc = join([cycle_graph(5), cycle_graph(5)])
    history = []
    rec = rts.rt_heuristic_lower(q(10, 9, 2), seeds=[jc], history=history)
    assert rec.lower >= 35 and rts.certify_record(rec)
    assert history == sorted(history)
    assert rec.lower <= rec.upper


@pytest.mark.parametrize("n,s", [(7, 3), (9, 4), (12, 5)])
def test_heuristic_reaches_turan_when_alpha_vacuous(n, s):
    rec = rts.rt_heuristic_lower(q(n, s, n))
    assert rec.lower == turan_edges(n, s - 1) == rec.upper and rec.value == rec.lower


def test_record_json_round_trip():
    rec = rts.rt_exact(q(6, 4, 2))
    back = rts.RTRecord.from_json(json.dumps(rec.to_json()))
    assert back.to_json() == rec.to_json()


def test_exact_beyond_naive_range():
    rec = rts.rt_exact(q(8, 3, 3))
    assert rts.certify_record(rec) and rec.value <= rts.rt_upper_trivial(q(8, 3, 3))
    # the Wagner graph C8(1,4) is triangle-free with alpha 3 and 12 edges
    assert rec.value >= 12


def test_grid_n6_matches_naive_and_is_monotone():
    n = 6
    for s in range(3, 7):
        row = []
        for b in range(1, n + 1):
            rec = rts.rt_exact(q(n, s, b))
            assert rec.value == rts.rt_naive(n, s, b)
            assert rts.certify_record(rec)
            if rec.value is not None:
                assert rec.value <= rts.rt_upper_trivial(q(n, s, b))
            row.append(-1 if rec.value is None else rec.value)
        assert row == sorted(row)
