import math
from fractions import Fraction as F
from itertools import combinations

import pytest

from extremal_lab import drc
from extremal_lab.errors import PreconditionError
from extremal_lab.graph import Graph

# Host and parameters fixed by a pre-registered oracle run: seed 0, 200 trials,
# mean(|S'| - X) = 30.855, SE = 0.3046, bound = 8.
PINNED_HOST = dict(k=2, n=64, density=0.7, seed=0)
PINNED_PARAMS = drc.DRCParams(2, 64, F(1, 2), F(2, 3), 2)


def test_exponent_examples():
    assert drc.drc_exponent_a(drc.DRCParams(3, 100, F(1, 2), F(1, 5), 3)) == 80
    assert drc.drc_exponent_a(drc.DRCParams(4, 100, F(1, 2), F(1, 5), 3)) == 120
    assert drc.drc_exponent_a(drc.DRCParams(2, 100, F(1, 2), F(1), 2)) == 6


def test_sample_size_examples():
    q_real, q = drc.drc_sample_size_q(drc.DRCParams(3, 2 ** 20, F(1, 2), F(1, 5), 3))
    assert math.isclose(q_real, 1.0, rel_tol=1e-12) and q == 1
    q_real, q = drc.drc_sample_size_q(drc.DRCParams(2, 2 ** 10, F(1, 2), F(1), 2))
    assert math.isclose(q_real, 5.0, rel_tol=1e-12) and q == 5
    q_real, q = drc.drc_sample_size_q(drc.DRCParams(2, 1000, F(1, 3), F(1, 2), 2))
    assert q >= q_real and q == math.ceil(q_real)


def test_identities_and_bound():
    rep = drc.drc_expectation_identities(drc.DRCParams(3, 10 ** 4, F(1, 2), F(1, 5), 3))
    assert rep.holds
    assert math.isclose(rep.bound, 0.5 * 10 ** 3.6, rel_tol=1e-12)
    for n in (2, 3, 10, 1000):
        for c in (F(1, 10), F(1, 2), F(1)):
            assert drc.drc_expectation_identities(drc.DRCParams(2, n, F(1, 2), c, 2)).halving_ok


def test_param_validation():
    for bad in ((1, 10, F(1, 2), F(1), 2), (2, 10, F(1), F(1), 2), (2, 10, F(1, 2), F(0), 2), (2, 10, F(1, 2), F(1), 1)):
        with pytest.raises(PreconditionError):
            drc.DRCParams(*bad)


def test_threshold_increases_with_gamma():
    vals = [drc.tuple_threshold(drc.DRCParams(3, 500, F(g, 10), F(1, 2), 2)) for g in range(1, 10)]
    assert vals == sorted(vals) and len(set(vals)) == len(vals)


def test_complete_host_keeps_everything():
    host = drc.complete_multipartite_host(3, 8)
    p = drc.DRCParams(3, 8, F(1, 2), F(1), 2)
    with pytest.warns(UserWarning, match="below 4/log2"):
        out = drc.drc_run(host, p, seed=5)
    assert out.s_prime == frozenset(host.parts[-1]) and out.bad_count == 0 and out.s == out.s_prime
    mc = drc.drc_monte_carlo(host, p, trials=5)
    assert mc.mean == 8 and mc.passes


def test_degree_precondition_names_vertex():
    host = drc.complete_multipartite_host(2, 6)
    rows = list(host.graph.rows)
    v = host.parts[1][0]
    for u in host.parts[0]:
        rows[u] &= ~(1 << v)
    rows[v] = 0
    bad = drc.Host(Graph._trusted(12, rows), host.parts)
    with pytest.raises(PreconditionError, match=f"vertex {v}"):
        drc.drc_run(bad, drc.DRCParams(2, 6, F(1, 2), F(1), 2))


def test_random_host_run_is_verified():
    host = drc.random_multipartite_host(2, 20, 0.5, seed=1)
    p = drc.DRCParams(2, 20, F(1, 4), F(1), 2)
    out = drc.drc_run(host, p, seed=3)
    assert out.verified and out.guarantee_ok
    assert len(out.s) >= len(out.s_prime) - out.bad_count
    nbr = [host.graph.rows[v] & host.masks()[0] for v in range(host.graph.n)]
    for a, b in combinations(sorted(out.s), 2):
        assert (nbr[a] & nbr[b]).bit_count() >= out.threshold


def test_single_trial_reproducible():
    host = drc.random_multipartite_host(**PINNED_HOST)
    a = drc.drc_monte_carlo(host, PINNED_PARAMS, trials=1, seed=9)
    b = drc.drc_monte_carlo(host, PINNED_PARAMS, trials=1, seed=9)
    assert a.values == b.values
    assert drc.drc_run(host, PINNED_PARAMS, seed=4) == drc.drc_run(host, PINNED_PARAMS, seed=4)


def test_monte_carlo_independent_of_worker_count():
    host = drc.random_multipartite_host(**PINNED_HOST)
    one = drc.drc_monte_carlo(host, PINNED_PARAMS, trials=12, seed=2, workers=1)
    two = drc.drc_monte_carlo(host, PINNED_PARAMS, trials=12, seed=2, workers=2)
    assert one.values == two.values


def test_small_c_warns():
    host = drc.complete_multipartite_host(2, 64)
    with pytest.warns(UserWarning):
        drc.drc_run(host, drc.DRCParams(2, 64, F(1, 2), F(1, 2), 2))
