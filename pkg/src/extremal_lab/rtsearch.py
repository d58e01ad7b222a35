"""Ramsey-Turán numbers at desk scale.

``RT(n, K_s, b)`` is the largest edge count of an ``n``-vertex ``K_s``-free
graph with independence number at most ``b`` (``None`` when no such graph
exists). The exact search runs orderly generation over that hereditary class
with an edge-density floor taken from a heuristic incumbent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import labeled
from .constructions import random_cliquefree_small_alpha, turan_edges, turan_graph, verify_construction
from .errors import BudgetExceeded, PreconditionError
from .generate import ClassSpec, EdgeFloor, generate
from .graph import (
    Graph,
    empty_graph,
    from_graph6,
    independence_number,
    max_clique_mask,
    maximum_independent_set,
    to_graph6,
)
from .ramsey import RamseyTable, recursive_upper

EXACT_LIMIT = 10


@dataclass(frozen=True)
class RTQuery:
    n: int
    s: int
    alpha_budget: int

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("n must be at least 1")
        if self.s < 3:
            raise PreconditionError("s must be at least 3")
        if self.alpha_budget < 1:
            raise PreconditionError("alpha_budget must be at least 1")


@dataclass(frozen=True)
class RTRecord:
    query: RTQuery
    lower: int | None  # edges of the witness; None when no witness is known
    upper: int | None
    witness: Graph | None
    method: str  # exact | heuristic

    @property
    def value(self) -> int | None:
        """The exact value, or None when infeasible or unresolved."""
        if self.method == "exact":
            return self.lower
        return self.lower if self.lower is not None and self.lower == self.upper else None

    @property
    def feasible(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        q = self.query
        return {"n": q.n, "s": q.s, "alpha_budget": q.alpha_budget, "lower": self.lower, "upper": self.upper,
                "value": self.value, "witness_graph6": None if self.witness is None else to_graph6(self.witness),
                "method": self.method}

    @classmethod
    def from_json(cls, d: dict | str) -> "RTRecord":
        if isinstance(d, str):
            d = json.loads(d)
        w = d.get("witness_graph6")
        return cls(RTQuery(d["n"], d["s"], d["alpha_budget"]), d["lower"], d["upper"],
                   None if w is None else from_graph6(w), d["method"])


def rt_upper_trivial(q: RTQuery, table: RamseyTable | None = None) -> int:
    """min(e(T(n, s-1)), floor(n (R(s-1, b+1) - 1) / 2)).

    Every neighbourhood of a K_s-free graph with independence number at most
    ``b`` is K_{s-1}-free with independence number at most ``b``, so it has
    fewer than R(s-1, b+1) vertices. R comes from ``table`` when exact there,
    otherwise from the recursive bound R(a, b) <= R(a-1, b) + R(a, b-1).
    """
    n, s, b = q.n, q.s, q.alpha_budget
    turan = turan_edges(n, s - 1) if s - 1 <= n else comb(n, 2)
    known = None if table is None else table.exact
    r = recursive_upper(s - 1, b + 1, known)
    return min(turan, n * (r - 1) // 2)


# ---------------------------------------------------------------------------
# heuristic lower bound

def _creates_clique(rows: list[int], u: int, v: int, s: int) -> bool:
    common = rows[u] & rows[v]
    if s - 2 <= 0:
        return True
    return max_clique_mask(rows, common, stop_at=s - 2).bit_count() >= s - 2


def _add(rows: list[int], u: int, v: int) -> None:
    rows[u] |= 1 << v
    rows[v] |= 1 << u


def _saturate(rows: list[int], s: int, order: list[tuple[int, int]]) -> None:
    for u, v in order:
        if not rows[u] >> v & 1 and not _creates_clique(rows, u, v, s):
            _add(rows, u, v)


def _repair_alpha(rows: list[int], s: int, b: int, rng: np.random.Generator) -> bool:
    """Add edges inside maximum independent sets until alpha <= b; False if stuck."""
    n = len(rows)
    while True:
        g = Graph._trusted(n, rows)
        indep = sorted(maximum_independent_set(g))
        if len(indep) <= b:
            return True
        pairs = list(combinations(indep, 2))
        rng.shuffle(pairs)
        for u, v in pairs:
            if not _creates_clique(rows, u, v, s):
                _add(rows, u, v)
                break
        else:
            return False


def _seed_graphs(q: RTQuery, seed: int) -> list[Graph]:
    n, s = q.n, q.s
    seeds = []
    for r in range(min(s - 1, n), 0, -1):
        seeds.append(turan_graph(n, r))
    seeds.append(random_cliquefree_small_alpha(n, s, seed)[0] if n >= 1 else empty_graph(0))
    return seeds


def rt_heuristic_lower(q: RTQuery, seed: int = 0, iterations: int = 50, seeds: list[Graph] | None = None,
                       history: list[int] | None = None) -> RTRecord:
    """A feasible witness from construction seeds improved by local search.

    Each iteration takes a starting graph (a supplied seed, a Turán graph, a
    random clique-free graph or the empty graph), repairs its independence
    number by adding edges inside maximum independent sets, then adds every
    further edge that keeps it K_s-free (adding edges never raises alpha).
    The best edge count so far is recorded in ``history`` when given; it is
    nondecreasing by construction.
    """
    n, s, b = q.n, q.s, q.alpha_budget
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, n, s, b])))
    pool = list(seeds or []) + _seed_graphs(q, seed) + [empty_graph(n)]
    for g in pool:
        if g.n != n:
            raise PreconditionError(f"seed graph has {g.n} vertices, expected {n}")
    pairs = [(u, v) for v in range(n) for u in range(v)]
    best: Graph | None = None
    upper = rt_upper_trivial(q)
    for it in range(max(iterations, len(pool))):
        start = pool[it] if it < len(pool) else pool[int(rng.integers(len(pool)))]
        if max_clique_mask(start.rows, start.full_mask, stop_at=s).bit_count() >= s:
            continue
        rows = list(start.rows)
        if not _repair_alpha(rows, s, b, rng):
            continue
        order = list(pairs)
        rng.shuffle(order)
        _saturate(rows, s, order)
        g = Graph._trusted(n, rows)
        if best is None or g.num_edges() > best.num_edges():
            best = g
        if history is not None:
            history.append(best.num_edges())
        if best.num_edges() == upper:
            break
    return RTRecord(q, None if best is None else best.num_edges(), upper, best, "heuristic")


# ---------------------------------------------------------------------------
# exact search

def rt_exact(q: RTQuery, workers: int = 1, limit: int = EXACT_LIMIT, seed: int = 0) -> RTRecord:
    """Exact RT(n, K_s, b) with a witness, or value None if no graph qualifies."""
    if q.n > limit:
        raise BudgetExceeded(f"n={q.n} is over the exact-search limit {limit}; use rt_heuristic_lower")
    n, s, b = q.n, q.s, q.alpha_budget
    upper = rt_upper_trivial(q)
    incumbent = rt_heuristic_lower(q, seed=seed, iterations=20)
    if incumbent.witness is not None and incumbent.lower == upper:
        return RTRecord(q, upper, upper, incumbent.witness, "exact")
    floor = None if incumbent.witness is None else EdgeFloor(incumbent.lower, n)
    spec = ClassSpec(forbid_clique=s, forbid_indep=b + 1 if b < n else None, floor=floor)
    gen = generate(spec, n, workers=workers)
    level = gen.levels[n] if len(gen.levels) > n else []
    if not level:
        if incumbent.witness is not None:
            raise AssertionError("generation lost a feasible incumbent")
        return RTRecord(q, None, upper, None, "exact")
    best = max(level, key=lambda g: g.num_edges())  # first maximum in certificate order
    e = best.num_edges()
    return RTRecord(q, e, e, best, "exact")


# ---------------------------------------------------------------------------
# independent oracle: every labelled graph

def _grid_chunk(n: int, lo: int, hi: int) -> np.ndarray:
    codes = labeled.code_range(lo, hi)
    omega, alpha = labeled.omega_alpha(n, codes)
    edges = labeled.edge_counts(n, codes)
    table = np.full((n + 1, n + 1), -1, dtype=np.int64)
    np.maximum.at(table, (omega.astype(np.int64), alpha.astype(np.int64)), edges)
    return table


@lru_cache(maxsize=None)
def naive_edge_table(n: int) -> tuple[tuple[int, ...], ...]:
    """table[w][a] = max edges over labelled graphs with clique number w and independence number a (-1 if none)."""
    if n > 7:
        raise BudgetExceeded("the labelled enumerator is limited to n <= 7")
    parts = labeled.map_chunks(_grid_chunk, n, workers=1)
    table = np.max(np.stack(parts), axis=0)
    return tuple(tuple(int(x) for x in row) for row in table)


def rt_naive(n: int, s: int, b: int) -> int | None:
    table = naive_edge_table(n)
    best = -1
    for w in range(min(s, n + 1)):
        for a in range(min(b, n) + 1):
            best = max(best, table[w][a])
    return None if best < 0 else best


def certify_record(rec: RTRecord) -> bool:
    """The witness is K_s-free, within the alpha budget, and has ``lower`` edges."""
    if rec.witness is None:
        return rec.lower is None
    rep = verify_construction(rec.witness, rec.query.s, rec.query.alpha_budget)
    return rep.clique_free_ok and rep.alpha_ok and rep.edges == rec.lower
