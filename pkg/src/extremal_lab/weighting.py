"""Clique edge-weightings, weighted Turán bounds and heavy-triangle-free optima.

All weights are exact ``Fraction`` values. The exhaustive scans over labelled
graphs work on integer weights scaled by a common denominator, which is the
same exact arithmetic without per-graph ``Fraction`` objects.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Mapping

import numpy as np

from . import labeled
from .errors import BudgetExceeded, PreconditionError
from .generate import ClassSpec, generate
from .graph import (
    DEFAULT_EXACT_LIMIT,
    Graph,
    complete_multipartite,
    find_clique,
    iter_bits,
    max_clique_mask,
    to_graph6,
    triangles,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class WeightAssignment:
    weights: Mapping[Edge, Fraction]
    total: Fraction

    def __post_init__(self):
        if sum(self.weights.values(), Fraction(0)) != self.total:
            raise PreconditionError("total does not match the sum of the weights")

    @classmethod
    def of(cls, weights: Mapping[Edge, Fraction]) -> "WeightAssignment":
        return cls(dict(weights), sum(weights.values(), Fraction(0)))

    def values(self) -> set[Fraction]:
        return set(self.weights.values())


def edge_clique_orders(g: Graph) -> dict[Edge, int]:
    """Order of the largest clique through each edge."""
    cache: dict[int, int] = {}
    out = {}
    for u, v in g.edges():
        common = g.rows[u] & g.rows[v]
        if common not in cache:
            cache[common] = max_clique_mask(g.rows, common).bit_count()
        out[(u, v)] = 2 + cache[common]
    return out


def standard_weight(r: int) -> Fraction:
    return Fraction(r, 2 * (r - 1))


def standard_weighting(g: Graph) -> WeightAssignment:
    """w(e) = r / (2(r-1)) with r the largest clique order through e."""
    return WeightAssignment.of({e: standard_weight(r) for e, r in edge_clique_orders(g).items()})


@dataclass(frozen=True)
class QuarterBoundReport:
    total: Fraction
    bound: Fraction
    holds: bool


def verify_quarter_bound(g: Graph) -> QuarterBoundReport:
    total = standard_weighting(g).total
    bound = Fraction(g.n * g.n, 4)
    return QuarterBoundReport(total, bound, total <= bound)


def chubby_weight(r: int) -> Fraction:
    if r >= 4:
        return Fraction(2, 3)
    if r == 3:
        return Fraction(4, 5)
    return Fraction(1)


def chubby_weighting_k5free(g: Graph) -> WeightAssignment:
    """2/3 on edges in a K4, 4/5 on edges in a triangle but no K4, 1 elsewhere."""
    k5 = find_clique(g, 5)
    if k5 is not None:
        raise PreconditionError(f"graph contains a K5 on {sorted(k5)}")
    return WeightAssignment.of({e: chubby_weight(r) for e, r in edge_clique_orders(g).items()})


# ---------------------------------------------------------------------------
# minimum triangle edge cover


def _greedy_packing(uncovered: int, tri_edges: list[tuple[int, int, int]]) -> int:
    used = 0
    count = 0
    for t in iter_bits(uncovered):
        a, b, c = tri_edges[t]
        m = (1 << a) | (1 << b) | (1 << c)
        if not used & m:
            used |= m
            count += 1
    return count


def min_triangle_edge_cover(g: Graph, limit: int | None = None) -> frozenset:
    """A smallest edge set meeting every triangle (branch and bound)."""
    limit = DEFAULT_EXACT_LIMIT if limit is None else limit
    if g.n > limit:
        raise BudgetExceeded(f"n={g.n} exceeds the exact-search limit {limit}")
    tris = triangles(g)
    if not tris:
        return frozenset()
    edges = g.edges()
    index = {e: i for i, e in enumerate(edges)}
    tri_edges = [(index[(a, b)], index[(a, c)], index[(b, c)]) for a, b, c in tris]
    hits = [0] * len(edges)
    for t, es in enumerate(tri_edges):
        for e in es:
            hits[e] |= 1 << t
    all_tris = (1 << len(tris)) - 1

    # greedy incumbent: repeatedly take the edge meeting most uncovered triangles
    best: list[int] = []
    left = all_tris
    while left:
        e = max(range(len(edges)), key=lambda i: ((hits[i] & left).bit_count(), -i))
        best.append(e)
        left &= ~hits[e]
    best_box = [best]

    def rec(uncovered: int, chosen: list[int], banned: int) -> None:
        if not uncovered:
            if len(chosen) < len(best_box[0]):
                best_box[0] = list(chosen)
            return
        if len(chosen) + _greedy_packing(uncovered, tri_edges) >= len(best_box[0]):
            return
        low = uncovered & -uncovered
        t = low.bit_length() - 1
        options = sorted((e for e in tri_edges[t] if not banned >> e & 1),
                         key=lambda e: (-(hits[e] & uncovered).bit_count(), e))
        for e in options:
            chosen.append(e)
            rec(uncovered & ~hits[e], chosen, banned)
            chosen.pop()
            # later branches may assume e is not in the cover
            banned |= 1 << e

    rec(all_tris, [], 0)
    cover = frozenset(edges[e] for e in best_box[0])
    for a, b, c in tris:
        assert (a, b) in cover or (a, c) in cover or (b, c) in cover
    return cover


def triangle_cover_number(g: Graph) -> int:
    return len(min_triangle_edge_cover(g))


# ---------------------------------------------------------------------------
# heavy-triangle-free optimum for a fixed K4-free graph


@dataclass(frozen=True)
class HeavyFreeInstance:
    g: Graph
    a: Fraction

    def __post_init__(self):
        a = Fraction(self.a)
        object.__setattr__(self, "a", a)
        if not 0 <= a <= 1:
            raise PreconditionError(f"threshold a={a} outside [0, 1]")
        k4 = find_clique(self.g, 4)
        if k4 is not None:
            raise PreconditionError(f"graph is not K4-free: K4 on {sorted(k4)}")


@dataclass(frozen=True)
class HeavyFreeOptimum:
    value: Fraction
    witness: WeightAssignment
    cover: frozenset


def is_admissible(g: Graph, weights: Mapping[Edge, Fraction], a: Fraction) -> bool:
    """No triangle has all three weights strictly above ``a``."""
    for x, y, z in triangles(g):
        if weights[(x, y)] > a and weights[(x, z)] > a and weights[(y, z)] > a:
            return False
    return True


def heavy_free_optimum(inst: HeavyFreeInstance) -> HeavyFreeOptimum:
    """max w(G) over weightings E -> [0,1] with no a-heavy triangle.

    Edges of weight at most ``a`` must meet every triangle, so the optimum is
    e(G) - (1 - a) * tau, attained by putting ``a`` on a minimum triangle edge
    cover and 1 everywhere else.
    """
    g, a = inst.g, inst.a
    cover = min_triangle_edge_cover(g)
    weights = {e: (a if e in cover else Fraction(1)) for e in g.edges()}
    witness = WeightAssignment.of(weights)
    value = g.num_edges() - (1 - a) * len(cover)
    assert witness.total == value and is_admissible(g, weights, a)
    return HeavyFreeOptimum(value, witness, cover)


def brute_force_heavy_free(g: Graph, a: Fraction) -> Fraction:
    """Oracle: best admissible total over all {a, 1}-valued weightings."""
    a = Fraction(a)
    edges = g.edges()
    index = {e: i for i, e in enumerate(edges)}
    tri_masks = [(1 << index[(x, y)]) | (1 << index[(x, z)]) | (1 << index[(y, z)]) for x, y, z in triangles(g)]
    best = None
    m = len(edges)
    for low in range(1 << m):  # bit set = edge carries weight a
        if all(low & tm for tm in tri_masks):
            value = (m - low.bit_count()) + a * low.bit_count()
            if best is None or value > best:
                best = value
    return Fraction(best)


@dataclass
class ScanResult:
    n: int
    a: Fraction
    value: Fraction
    witness: Graph
    exact: bool
    method: str
    graphs_examined: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a": str(self.a),
            "max_value_num": self.value.numerator,
            "max_value_den": self.value.denominator,
            "max_value": float(self.value),
            "witness_graph6": to_graph6(self.witness),
            "exact": self.exact,
            "method": self.method,
        }


LABELED_HEAVY_FREE_LIMIT = 5
EXHAUSTIVE_HEAVY_FREE_LIMIT = 8


def _k4free_candidates(n: int) -> Iterable[Graph]:
    if n <= LABELED_HEAVY_FREE_LIMIT:
        for g in labeled.iter_labeled_graphs(n):
            if find_clique(g, 4) is None:
                yield g
    else:
        yield from generate(ClassSpec(forbid_clique=4), n).levels[n]


def extremal_heavy_free_scan(n: int, a: Fraction, seed: int = 0, iterations: int = 2000) -> ScanResult:
    """Maximum heavy-free optimum over all K4-free graphs on ``n`` vertices.

    Exact for ``n <= 8`` (labelled graphs up to 5 vertices, isomorphism-class
    representatives above). Larger ``n`` falls back to a seeded local search
    and the result is flagged as a heuristic lower bound.
    """
    a = Fraction(a)
    if n <= EXHAUSTIVE_HEAVY_FREE_LIMIT:
        best_val, best_g, count = None, None, 0
        for g in _k4free_candidates(n):
            count += 1
            val = heavy_free_optimum(HeavyFreeInstance(g, a)).value
            if best_val is None or val > best_val:
                best_val, best_g = val, g
        method = "exhaustive-labeled" if n <= LABELED_HEAVY_FREE_LIMIT else "exhaustive-canonical"
        return ScanResult(n, a, best_val, best_g, True, method, count)
    return _heavy_free_local_search(n, a, seed, iterations)


def _heavy_free_value(g: Graph, a: Fraction) -> Fraction:
    return g.num_edges() - (1 - a) * triangle_cover_number(g)


def _heavy_free_local_search(n: int, a: Fraction, seed: int, iterations: int) -> ScanResult:
    from .constructions import turan_graph

    rng = random.Random(seed)
    seeds = [turan_graph(n, 2), turan_graph(n, 3)]
    best_g = max(seeds, key=lambda g: _heavy_free_value(g, a))
    best_val = _heavy_free_value(best_g, a)
    cur, cur_val = best_g, best_val
    pairs = list(combinations(range(n), 2))
    for _ in range(iterations):
        u, v = rng.choice(pairs)
        rows = list(cur.rows)
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
        cand = Graph._trusted(n, rows)
        if cand.has_edge(u, v) and max_clique_mask(rows, rows[u] & rows[v], stop_at=2).bit_count() >= 2:
            continue
        val = _heavy_free_value(cand, a)
        if val >= cur_val:
            cur, cur_val = cand, val
            if val > best_val:
                best_g, best_val = cand, val
    return ScanResult(n, a, best_val, best_g, False, "heuristic-local-search", iterations)


# ---------------------------------------------------------------------------
# exhaustive scans over all labelled graphs (vectorised)


def _scaled_table(n: int, weight) -> tuple[int, np.ndarray]:
    ws = [weight(r) for r in range(2, max(n, 2) + 1)]
    den = lcm(*[w.denominator for w in ws]) if ws else 1
    table = np.zeros(max(n, 2) + 1, dtype=np.int64)
    for r, w in zip(range(2, max(n, 2) + 1), ws):
        table[r] = w.numerator * (den // w.denominator)
    return den, table


def _quarter_chunk(n: int, lo: int, hi: int):
    codes = labeled.code_range(lo, hi)
    den, table = _scaled_table(n, standard_weight)
    orders, _ = labeled.clique_orders(n, codes)
    totals = table[orders].sum(axis=0) if len(orders) else np.zeros(len(codes), dtype=np.int64)
    bound = den * n * n  # compare 4 * total with den * n^2
    lhs = 4 * totals
    violations = int((lhs > bound).sum())
    equalities = int((lhs == bound).sum())
    arg = int(np.argmax(totals))
    return violations, equalities, int(totals[arg]), lo + arg, hi - lo


@dataclass
class ExhaustiveQuarterReport:
    n: int
    graphs: int
    violations: int
    equalities: int
    max_total: Fraction
    argmax: Graph
    bound: Fraction = field(init=False)

    def __post_init__(self):
        self.bound = Fraction(self.n * self.n, 4)


def exhaustive_quarter_bound(n: int, workers: int | None = None) -> ExhaustiveQuarterReport:
    """Check w(G) <= n^2/4 for every labelled graph on ``n`` vertices."""
    den, _ = _scaled_table(n, standard_weight)
    parts = labeled.map_chunks(_quarter_chunk, n, workers)
    violations = sum(p[0] for p in parts)
    equalities = sum(p[1] for p in parts)
    graphs = sum(p[4] for p in parts)
    best = max(parts, key=lambda p: (p[2], -p[3]))
    return ExhaustiveQuarterReport(n, graphs, violations, equalities, Fraction(best[2], den),
                                   labeled.graph_from_code(n, best[3]))


def _chubby_chunk(n: int, lo: int, hi: int):
    codes = labeled.code_range(lo, hi)
    den, table = _scaled_table(n, chubby_weight)
    orders, omega = labeled.clique_orders(n, codes)
    totals = table[orders].sum(axis=0) if len(orders) else np.zeros(len(codes), dtype=np.int64)
    totals = np.where(omega <= 4, totals, -1)
    arg = int(np.argmax(totals))
    return int(totals[arg]), lo + arg, int((omega <= 4).sum())


@dataclass
class ChubbyScanResult:
    n: int
    k5free_graphs: int
    max_total: Fraction
    argmax: Graph


def exhaustive_chubby_scan(n: int, workers: int | None = None) -> ChubbyScanResult:
    """Largest K5-free chubby weighting total over all labelled graphs on ``n`` vertices."""
    den, _ = _scaled_table(n, chubby_weight)
    parts = labeled.map_chunks(_chubby_chunk, n, workers)
    best = max(parts, key=lambda p: (p[0], -p[1]))
    return ChubbyScanResult(n, sum(p[2] for p in parts), Fraction(best[0], den),
                            labeled.graph_from_code(n, best[1]))


def integer_partitions(n: int, max_parts: int, max_part: int | None = None) -> Iterable[tuple[int, ...]]:
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in integer_partitions(n - first, max_parts - 1, first):
            yield (first,) + rest


def multipartite_chubby_totals(n: int) -> dict[tuple[int, ...], Fraction]:
    """Chubby totals of every complete multipartite K5-free graph on ``n`` vertices."""
    return {sizes: chubby_weighting_k5free(complete_multipartite(sizes)).total
            for sizes in integer_partitions(n, 4)}
