"""Lower-bound constructions: Turán graphs, sparse clique-free graphs with small
independence number, and complete joins of those.

Each generator returns the graph together with a :class:`ConstructionReport`
recomputed from the graph itself, so the advertised clique bound and
independence budget are certified rather than assumed.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, floor
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .graph import (
    DEFAULT_EXACT_LIMIT,
    Graph,
    circulant_graph,
    complete_multipartite,
    complement,
    cycle_graph,
    empty_graph,
    find_clique,
    iter_bits,
    join,
    max_clique_mask,
    maximum_independent_set,
    to_graph6,
)


@dataclass(frozen=True)
class ConstructionReport:
    omega: int
    alpha: int
    edges: int
    target_edges: Fraction | int | None
    clique_free_ok: bool
    alpha_ok: bool
    s: int
    alpha_budget: int
    exact: bool = True

    def to_json(self) -> dict:
        d = asdict(self)
        if isinstance(self.target_edges, Fraction):
            d["target_edges"] = {"num": self.target_edges.numerator, "den": self.target_edges.denominator,
                                 "value": float(self.target_edges)}
        return d


def turan_part_sizes(n: int, r: int) -> list[int]:
    if not 1 <= r <= n:
        raise PreconditionError(f"need 1 <= r <= n, got r={r}, n={n}")
    q, rem = divmod(n, r)
    return [q + 1] * rem + [q] * (r - rem)


def turan_graph(n: int, r: int) -> Graph:
    """Complete r-partite graph on n vertices with parts as equal as possible."""
    return complete_multipartite(turan_part_sizes(n, r))


def turan_edges(n: int, r: int) -> int:
    sizes = turan_part_sizes(n, r)
    return (n * n - sum(s * s for s in sizes)) // 2


def largest_remainder(n: int, ratios: Sequence[Fraction]) -> list[int]:
    """Integer part sizes summing to ``n``, rounding by largest remainder (ties to the earlier part)."""
    ratios = [Fraction(r) for r in ratios]
    if any(r <= 0 for r in ratios) or sum(ratios) != 1:
        raise PreconditionError("ratios must be positive and sum to 1")
    quotas = [r * n for r in ratios]
    sizes = [floor(q) for q in quotas]
    left = n - sum(sizes)
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - sizes[i]), i))
    for i in order[:left]:
        sizes[i] += 1
    return sizes


def _rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *path])))


# small triangle-free graphs with the least possible independence number
_TRIANGLE_FREE_LIBRARY = [
    cycle_graph(5),  # alpha 2
    circulant_graph(8, [1, 4]),  # alpha 3
    circulant_graph(13, [1, 5]),  # alpha 4
]


def _library_candidate(n: int, t: int) -> Graph | None:
    if t != 3:
        return None
    for h in _TRIANGLE_FREE_LIBRARY:
        if h.n >= n:
            return h.induced(range(n))
    return None


def _alpha(g: Graph) -> int:
    return len(maximum_independent_set(g))


def random_cliquefree_small_alpha(n: int, t: int, seed: int = 0, alpha_passes: int | None = None) -> tuple[Graph, int]:
    """A K_t-free graph on ``n`` vertices with small independence number.

    Deletion method: sample G(N, p) on a few more vertices than needed with
    p = n^(-1/2) for t = 3 and p = n^(-2/(t-1)) for t >= 4, delete one vertex
    from every surviving K_t, keep the first ``n`` survivors. A bounded number
    of passes (default 10n) then joins two vertices of a maximum independent set whenever
    that creates no K_t. For t = 3 and n <= 13 an induced piece of a known
    Ramsey graph is used instead when its independence number is no larger.

    Returns the graph and its independence number.
    """
    if t < 3:
        raise PreconditionError("t must be at least 3")
    if n == 0:
        return empty_graph(0), 0
    p = min(0.5, n ** -0.5 if t == 3 else n ** (-2 / (t - 1)))
    g = None
    attempt = 0
    while g is None:
        rng = _rng(seed, n, t, attempt)
        big = int(ceil(n * (1.25 + 0.25 * attempt))) + 2
        upper = np.triu(rng.random((big, big)) < p, 1)
        edges = list(zip(*np.nonzero(upper)))
        h = Graph.from_edges(big, [(int(u), int(v)) for u, v in edges])
        alive = h.full_mask
        for clique in _cliques_of(h, t):
            if all(alive >> v & 1 for v in clique):
                alive &= ~(1 << max(clique))
        if alive.bit_count() >= n:
            keep = sorted(iter_bits(alive))[:n]
            g = h.induced(keep)
        attempt += 1

    passes = 10 * n if alpha_passes is None else alpha_passes
    rows = list(g.rows)
    for _ in range(passes):
        cur = Graph._trusted(n, rows)
        indep = sorted(maximum_independent_set(cur))
        added = False
        for u, v in combinations(indep, 2):
            common = rows[u] & rows[v]
            if t - 2 == 0 or max_clique_mask(rows, common, stop_at=t - 2).bit_count() < t - 2:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
                added = True
                break
        if not added:
            break
    g = Graph._trusted(n, rows)
    alpha = _alpha(g)
    lib = _library_candidate(n, t)
    if lib is not None:
        lib_alpha = _alpha(lib)
        if lib_alpha <= alpha:
            g, alpha = lib, lib_alpha
    assert find_clique(g, t) is None
    return g, alpha


def _cliques_of(g: Graph, k: int):
    from .graph import iter_cliques

    return list(iter_cliques(g, k))


def verify_construction(g: Graph, s: int, alpha_budget: int, target_edges: Fraction | int | None = None,
                        limit: int | None = None) -> ConstructionReport:
    """Recompute clique number, independence number and edge count of ``g``.

    Within the exact-search limit the numbers are exact. Above it the clique
    and independence numbers are lower bounds from randomised greedy passes
    and the report is marked ``exact=False``.
    """
    limit = DEFAULT_EXACT_LIMIT if limit is None else limit
    e = g.num_edges()
    if g.n <= limit:
        omega = len(max_clique_set(g))
        alpha = _alpha(g)
        exact = True
    else:
        omega = _greedy_clique_lower(g.rows, g.n)
        alpha = _greedy_clique_lower(complement(g).rows, g.n)
        exact = False
    return ConstructionReport(omega, alpha, e, target_edges, omega < s, alpha <= alpha_budget, s, alpha_budget, exact)


def max_clique_set(g: Graph) -> list[int]:
    return sorted(iter_bits(max_clique_mask(g.rows, g.full_mask)))


def _greedy_clique_lower(rows: Sequence[int], n: int, rounds: int = 64) -> int:
    rng = np.random.Generator(np.random.Philox(0))
    best = 0
    for _ in range(rounds):
        order = rng.permutation(n)
        cand = (1 << n) - 1
        size = 0
        for v in order:
            if cand >> int(v) & 1:
                size += 1
                cand &= rows[int(v)]
        best = max(best, size)
    return best


def two_part_join(n: int, p: int, seed: int = 0, halves: Sequence[Graph] | None = None) -> tuple[Graph, ConstructionReport]:
    """Join of two K_{p+1}-free halves: K_{2p+1}-free with at least floor(n^2/4) edges."""
    if p < 2:
        raise PreconditionError("p must be at least 2")
    if halves is None:
        sizes = largest_remainder(n, [Fraction(1, 2), Fraction(1, 2)])
        halves = [random_cliquefree_small_alpha(size, p + 1, seed * 2 + i)[0] for i, size in enumerate(sizes)]
    else:
        if sum(h.n for h in halves) != n or len(halves) != 2:
            raise PreconditionError("need two halves whose orders sum to n")
        for i, h in enumerate(halves):
            k = find_clique(h, p + 1)
            if k is not None:
                raise PreconditionError(f"half {i} contains K{p + 1} on {sorted(k)}")
    g = join(halves)
    budget = max(_alpha(h) for h in halves)
    report = verify_construction(g, 2 * p + 1, budget, halves[0].n * halves[1].n)
    return g, report


def three_part_join(n: int, t: int, seed: int = 0, parts: Sequence[Graph] | None = None) -> tuple[Graph, ConstructionReport]:
    """Join of three K_{t+1}-free parts: K_{3t+1}-free, edges at least the cross total.

    Random parts need t >= 5; explicit parts (e.g. three C5 with t = 2) only need t >= 2.
    """
    if t < (2 if parts is not None else 5):
        raise PreconditionError(f"t={t} is too small for {'the given' if parts is not None else 'random'} parts")
    if parts is None:
        sizes = largest_remainder(n, [Fraction(1, 3)] * 3)
        parts = [random_cliquefree_small_alpha(size, t + 1, seed * 3 + i)[0] for i, size in enumerate(sizes)]
    else:
        if len(parts) != 3 or sum(h.n for h in parts) != n:
            raise PreconditionError("need three parts whose orders sum to n")
        for i, h in enumerate(parts):
            k = find_clique(h, t + 1)
            if k is not None:
                raise PreconditionError(f"part {i} contains K{t + 1} on {sorted(k)}")
    g = join(parts)
    cross = sum(a.n * b.n for a, b in combinations(parts, 2))
    budget = max(_alpha(h) for h in parts)
    return g, verify_construction(g, 3 * t + 1, budget, cross)


def _dense_inner(n: int, left_t: int, right_t: int, seed: int) -> Graph:
    # two-class Turán-style blow-up with sparse clique-free classes of small alpha
    a, b = largest_remainder(n, [Fraction(1, 2), Fraction(1, 2)])
    left = random_cliquefree_small_alpha(a, left_t, seed * 2)[0]
    right = random_cliquefree_small_alpha(b, right_t, seed * 2 + 1)[0]
    return join([left, right])


def _conjectured(n: int, seed: int, ratios: tuple[Fraction, Fraction], inner_ts: tuple[int, int],
                 sparse_t: int, s: int, density: Fraction) -> tuple[Graph, ConstructionReport]:
    n1, n2 = largest_remainder(n, list(ratios))
    if n1 < 2 or n2 < 1:
        raise PreconditionError(f"n={n} too small for the part ratios")
    h1 = _dense_inner(n1, inner_ts[0], inner_ts[1], seed)
    h2 = random_cliquefree_small_alpha(n2, sparse_t, seed * 2 + 7)[0]
    g = join([h1, h2])
    budget = max(_alpha(h1), _alpha(h2))
    return g, verify_construction(g, s, budget, density * n * n)


def conjectured_k9(n: int, seed: int = 0) -> tuple[Graph, ConstructionReport]:
    """Parts 3n/5 (K6-free stand-in) and 2n/5 (sparse K4-free), joined: K9-free.

    The dense part would need density 1/6 to reach 3n^2/10 edges; that density
    is conjectural, so the stand-in's edge count is only reported.
    """
    return _conjectured(n, seed, (Fraction(3, 5), Fraction(2, 5)), (3, 4), 4, 9, Fraction(3, 10))


def conjectured_k12(n: int, seed: int = 0) -> tuple[Graph, ConstructionReport]:
    """Parts 8n/13 (K8-free stand-in) and 5n/13 (sparse K5-free), joined: K12-free."""
    return _conjectured(n, seed, (Fraction(8, 13), Fraction(5, 13)), (4, 5), 5, 12, Fraction(4, 13))


# ---------------------------------------------------------------------------
# JSON-driven construction specs

KINDS = ("turan", "two_part_join", "three_part_join", "conjectured_k9", "conjectured_k12")


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    n: int
    s: int | None = None
    part_ratios: tuple[Fraction, ...] = ()
    inner_forbidden: tuple[int, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown construction kind {self.kind!r}; expected one of {KINDS}")
        ratios = tuple(Fraction(r) for r in self.part_ratios)
        object.__setattr__(self, "part_ratios", ratios)
        if ratios and (any(r <= 0 for r in ratios) or sum(ratios) != 1):
            raise PreconditionError("part_ratios must be positive and sum to 1")
        if self.kind == "two_part_join" and self.inner_forbidden:
            p = self.inner_forbidden[0] - 1
            if self.s is not None and self.s < 2 * p + 1:
                raise PreconditionError(f"two K_{p + 1}-free halves only guarantee K_{2 * p + 1}-freeness, not K_{self.s}")

    @classmethod
    def from_json(cls, text: str) -> "ConstructionSpec":
        d = json.loads(text)
        return cls(kind=d["kind"], n=int(d["n"]), s=d.get("s"),
                   part_ratios=tuple(Fraction(str(r)) for r in d.get("part_ratios", ())),
                   inner_forbidden=tuple(d.get("inner_forbidden", ())), seed=int(d.get("seed", 0)))


def build(spec: ConstructionSpec) -> tuple[Graph, ConstructionReport]:
    if spec.kind == "turan":
        r = (spec.s - 1) if spec.s else (len(spec.part_ratios) or 2)
        g = turan_graph(spec.n, r)
        return g, verify_construction(g, r + 1, -(-spec.n // r), turan_edges(spec.n, r))
    if spec.kind == "two_part_join":
        p = spec.inner_forbidden[0] - 1 if spec.inner_forbidden else ((spec.s or 5) - 1) // 2
        return two_part_join(spec.n, p, spec.seed)
    if spec.kind == "three_part_join":
        t = spec.inner_forbidden[0] - 1 if spec.inner_forbidden else max(5, ((spec.s or 16) - 1) // 3)
        return three_part_join(spec.n, t, spec.seed)
    if spec.kind == "conjectured_k9":
        return conjectured_k9(spec.n, spec.seed)
    return conjectured_k12(spec.n, spec.seed)


def construction_json(g: Graph, report: ConstructionReport) -> dict:
    return {"graph6": to_graph6(g), "n": g.n, "report": report.to_json()}
