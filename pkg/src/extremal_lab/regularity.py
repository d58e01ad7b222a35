"""Equipartitions, regular-pair certification, cluster graphs and the edge
accounting around them.

Partitions are inputs here (nothing constructs a regularity partition). A
pair ``(A, B)`` is eps-regular when every ``A' ⊆ A``, ``B' ⊆ B`` with
``|A'| >= eps|A|`` and ``|B'| >= eps|B|`` has density within ``eps`` of
``d(A, B)``. All densities and parameters are exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, comb
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .graph import Graph, iter_bits, to_mask

EXHAUSTIVE_CAP = 14
DEFAULT_SAMPLES = 10 ** 4
GAP = 16


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


# ---------------------------------------------------------------------------
# partitions

@dataclass(frozen=True)
class Equipartition:
    n: int
    parts: tuple[frozenset[int], ...]

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise PreconditionError("a partition needs at least one part")
        seen: set[int] = set()
        for i, p in enumerate(parts):
            if not p:
                raise PreconditionError(f"part {i} is empty")
            if seen & p:
                raise PreconditionError(f"part {i} overlaps an earlier part on {sorted(seen & p)}")
            seen |= p
        if seen != set(range(self.n)):
            raise PreconditionError(f"parts do not cover 0..{self.n - 1}")
        sizes = [len(p) for p in parts]
        if max(sizes) - min(sizes) > 1:
            raise PreconditionError(f"part sizes {sizes} differ by more than 1")

    @property
    def m(self) -> int:
        return len(self.parts)

    def masks(self) -> list[int]:
        return [to_mask(p) for p in self.parts]

    def labels(self) -> list[int]:
        out = [0] * self.n
        for i, p in enumerate(self.parts):
            for v in p:
                out[v] = i
        return out

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Equipartition":
        m = max(labels) + 1 if labels else 0
        return cls(len(labels), tuple(frozenset(v for v, x in enumerate(labels) if x == i) for i in range(m)))

    @classmethod
    def contiguous(cls, n: int, m: int) -> "Equipartition":
        """Consecutive blocks, larger blocks first."""
        if not 1 <= m <= n:
            raise PreconditionError(f"need 1 <= m <= n, got m={m}, n={n}")
        q, r = divmod(n, m)
        parts, start = [], 0
        for i in range(m):
            size = q + (1 if i < r else 0)
            parts.append(frozenset(range(start, start + size)))
            start += size
        return cls(n, tuple(parts))

    @classmethod
    def random(cls, n: int, m: int, seed: int = 0) -> "Equipartition":
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, n, m])))
        perm = rng.permutation(n)
        base = cls.contiguous(n, m)
        return cls(n, tuple(frozenset(int(perm[v]) for v in p) for p in base.parts))


def _cross(g: Graph, amask: int, bmask: int) -> int:
    return sum((g.rows[v] & bmask).bit_count() for v in iter_bits(amask))


def _density(g: Graph, a: frozenset[int] | Iterable[int], b) -> Fraction:
    a, b = list(a), list(b)
    if not a or not b:
        raise PreconditionError("density needs two nonempty sets")
    return Fraction(_cross(g, to_mask(a), to_mask(b)), len(a) * len(b))


# ---------------------------------------------------------------------------
# pair regularity

@dataclass(frozen=True)
class RegularityCertificate:
    regular: bool  # exhaustive: exact verdict; sampled: no violation found
    mode: str
    density: Fraction
    epsilon: Fraction
    checked: int
    witness: tuple[frozenset[int], frozenset[int], Fraction] | None = None

    @property
    def proof(self) -> bool:
        """Only an exhaustive 'regular' verdict is a proof of regularity."""
        return self.mode == "exhaustive"

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            a, b, d = self.witness
            w = {"a": sorted(a), "b": sorted(b), "density": str(d)}
        return {"regular": self.regular, "mode": self.mode, "density": str(self.density),
                "epsilon": str(self.epsilon), "checked": self.checked, "witness": w}


def _thresholds(eps: Fraction, na: int, nb: int) -> tuple[int, int]:
    return max(1, ceil(eps * na)), max(1, ceil(eps * nb))


def check_pair_regular(g: Graph, a: Iterable[int], b: Iterable[int], eps, mode: str = "exhaustive",
                       samples: int = DEFAULT_SAMPLES, seed: int = 0) -> RegularityCertificate:
    """Certify eps-regularity of the pair (a, b).

    ``exhaustive`` (both sides at most 14 vertices) enumerates every admissible
    ``A'``; for each it only needs, per size of ``B'``, the ``B'`` of largest
    and of smallest density, which take the vertices of ``B`` with most and
    fewest neighbours in ``A'``. ``sampled`` draws subset pairs, half at the
    minimum admissible sizes, and can only report a violation or its absence.
    """
    eps = as_fraction(eps)
    a, b = sorted(a), sorted(b)
    if not a or not b:
        raise PreconditionError("both sides must be nonempty")
    if set(a) & set(b):
        raise PreconditionError("the two sides must be disjoint")
    if not 0 < eps <= 1:
        raise PreconditionError("eps must lie in (0, 1]")
    na, nb = len(a), len(b)
    adj = np.array([[1 if g.has_edge(u, v) else 0 for v in b] for u in a], dtype=np.int64)
    total = int(adj.sum())
    dens = Fraction(total, na * nb)
    ta, tb = _thresholds(eps, na, nb)
    if mode == "exhaustive":
        if max(na, nb) > EXHAUSTIVE_CAP:
            raise BudgetExceeded(f"exhaustive certification is capped at {EXHAUSTIVE_CAP} vertices per side, got {na}x{nb}")
        return _exhaustive(adj, a, b, eps, dens, ta, tb)
    if mode == "sampled":
        return _sampled(adj, a, b, eps, dens, ta, tb, samples, seed)
    raise PreconditionError(f"unknown mode {mode!r}")


def _exhaustive(adj, a, b, eps, dens, ta, tb) -> RegularityCertificate:
    na, nb = adj.shape
    masks = np.arange(1 << na, dtype=np.int64)
    sizes = np.zeros(len(masks), dtype=np.int64)
    members = np.zeros((len(masks), na), dtype=np.int64)
    for i in range(na):
        bit = (masks >> i) & 1
        members[:, i] = bit
        sizes += bit
    keep = sizes >= ta
    masks, sizes, members = masks[keep], sizes[keep], members[keep]
    deg = members @ adj  # neighbours of each b-vertex inside A'
    order = np.argsort(-deg, axis=1, kind="stable")
    desc = np.take_along_axis(deg, order, axis=1)
    top = np.cumsum(desc, axis=1)
    bottom = np.cumsum(desc[:, ::-1], axis=1)
    num, den = dens.numerator, dens.denominator
    en, ed = eps.numerator, eps.denominator
    checked = 0
    for s in range(tb, nb + 1):
        # |x/(|A'| s) - num/den| > en/ed  <=>  |x den ed - num ed |A'| s| > en den |A'| s
        scale = sizes * s
        for kind, arr in (("top", top[:, s - 1]), ("bottom", bottom[:, s - 1])):
            lhs = np.abs(arr * den * ed - num * ed * scale)
            bad = np.nonzero(lhs > en * den * scale)[0]
            checked += len(arr)
            if len(bad):
                r = int(bad[0])
                amask = int(masks[r])
                a_sub = frozenset(a[i] for i in range(na) if amask >> i & 1)
                cols = order[r, :s] if kind == "top" else order[r, ::-1][:s]
                b_sub = frozenset(b[int(j)] for j in cols)
                d = Fraction(int(arr[r]), int(sizes[r]) * s)
                return RegularityCertificate(False, "exhaustive", dens, eps, checked, (a_sub, b_sub, d))
    return RegularityCertificate(True, "exhaustive", dens, eps, checked)


def _sampled(adj, a, b, eps, dens, ta, tb, samples, seed) -> RegularityCertificate:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, len(a), len(b)])))
    na, nb = adj.shape
    for k in range(samples):
        if k % 2 == 0:
            sa, sb = ta, tb
        else:
            sa, sb = int(rng.integers(ta, na + 1)), int(rng.integers(tb, nb + 1))
        ia = rng.choice(na, size=sa, replace=False)
        ib = rng.choice(nb, size=sb, replace=False)
        x = int(adj[np.ix_(ia, ib)].sum())
        d = Fraction(x, sa * sb)
        if abs(d - dens) > eps:
            return RegularityCertificate(False, "sampled", dens, eps, k + 1,
                                         (frozenset(a[int(i)] for i in ia), frozenset(b[int(j)] for j in ib), d))
    return RegularityCertificate(True, "sampled", dens, eps, samples)


def slicing_params(eps, gamma, alpha_fraction) -> tuple[Fraction, Fraction]:
    """(max(eps/alpha, 2 eps), gamma - eps) for a sub-pair keeping an alpha fraction of each side."""
    eps, gamma, alpha = as_fraction(eps), as_fraction(gamma), as_fraction(alpha_fraction)
    problems = []
    if not eps < alpha:
        problems.append(f"eps={eps} must be below alpha_fraction={alpha}")
    if not eps < gamma:
        problems.append(f"eps={eps} must be below gamma={gamma}")
    if not eps < Fraction(1, 2):
        problems.append(f"eps={eps} must be below 1/2")
    if eps <= 0 or alpha <= 0:
        problems.append("eps and alpha_fraction must be positive")
    if problems:
        raise PreconditionError("; ".join(problems))
    return max(eps / alpha, 2 * eps), gamma - eps


# ---------------------------------------------------------------------------
# cluster graphs

@dataclass(frozen=True)
class ClusterGraph:
    m: int
    densities: tuple[tuple[Fraction, ...], ...]
    regular_flags: tuple[tuple[bool, ...], ...]
    epsilon: Fraction
    gamma: Fraction
    edges: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        d = tuple(tuple(as_fraction(x) for x in row) for row in self.densities)
        object.__setattr__(self, "densities", d)
        if len(d) != self.m or any(len(row) != self.m for row in d):
            raise PreconditionError("density matrix must be m x m")
        for i in range(self.m):
            for j in range(self.m):
                if d[i][j] != d[j][i] or self.regular_flags[i][j] != self.regular_flags[j][i]:
                    raise PreconditionError(f"matrices must be symmetric (entry {i},{j})")
                if not 0 <= d[i][j] <= 1:
                    raise PreconditionError(f"density {d[i][j]} at ({i},{j}) outside [0, 1]")
        edges = tuple((i, j) for i in range(self.m) for j in range(i + 1, self.m)
                      if self.regular_flags[i][j] and d[i][j] >= self.gamma)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_densities(cls, densities, epsilon=Fraction(0), gamma=Fraction(0), flags=None) -> "ClusterGraph":
        m = len(densities)
        if flags is None:
            flags = [[i != j for j in range(m)] for i in range(m)]
        return cls(m, tuple(tuple(r) for r in densities), tuple(tuple(bool(x) for x in r) for r in flags),
                   epsilon, gamma)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in set(self.edges)

    def graph(self) -> Graph:
        return Graph.from_edges(self.m, self.edges)

    def density(self, i: int, j: int) -> Fraction:
        return self.densities[i][j]

    def to_json(self) -> dict:
        return {"m": self.m, "epsilon": str(self.epsilon), "gamma": str(self.gamma),
                "densities": [[str(x) for x in row] for row in self.densities],
                "flags": [list(row) for row in self.regular_flags], "edges": [list(e) for e in self.edges]}


def build_cluster_graph(g: Graph, partition: Equipartition, eps, gamma, mode: str = "exhaustive",
                        samples: int = DEFAULT_SAMPLES, seed: int = 0) -> ClusterGraph:
    if partition.n != g.n:
        raise PreconditionError(f"partition covers {partition.n} vertices, graph has {g.n}")
    eps, gamma = as_fraction(eps), as_fraction(gamma)
    m = partition.m
    if mode == "exhaustive" and max(len(p) for p in partition.parts) > EXHAUSTIVE_CAP:
        raise BudgetExceeded(f"exhaustive mode needs parts of at most {EXHAUSTIVE_CAP} vertices")
    dens = [[Fraction(0)] * m for _ in range(m)]
    flags = [[False] * m for _ in range(m)]
    for i, j in combinations(range(m), 2):
        cert = check_pair_regular(g, partition.parts[i], partition.parts[j], eps, mode, samples, seed)
        dens[i][j] = dens[j][i] = cert.density
        flags[i][j] = flags[j][i] = cert.regular
    return ClusterGraph.from_densities(dens, eps, gamma, flags)


def cluster_graph_with_flags(g: Graph, partition: Equipartition, eps, gamma, flags) -> ClusterGraph:
    """Exact densities from ``g`` with caller-supplied regularity flags."""
    m = partition.m
    masks = partition.masks()
    dens = [[Fraction(0)] * m for _ in range(m)]
    for i, j in combinations(range(m), 2):
        d = Fraction(_cross(g, masks[i], masks[j]), len(partition.parts[i]) * len(partition.parts[j]))
        dens[i][j] = dens[j][i] = d
    return ClusterGraph.from_densities(dens, eps, gamma, flags)


def _cliques(r: ClusterGraph, k: int) -> list[tuple[int, ...]]:
    from .graph import iter_cliques

    return [tuple(sorted(c)) for c in iter_cliques(r.graph(), k)]


def detect_heavy_triangles(r: ClusterGraph, threshold, gamma) -> list[tuple[int, int, int]]:
    """Triangles of R whose three pair densities all reach threshold + gamma."""
    bar = as_fraction(threshold) + as_fraction(gamma)
    return [c for c in _cliques(r, 3) if all(r.densities[i][j] >= bar for i, j in combinations(c, 2))]


def detect_chubby(r: ClusterGraph, threshold, gamma, clique_order: int = 3) -> list[tuple[int, ...]]:
    """Triangles or K4s of R with at least one pair density reaching threshold + gamma."""
    if clique_order not in (3, 4):
        raise PreconditionError("clique_order must be 3 or 4")
    bar = as_fraction(threshold) + as_fraction(gamma)
    return [c for c in _cliques(r, clique_order) if any(r.densities[i][j] >= bar for i, j in combinations(c, 2))]


# ---------------------------------------------------------------------------
# edge accounting

@dataclass(frozen=True)
class ResidualBound:
    exact_sum: Fraction  # eps m^2 (n/m)^2 + (gamma/2)(n/m)^2 C(m,2) + C(n/m,2) m
    chained: Fraction  # (eps + gamma/4 + 1/(2m)) n^2
    final: Fraction  # (gamma/3) n^2
    coefficient: Fraction  # eps + gamma/4 + 1/(2m)
    gamma_third: bool  # coefficient <= gamma/3

    @property
    def sum_below_chained(self) -> bool:
        return self.exact_sum <= self.chained


def residual_edge_bound(n: int, m: int, eps, gamma) -> ResidualBound:
    if m < 1:
        raise PreconditionError("m must be at least 1")
    eps, gamma = as_fraction(eps), as_fraction(gamma)
    n = as_fraction(n)
    part = n / m
    exact = eps * m * m * part * part + gamma / 2 * part * part * comb(m, 2) + part * (part - 1) / 2 * m
    coef = eps + gamma / 4 + Fraction(1, 2 * m)
    return ResidualBound(exact, coef * n * n, gamma / 3 * n * n, coef, coef <= gamma / 3)


@dataclass(frozen=True)
class EdgeDecomposition:
    cluster_part: int  # edges between parts that form an edge of R
    residual_part: int
    cluster_bound: Fraction  # sum over R-edges of d(V_i, V_j) |V_i| |V_j|

    @property
    def total(self) -> int:
        return self.cluster_part + self.residual_part


def edge_decomposition(g: Graph, partition: Equipartition, r: ClusterGraph) -> EdgeDecomposition:
    if r.m != partition.m:
        raise PreconditionError("cluster graph and partition disagree on the number of parts")
    masks = partition.masks()
    cluster = 0
    bound = Fraction(0)
    for i, j in r.edges:
        x = _cross(g, masks[i], masks[j])
        cluster += x
        bound += r.densities[i][j] * len(partition.parts[i]) * len(partition.parts[j])
    return EdgeDecomposition(cluster, g.num_edges() - cluster, bound)


# ---------------------------------------------------------------------------
# clique lifting

def lift_clique(g: Graph, partition: Equipartition, r: ClusterGraph, cluster_clique: Iterable[int], p: int,
                node_budget: int = 1000) -> frozenset[int] | None:
    """Search for p vertices in each named part forming one clique of g.

    Parts are taken in ascending order. In each, K_p's inside the current
    common neighbourhood are tried in lexicographic order, and the search
    descends into their common neighbourhood. At most ``node_budget`` K_p's
    are tried in total. None is not a proof that no such clique exists.
    """
    parts = sorted(set(cluster_clique))
    for i, j in combinations(parts, 2):
        if not r.has_edge(i, j):
            raise PreconditionError(f"parts {i} and {j} are not adjacent in the cluster graph")
    if p < 1:
        raise PreconditionError("p must be at least 1")
    from .graph import iter_cliques

    masks = partition.masks()
    nodes = [0]

    def rec(level: int, chosen: list[int], common: int) -> list[int] | None:
        if level == len(parts):
            return chosen
        within = common & masks[parts[level]]
        for kp in iter_cliques(g, p, within=within):
            nodes[0] += 1
            if nodes[0] > node_budget:
                return None
            nxt = common
            for v in kp:
                nxt &= g.rows[v]
            found = rec(level + 1, chosen + sorted(kp), nxt)
            if found is not None:
                return found
            if nodes[0] > node_budget:
                return None
        return None

    res = rec(0, [], g.full_mask)
    return None if res is None else frozenset(res)


# ---------------------------------------------------------------------------
# parameter hierarchy

@dataclass(frozen=True)
class ParamHierarchy:
    n0: Fraction
    n: Fraction
    delta: Fraction
    M_prime: Fraction
    epsilon: Fraction
    gamma: Fraction

    def __post_init__(self):
        for name in ("n0", "n", "delta", "M_prime", "epsilon", "gamma"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))


@dataclass(frozen=True)
class HierarchyReport:
    links: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.links)

    @property
    def failures(self) -> list[str]:
        return [name for name, v in self.links if not v]


def validate_hierarchy(h: ParamHierarchy, gap: int = GAP) -> HierarchyReport:
    """Check 0 < 1/n0 <= 1/n << delta < 1/M' << eps << gamma << 1 with x << y read as x <= y/gap."""
    if min(h.n0, h.n, h.M_prime) <= 0:
        raise PreconditionError("n0, n and M' must be positive")
    inv_n0, inv_n, inv_m = 1 / h.n0, 1 / h.n, 1 / h.M_prime
    links = (
        ("0 < 1/n0", inv_n0 > 0),
        ("1/n0 <= 1/n", inv_n0 <= inv_n),
        ("1/n << delta", inv_n <= h.delta / gap),
        ("delta < 1/M'", h.delta < inv_m),
        ("1/M' << eps", inv_m <= h.epsilon / gap),
        ("eps << gamma", h.epsilon <= h.gamma / gap),
        ("gamma << 1", h.gamma <= Fraction(1, gap)),
    )
    return HierarchyReport(links)


# ---------------------------------------------------------------------------
# low crossing degree pruning

@dataclass(frozen=True)
class PruneResult:
    parts: tuple[frozenset[int], ...]
    deleted: tuple[int, ...]
    status: str  # floor_met | part_emptied


def prune_low_crossing_degree(g: Graph, parts: Sequence[Iterable[int]], floor) -> PruneResult:
    """Delete a vertex of least crossing degree (lowest index on ties) until the floor holds."""
    floor = as_fraction(floor)
    cur = [set(p) for p in parts]
    deleted = []
    while True:
        if any(not p for p in cur):
            return PruneResult(tuple(frozenset(p) for p in cur), tuple(deleted), "part_emptied")
        masks = [to_mask(p) for p in cur]
        worst = None
        for i, p in enumerate(cur):
            for v in sorted(p):
                d = min((g.rows[v] & masks[j]).bit_count() for j in range(len(cur)) if j != i) if len(cur) > 1 else 0
                if worst is None or (d, v) < worst[:2]:
                    worst = (d, v, i)
        if worst[0] >= floor:
            return PruneResult(tuple(frozenset(p) for p in cur), tuple(deleted), "floor_met")
        cur[worst[2]].discard(worst[1])
        deleted.append(worst[1])
