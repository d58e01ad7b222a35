"""Dense simple graphs stored as bit rows, plus the exact invariant kernels.

Every vertex set handed across the public API is a ``frozenset`` of vertex
indices; internally everything is a Python ``int`` bitmask, where bit ``v`` of
``rows[u]`` is set iff ``uv`` is an edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, Graph6Error, PreconditionError

DEFAULT_EXACT_LIMIT = 64

VertexSet = frozenset


def to_mask(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        return vertices
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask: int) -> frozenset:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n: int, rows: Sequence[int]):
        if n < 0 or len(rows) != n:
            raise PreconditionError("need exactly one adjacency row per vertex")
        rows = tuple(int(r) for r in rows)
        full = (1 << n) - 1
        for u, row in enumerate(rows):
            if row & ~full:
                raise PreconditionError(f"row {u} references a vertex outside 0..{n - 1}")
            if row >> u & 1:
                raise PreconditionError(f"self-loop at vertex {u}")
            for v in iter_bits(row):
                if not rows[v] >> u & 1:
                    raise PreconditionError(f"adjacency not symmetric at ({u}, {v})")
        self.n = n
        self.rows = rows
        self._hash = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) outside 0..{n - 1}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def _trusted(cls, n: int, rows: Sequence[int]) -> "Graph":
        g = object.__new__(cls)
        g.n = n
        g.rows = tuple(rows)
        g._hash = None
        return g

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def neighbors(self, v: int) -> frozenset:
        return from_mask(self.rows[v])

    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, row in enumerate(self.rows):
            for v in iter_bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, relabelled to ``0..k-1`` in increasing vertex order."""
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        rows = []
        for v in vs:
            row = 0
            for u in iter_bits(self.rows[v]):
                if u in index:
                    row |= 1 << index[u]
            rows.append(row)
        return Graph._trusted(len(vs), rows)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph whose vertex ``perm[v]`` plays the role of old vertex ``v``."""
        rows = [0] * self.n
        for v, row in enumerate(self.rows):
            new = 0
            for u in iter_bits(row):
                new |= 1 << perm[u]
            rows[perm[v]] = new
        return Graph._trusted(self.n, rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.rows))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.num_edges()}, g6={to_graph6(self)!r})"


# ---------------------------------------------------------------------------
# standard families


def empty_graph(n: int) -> Graph:
    return Graph._trusted(n, [0] * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph._trusted(n, [full ^ (1 << v) for v in range(n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise PreconditionError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def circulant_graph(n: int, jumps: Iterable[int]) -> Graph:
    edges = set()
    for j in jumps:
        for i in range(n):
            u, v = i, (i + j) % n
            if u != v:
                edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, sorted(edges))


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    n = sum(sizes)
    full = (1 << n) - 1
    rows = []
    start = 0
    for size in sizes:
        part = ((1 << size) - 1) << start
        rows.extend([full & ~part] * size)
        start += size
    return Graph._trusted(n, rows)


def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph._trusted(g.n, [full & ~row & ~(1 << v) for v, row in enumerate(g.rows)])


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    rows = []
    offset = 0
    for h in graphs:
        rows.extend(row << offset for row in h.rows)
        offset += h.n
    return Graph._trusted(offset, rows)


def join(graphs: Sequence[Graph]) -> Graph:
    """Disjoint union with every edge between different summands added."""
    if not graphs:
        raise PreconditionError("join needs at least one graph")
    n = sum(h.n for h in graphs)
    full = (1 << n) - 1
    rows = []
    offset = 0
    for h in graphs:
        block = ((1 << h.n) - 1) << offset
        rows.extend((row << offset) | (full & ~block) for row in h.rows)
        offset += h.n
    return Graph._trusted(n, rows)


# ---------------------------------------------------------------------------
# graph6 and JSON I/O


def _encode_size(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise PreconditionError("graph too large for graph6")


def to_graph6(g: Graph) -> str:
    bits = []
    for j in range(1, g.n):
        row = g.rows[j]
        for i in range(j):
            bits.append(row >> i & 1)
    while len(bits) % 6:
        bits.append(0)
    chars = []
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = (value << 1) | b
        chars.append(chr(value + 63))
    return _encode_size(g.n) + "".join(chars)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    base = 0
    if s.startswith(">>graph6<<"):
        base = len(">>graph6<<")
        s = s[base:]
    if not s:
        raise Graph6Error("empty graph6 string", base)
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside the graph6 range 63..126", base + i)

    def sixes(start: int, count: int) -> int:
        if len(s) < start + count:
            raise Graph6Error("truncated size header", base + len(s))
        value = 0
        for ch in s[start:start + count]:
            value = (value << 6) | (ord(ch) - 63)
        return value

    if s[0] != "~":
        n, pos = ord(s[0]) - 63, 1
    elif len(s) > 1 and s[1] == "~":
        n, pos = sixes(2, 6), 8
    else:
        n, pos = sixes(1, 3), 4
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    body = s[pos:]
    if len(body) != nchars:
        offset = base + pos + min(len(body), nchars)
        raise Graph6Error(f"expected {nchars} data bytes for n={n}, found {len(body)}", offset)
    rows = [0] * n
    k = 0
    i, j = 0, 1
    for ci, ch in enumerate(body):
        value = ord(ch) - 63
        for shift in range(5, -1, -1):
            bit = value >> shift & 1
            if k < nbits:
                if bit:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
                i += 1
                if i == j:
                    i, j = 0, j + 1
            elif bit:
                raise Graph6Error("nonzero padding bit", base + pos + ci)
            k += 1
    return Graph._trusted(n, rows)


def to_adjacency_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "adjacency": [sorted(g.neighbors(v)) for v in range(g.n)]})


def from_adjacency_json(text: str) -> Graph:
    data = json.loads(text)
    n = data["n"]
    edges = [(u, v) for u, nbrs in enumerate(data["adjacency"]) for v in nbrs if u < v]
    g = Graph.from_edges(n, edges)
    for u, nbrs in enumerate(data["adjacency"]):
        if sorted(nbrs) != sorted(g.neighbors(u)):
            raise PreconditionError(f"adjacency list of vertex {u} is not symmetric")
    return g


# ---------------------------------------------------------------------------
# clique search: branch and bound with a greedy colouring bound


def _color_sort(rows: Sequence[int], cand: int) -> tuple[list[int], list[int]]:
    order: list[int] = []
    colors: list[int] = []
    color = 0
    uncolored = cand
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~rows[v] & ~low
            uncolored &= ~low
            order.append(v)
            colors.append(color)
    return order, colors


class _Found(Exception):
    pass


def _expand(rows: Sequence[int], clique: int, size: int, cand: int, best: list, stop_at: int) -> None:
    order, colors = _color_sort(rows, cand)
    for i in range(len(order) - 1, -1, -1):
        if size + colors[i] <= best[0]:
            return
        v = order[i]
        bit = 1 << v
        sub = cand & rows[v]
        if sub:
            _expand(rows, clique | bit, size + 1, sub, best, stop_at)
        elif size + 1 > best[0]:
            best[0] = size + 1
            best[1] = clique | bit
            if best[0] >= stop_at:
                raise _Found
        cand &= ~bit


def _degree_order(rows: Sequence[int], cand: int) -> list[int]:
    # pivot order: most neighbours inside the candidate set first, ties by lowest index
    return sorted(iter_bits(cand), key=lambda v: (-(rows[v] & cand).bit_count(), v))


def max_clique_mask(rows: Sequence[int], cand: int, at_least: int = 0, stop_at: int | None = None) -> int:
    """Largest clique inside ``cand`` (a bitmask); 0 if none beats ``at_least``.

    With ``stop_at`` the search returns as soon as a clique of that size is
    found.
    """
    if not cand:
        return 0
    order = _degree_order(rows, cand)
    pos = {v: i for i, v in enumerate(order)}
    local = []
    for v in order:
        row = 0
        for u in iter_bits(rows[v] & cand):
            row |= 1 << pos[u]
        local.append(row)
    best = [at_least, 0]
    try:
        _expand(local, 0, 0, (1 << len(order)) - 1, best, stop_at if stop_at else len(order) + 1)
    except _Found:
        pass
    return to_mask(order[i] for i in iter_bits(best[1]))


def _check_limit(g: Graph, limit: int | None) -> None:
    limit = DEFAULT_EXACT_LIMIT if limit is None else limit
    if g.n > limit:
        raise BudgetExceeded(f"n={g.n} exceeds the exact-search limit {limit}")


def maximum_clique(g: Graph, limit: int | None = None) -> frozenset:
    _check_limit(g, limit)
    return from_mask(max_clique_mask(g.rows, g.full_mask))


def clique_number(g: Graph, limit: int | None = None) -> int:
    return len(maximum_clique(g, limit))


def maximum_independent_set(g: Graph, limit: int | None = None) -> frozenset:
    _check_limit(g, limit)
    return from_mask(max_clique_mask(complement(g).rows, g.full_mask))


def independence_number(g: Graph, limit: int | None = None) -> int:
    return len(maximum_independent_set(g, limit))


def is_clique(g: Graph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    mask = to_mask(vs)
    return all((g.rows[v] | (1 << v)) & mask == mask for v in vs)


def is_independent(g: Graph, vertices: Iterable[int]) -> bool:
    mask = to_mask(vertices)
    return all(not g.rows[v] & mask for v in iter_bits(mask))


def find_clique(g: Graph, k: int, within: Iterable[int] | int | None = None) -> frozenset | None:
    """A ``k``-clique of ``g`` (optionally inside ``within``), or ``None``."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    cand = g.full_mask if within is None else to_mask(within)
    if cand.bit_count() < k:
        return None
    mask = max_clique_mask(g.rows, cand, at_least=k - 1, stop_at=k)
    if mask.bit_count() < k:
        return None
    # the search may overshoot by a vertex only if stop_at were missed; trim to exactly k
    found = sorted(iter_bits(mask))[:k]
    assert is_clique(g, found)
    return frozenset(found)


def has_clique(g: Graph, k: int) -> bool:
    return find_clique(g, k) is not None


def alpha_mask(rows: Sequence[int], cand: int, comp_rows: Sequence[int] | None = None) -> int:
    """Independence number of the subgraph induced on the bitmask ``cand``."""
    if comp_rows is None:
        n = len(rows)
        full = (1 << n) - 1
        comp_rows = [full & ~r & ~(1 << v) for v, r in enumerate(rows)]
    return max_clique_mask(comp_rows, cand).bit_count()


def iter_cliques(g: Graph, k: int, within: Iterable[int] | int | None = None) -> Iterator[tuple[int, ...]]:
    """All ``k``-cliques inside ``within`` as sorted tuples, in lexicographic order."""
    cand = g.full_mask if within is None else to_mask(within)
    rows = g.rows

    def rec(prefix: tuple[int, ...], cand: int, need: int) -> Iterator[tuple[int, ...]]:
        if need == 0:
            yield prefix
            return
        while cand and cand.bit_count() >= need:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            yield from rec(prefix + (v,), cand & rows[v], need - 1)

    if k == 0:
        yield ()
        return
    yield from rec((), cand, k)


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    return list(iter_cliques(g, 3))


def edge_clique_order(g: Graph, u: int, v: int) -> int:
    """Order of the largest clique containing the edge ``uv``."""
    if not g.has_edge(u, v):
        raise PreconditionError(f"({u}, {v}) is not an edge")
    common = g.rows[u] & g.rows[v]
    return 2 + max_clique_mask(g.rows, common).bit_count()


# ---------------------------------------------------------------------------
# neighbourhoods and densities


@dataclass(frozen=True)
class PairStats:
    a_size: int
    b_size: int
    cross_edges: int
    density: Fraction


def _disjoint(a: int, b: int) -> None:
    if a & b:
        raise PreconditionError(f"vertex sets overlap on {sorted(from_mask(a & b))}")


def common_neighborhood(g: Graph, a: Iterable[int], b: Iterable[int]) -> frozenset:
    am, bm = to_mask(a), to_mask(b)
    _disjoint(am, bm)
    out = bm
    for u in iter_bits(am):
        out &= g.rows[u]
    return from_mask(out)


def cross_edges(g: Graph, a: int, b: int) -> int:
    return sum((g.rows[u] & b).bit_count() for u in iter_bits(a))


def pair_density(g: Graph, a: Iterable[int], b: Iterable[int]) -> PairStats:
    am, bm = to_mask(a), to_mask(b)
    _disjoint(am, bm)
    if not am or not bm:
        raise PreconditionError("pair_density needs two nonempty sides")
    e = cross_edges(g, am, bm)
    na, nb = am.bit_count(), bm.bit_count()
    return PairStats(na, nb, e, Fraction(e, na * nb))


def min_crossing_degree(g: Graph, parts: Sequence[Iterable[int]]) -> int:
    masks = [to_mask(p) for p in parts]
    for i, m in enumerate(masks):
        if not m:
            raise PreconditionError(f"part {i} is empty")
    for i, j in combinations(range(len(masks)), 2):
        _disjoint(masks[i], masks[j])
    best = None
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            if i == j:
                continue
            for v in iter_bits(mi):
                d = (g.rows[v] & mj).bit_count()
                if best is None or d < best:
                    best = d
    return 0 if best is None else best
