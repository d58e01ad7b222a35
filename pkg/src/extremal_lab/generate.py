"""Isomorph-free generation of hereditary graph classes, one vertex at a time.

The classes handled are ``{G : K_t not a subgraph, alpha(G) < m}`` with either
bound optional. Both conditions are hereditary, so every member on ``k + 1``
vertices arises from a member on ``k`` vertices by adding one vertex. We only
add vertices that end up with minimum degree in the new graph: deleting a
minimum-degree vertex from any member gives a member, so nothing is lost,
and the candidate neighbourhoods stay small. Duplicates are removed with the
canonical certificate from :mod:`extremal_lab.canon`.

Removing a minimum-degree vertex never lowers edge density, which makes the
optional density floor (``EdgeFloor``) a valid pruning rule: a graph below the
floor at level ``k`` has no descendant at the target level reaching it.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Iterator, Sequence

from .canon import canonical_labeling
from .errors import BudgetExceeded
from .graph import Graph, empty_graph, iter_bits, max_clique_mask


@dataclass(frozen=True)
class EdgeFloor:
    """Keep a level-``k`` graph only if its density can still reach ``edges`` on ``n`` vertices."""

    edges: int
    n: int

    def admits(self, g: Graph) -> bool:
        k = g.n
        if k < 2:
            return True
        return g.num_edges() * comb(self.n, 2) >= self.edges * comb(k, 2)


@dataclass(frozen=True)
class ClassSpec:
    forbid_clique: int | None = None  # t: no K_t
    forbid_indep: int | None = None  # m: no independent m-set
    floor: EdgeFloor | None = None


@dataclass
class Generation:
    spec: ClassSpec
    levels: list[list[Graph]] = field(default_factory=list)

    def counts(self) -> list[int]:
        return [len(level) for level in self.levels]


def _complement_rows(rows: Sequence[int]) -> list[int]:
    full = (1 << len(rows)) - 1
    return [full & ~r & ~(1 << v) for v, r in enumerate(rows)]


def neighbourhoods(g: Graph, spec: ClassSpec) -> Iterator[int]:
    """Candidate neighbourhood masks for a new vertex of minimum degree."""
    n = g.n
    rows = g.rows
    comp = _complement_rows(rows)
    degs = [r.bit_count() for r in rows]
    max_size = min(degs) + 1 if n else 0
    t, m = spec.forbid_clique, spec.forbid_indep
    if t is not None and t <= 1:
        return
    if m is not None and m <= 1:
        return
    # cliques inside N must stay below t - 1; independent sets outside N below m - 1
    clique_cap = None if t is None else t - 2
    indep_cap = None if m is None else m - 2

    def rec(v: int, nmask: int, size: int, out: int) -> Iterator[int]:
        if v == n:
            for u in range(n):
                if size > degs[u] + (nmask >> u & 1):
                    return
            yield nmask
            return
        bit = 1 << v
        if size < max_size:
            ok = True
            if clique_cap is not None:
                inside = nmask & rows[v]
                if clique_cap == 0 or (inside and max_clique_mask(rows, inside, stop_at=clique_cap).bit_count() >= clique_cap):
                    ok = False
            if ok:
                yield from rec(v + 1, nmask | bit, size + 1, out)
        if degs[v] >= size:
            new_out = out | bit
            if indep_cap is None or max_clique_mask(comp, new_out, stop_at=indep_cap + 1).bit_count() <= indep_cap:
                yield from rec(v + 1, nmask, size, new_out)

    yield from rec(0, 0, 0, 0)


def add_vertex(g: Graph, nmask: int) -> Graph:
    n = g.n
    rows = list(g.rows)
    for u in iter_bits(nmask):
        rows[u] |= 1 << n
    rows.append(nmask)
    return Graph._trusted(n + 1, rows)


def _extend_block(parents: Sequence[Graph], spec: ClassSpec) -> dict[tuple[int, ...], Graph]:
    out: dict[tuple[int, ...], Graph] = {}
    for g in parents:
        for nmask in neighbourhoods(g, spec):
            h = add_vertex(g, nmask)
            if spec.floor is not None and not spec.floor.admits(h):
                continue
            perm, cert = canonical_labeling(h)
            if cert not in out:
                out[cert] = Graph._trusted(h.n, cert)
    return out


def extend_level(parents: Sequence[Graph], spec: ClassSpec, workers: int = 1) -> list[Graph]:
    """All members on one more vertex, canonical forms sorted by certificate."""
    if workers <= 1 or len(parents) < 2 * workers:
        merged = _extend_block(parents, spec)
    else:
        size = -(-len(parents) // (4 * workers))
        blocks = [parents[i:i + size] for i in range(0, len(parents), size)]
        merged = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_extend_block, blocks, [spec] * len(blocks)):
                merged.update(part)
    return [merged[c] for c in sorted(merged)]


def generate(spec: ClassSpec, max_n: int, workers: int = 1, stop_when_empty: bool = True,
             max_level_size: int | None = None) -> Generation:
    """Levels ``0..max_n`` of the class (level ``k`` = members on ``k`` vertices)."""
    gen = Generation(spec)
    level = [empty_graph(0)]
    gen.levels.append(level)
    for _ in range(max_n):
        level = extend_level(level, spec, workers)
        if max_level_size is not None and len(level) > max_level_size:
            raise BudgetExceeded(f"level {len(gen.levels)} has {len(level)} graphs, over the budget {max_level_size}")
        gen.levels.append(level)
        if stop_when_empty and not level:
            break
    return gen
