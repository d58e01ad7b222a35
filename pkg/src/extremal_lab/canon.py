"""Canonical labelling of small graphs.

Colour refinement followed by an individualisation search. The certificate of
a leaf is the tuple of relabelled adjacency rows; the canonical form is the
leaf with the largest certificate. Two prunings keep symmetric graphs cheap:

* twins (equal open or closed neighbourhoods) in the target cell lead to
  identical subtrees, so only one per twin class is explored;
* automorphisms found from equal leaf certificates prune target-cell vertices
  that lie in one orbit of the pointwise stabiliser of the current prefix.

Intended for n up to roughly 20; there is no certificate-prefix pruning.
"""

from __future__ import annotations

from typing import Sequence

from .graph import Graph, iter_bits, to_graph6


def _refine(rows: Sequence[int], colors: list[int]) -> list[int]:
    """Equitable refinement. Colours are ranks 0..k-1, ordered canonically."""
    n = len(rows)
    ncls = len(set(colors))
    while True:
        masks = [0] * ncls
        for v, c in enumerate(colors):
            masks[c] |= 1 << v
        sigs = [(colors[v], tuple((rows[v] & m).bit_count() for m in masks)) for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(ranks) == ncls:
            return new
        colors, ncls = new, len(ranks)


def _individualize(colors: list[int], v: int) -> list[int]:
    # v takes a fresh colour placed just before the rest of its cell
    c = colors[v]
    return [2 * x + 1 if (x == c and u != v) or x > c else 2 * x for u, x in enumerate(colors)]


def _rank(colors: list[int]) -> list[int]:
    ranks = {c: i for i, c in enumerate(sorted(set(colors)))}
    return [ranks[c] for c in colors]


def _certificate(rows: Sequence[int], perm: list[int]) -> tuple[int, ...]:
    n = len(rows)
    out = [0] * n
    for v in range(n):
        row = 0
        for u in iter_bits(rows[v]):
            row |= 1 << perm[u]
        out[perm[v]] = row
    return tuple(out)


def _orbit_reps(cell: list[int], autos: list[list[int]], fixed: list[int], n: int) -> list[int]:
    gens = [a for a in autos if all(a[f] == f for f in fixed)]
    if not gens:
        return cell
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in gens:
        for v in range(n):
            rv, rw = find(v), find(a[v])
            if rv != rw:
                parent[max(rv, rw)] = min(rv, rw)
    roots = set()
    reps = []
    for v in cell:
        r = find(v)
        if r not in roots:
            roots.add(r)
            reps.append(v)
    return reps


def canonical_labeling(g: Graph) -> tuple[list[int], tuple[int, ...]]:
    """Return ``(perm, certificate)``; ``g.relabel(perm)`` is the canonical form."""
    rows = g.rows
    n = g.n
    if n == 0:
        return [], ()
    start = _refine(rows, _rank([r.bit_count() for r in rows]))
    best: list = [None, None]
    autos: list[list[int]] = []

    def search(colors: list[int], fixed: list[int]) -> None:
        ncls = len(set(colors))
        if ncls == n:
            cert = _certificate(rows, colors)
            if best[0] is None or cert > best[0]:
                best[0], best[1] = cert, colors
            elif cert == best[0]:
                # best^{-1} o colors maps leaf labelling onto the best one
                inv = [0] * n
                for v, p in enumerate(best[1]):
                    inv[p] = v
                auto = [inv[colors[v]] for v in range(n)]
                if any(auto[v] != v for v in range(n)):
                    autos.append(auto)
            return
        sizes: dict[int, int] = {}
        for c in colors:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, s in sizes.items() if s > 1)
        cell = [v for v in range(n) if colors[v] == target]
        seen_twins: set[tuple[int, int]] = set()
        tried: list[int] = []
        for v in cell:
            key_open = (0, rows[v])
            key_closed = (1, rows[v] | (1 << v))
            if key_open in seen_twins or key_closed in seen_twins:
                continue
            if tried and v not in _orbit_reps(tried + [v], autos, fixed, n):
                continue
            seen_twins.add(key_open)
            seen_twins.add(key_closed)
            tried.append(v)
            search(_refine(rows, _rank(_individualize(colors, v))), fixed + [v])

    search(start, [])
    return best[1], best[0]


def canonical_form(g: Graph) -> Graph:
    perm, cert = canonical_labeling(g)
    return Graph._trusted(g.n, cert)


def certificate(g: Graph) -> tuple[int, tuple[int, ...]]:
    """Hashable isomorphism invariant that is complete: equal iff isomorphic."""
    return g.n, canonical_labeling(g)[1]


def canonical_graph6(g: Graph) -> str:
    return to_graph6(canonical_form(g))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return certificate(g) == certificate(h)
