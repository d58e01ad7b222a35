"""Vectorised invariants over every labelled graph on a small vertex set.

A labelled graph on ``n`` vertices is an integer code whose bit ``i`` says
whether edge ``edge_index(n)[i]`` is present. Clique presence for every vertex
subset is built bottom-up (``S`` is a clique iff ``S - max(S)`` is one and
``max(S)`` sees the rest), which gives the largest clique through each edge
and the clique number of a whole block of codes in a few hundred numpy ops.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Callable, Iterable, TypeVar

import numpy as np

from .graph import Graph

T = TypeVar("T")

DEFAULT_CHUNK = 1 << 18


@lru_cache(maxsize=None)
def edge_index(n: int) -> tuple[tuple[int, int], ...]:
    """Edges in graph6 order: (0,1), (0,2), (1,2), (0,3), ..."""
    return tuple((i, j) for j in range(1, n) for i in range(j))


@lru_cache(maxsize=None)
def _edge_position(n: int) -> dict[tuple[int, int], int]:
    return {e: i for i, e in enumerate(edge_index(n))}


def graph_from_code(n: int, code: int) -> Graph:
    edges = edge_index(n)
    return Graph.from_edges(n, [edges[i] for i in range(len(edges)) if code >> i & 1])


def code_of(g: Graph) -> int:
    pos = _edge_position(g.n)
    return sum(1 << pos[e] for e in g.edges())


def num_codes(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


def _clique_presence(n: int, codes: np.ndarray) -> dict[int, np.ndarray]:
    pos = _edge_position(n)
    ebits = {e: ((codes >> i) & 1).astype(bool) for e, i in pos.items()}
    present: dict[int, np.ndarray] = {}
    for mask in sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), m)):
        if mask & (mask - 1) == 0:
            continue
        v = mask.bit_length() - 1
        rest = mask ^ (1 << v)
        acc = present.get(rest)
        for u in range(v):
            if rest >> u & 1:
                acc = ebits[(u, v)] if acc is None else acc & ebits[(u, v)]
        present[mask] = acc
    return present


def clique_orders(n: int, codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-edge largest-clique order (0 for non-edges) and the clique number.

    Returns ``(orders, omega)`` with shapes ``(E, N)`` and ``(N,)``.
    """
    codes = np.asarray(codes, dtype=np.int64)
    edges = edge_index(n)
    orders = np.zeros((len(edges), len(codes)), dtype=np.uint8)
    omega = np.zeros(len(codes), dtype=np.uint8)
    if n >= 1:
        omega[:] = 1
    if n < 2:
        return orders, omega
    pos = _edge_position(n)
    present = _clique_presence(n, codes)
    for mask, pres in present.items():
        k = bin(mask).count("1")
        members = [v for v in range(n) if mask >> v & 1]
        omega[pres] = k
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                orders[pos[(members[a], members[b])]][pres] = k
    return orders, omega


def clique_number_array(n: int, codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    omega = np.ones(len(codes), dtype=np.uint8) if n >= 1 else np.zeros(len(codes), dtype=np.uint8)
    if n < 2:
        return omega
    for mask, pres in _clique_presence(n, codes).items():
        omega[pres] = bin(mask).count("1")
    return omega


def omega_alpha(n: int, codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    codes = np.asarray(codes, dtype=np.int64)
    full = num_codes(n) - 1
    return clique_number_array(n, codes), clique_number_array(n, codes ^ full)


def edge_counts(n: int, codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.zeros(len(codes), dtype=np.int64)
    for i in range(len(edge_index(n))):
        out += (codes >> i) & 1
    return out


def chunks(n: int, chunk: int = DEFAULT_CHUNK) -> list[tuple[int, int]]:
    total = num_codes(n)
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def default_workers() -> int:
    env = os.environ.get("EXTREMAL_LAB_WORKERS")
    return max(1, int(env)) if env else 1


def map_chunks(func: Callable[[int, int, int], T], n: int, workers: int | None = None,
               chunk: int = DEFAULT_CHUNK) -> list[T]:
    """Apply ``func(n, lo, hi)`` to every code block, in block order.

    ``func`` must be a module-level function so it can be shipped to workers.
    """
    blocks = chunks(n, chunk)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(blocks) == 1:
        return [func(n, lo, hi) for lo, hi in blocks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(func, n, lo, hi) for lo, hi in blocks]
        return [f.result() for f in futures]


def code_range(lo: int, hi: int) -> np.ndarray:
    return np.arange(lo, hi, dtype=np.int64)


def iter_labeled_graphs(n: int) -> Iterable[Graph]:
    for code in range(num_codes(n)):
        yield graph_from_code(n, code)
