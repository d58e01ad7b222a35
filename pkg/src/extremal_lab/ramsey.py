"""Small Ramsey numbers with witnesses, the inverse function Q(t, n), and the
closed-form growth envelopes for Q(t, n).

``R(t, m)`` is the least ``n`` such that every ``n``-vertex graph has a
``K_t`` or an independent ``m``-set. ``Q(t, n)`` is the least independence
number of a ``K_t``-free graph on ``n`` vertices, so ``Q(t, n)`` is the
largest ``m`` with ``R(t, m) <= n``. All logarithms are base 2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Iterable

from .errors import PreconditionError
from .generate import ClassSpec, extend_level, generate
from .graph import (
    Graph,
    complete_graph,
    empty_graph,
    find_clique,
    from_graph6,
    independence_number,
    to_graph6,
)

EXACT = "exact"
INTERVAL = "interval"


def binomial_upper(t: int, m: int) -> int:
    """The classical bound R(t, m) <= C(t + m - 2, t - 1)."""
    return comb(t + m - 2, t - 1)


@dataclass(frozen=True)
class RamseyEntry:
    t: int
    m: int
    lower: int
    upper: int
    witness: Graph | None = None  # K_t-free, alpha < m, on lower - 1 vertices

    @property
    def status(self) -> str:
        return EXACT if self.lower == self.upper else INTERVAL

    @property
    def value(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    def to_json(self) -> dict:
        value = self.lower if self.status == EXACT else {"lower": self.lower, "upper": self.upper}
        return {"t": self.t, "m": self.m, "value": value,
                "witness_graph6": None if self.witness is None else to_graph6(self.witness),
                "status": self.status}

    @classmethod
    def from_json(cls, d: dict) -> "RamseyEntry":
        v = d["value"]
        lo, hi = (v, v) if isinstance(v, int) else (v["lower"], v["upper"])
        w = d.get("witness_graph6")
        return cls(int(d["t"]), int(d["m"]), lo, hi, None if w is None else from_graph6(w))


def _trivial(t: int, m: int) -> RamseyEntry | None:
    if t < 1 or m < 1:
        raise PreconditionError(f"R(t, m) needs t, m >= 1, got ({t}, {m})")
    if t == 1 or m == 1:
        return RamseyEntry(t, m, 1, 1, empty_graph(0))
    if t == 2:
        return RamseyEntry(t, m, m, m, empty_graph(m - 1))
    if m == 2:
        return RamseyEntry(t, m, t, t, complete_graph(t - 1))
    return None


def ramsey_exact(t: int, m: int, vertex_budget: int | None = None, workers: int = 1,
                 max_level_size: int | None = None) -> RamseyEntry:
    """R(t, m) by orderly generation of the K_t-free graphs with alpha < m.

    Generation proceeds level by level. The first empty level ``n`` proves
    nonexistence there, so ``R(t, m) = n``; any graph on the previous level is
    a witness. If the vertex budget or the level-size budget runs out first,
    the result is an interval ``[last nonempty level + 1, C(t+m-2, t-1)]``
    with a witness for the lower end.
    """
    triv = _trivial(t, m)
    if triv is not None:
        return triv
    upper = binomial_upper(t, m)
    budget = upper if vertex_budget is None else min(vertex_budget, upper)
    spec = ClassSpec(forbid_clique=t, forbid_indep=m)
    level = [empty_graph(0)]
    for k in range(1, budget + 1):
        nxt = extend_level(level, spec, workers)
        if not nxt:
            return RamseyEntry(t, m, k, k, level[0])
        if max_level_size is not None and len(nxt) > max_level_size:
            break
        level = nxt
    # stopped early: every level reached is nonempty
    last = level[0].n
    return RamseyEntry(t, m, last + 1, upper, level[0])


def verify_witness(entry: RamseyEntry) -> bool:
    w = entry.witness
    if w is None:
        return True
    return w.n == entry.lower - 1 and find_clique(w, entry.t) is None and independence_number(w) < entry.m


def recursive_upper(t: int, m: int, known: Callable[[int, int], int | None] | None = None) -> int:
    """R(t, m) <= R(t-1, m) + R(t, m-1), seeded with exact values where known."""

    @lru_cache(maxsize=None)
    def rec(a: int, b: int) -> int:
        if known is not None:
            v = known(a, b)
            if v is not None:
                return v
        triv = _trivial(a, b)
        if triv is not None:
            return triv.upper
        return rec(a - 1, b) + rec(a, b - 1)

    return rec(t, m)


@dataclass
class RamseyTable:
    entries: dict[tuple[int, int], RamseyEntry] = field(default_factory=dict)

    def add(self, entry: RamseyEntry) -> None:
        self.entries[(entry.t, entry.m)] = entry

    def get(self, t: int, m: int) -> RamseyEntry | None:
        triv = _trivial(t, m)
        return triv if triv is not None else self.entries.get((t, m))

    def exact(self, t: int, m: int) -> int | None:
        e = self.get(t, m)
        return None if e is None else e.value

    @classmethod
    def build(cls, pairs: Iterable[tuple[int, int]], vertex_budget: int | None = None, workers: int = 1) -> "RamseyTable":
        table = cls()
        for t, m in pairs:
            table.add(ramsey_exact(t, m, vertex_budget, workers))
        return table

    def to_json(self) -> list[dict]:
        return [self.entries[k].to_json() for k in sorted(self.entries)]

    @classmethod
    def from_json(cls, data: list[dict] | str) -> "RamseyTable":
        if isinstance(data, str):
            data = json.loads(data)
        table = cls()
        for d in data:
            table.add(RamseyEntry.from_json(d))
        return table


def inverse_ramsey_q(t: int, n: int, table: RamseyTable) -> int:
    """Q(t, n): the unique m with R(t, m) <= n < R(t, m + 1)."""
    if t < 2 or n < 1:
        raise PreconditionError(f"need t >= 2 and n >= 1, got t={t}, n={n}")
    m = 1  # R(t, 1) = 1 <= n
    while True:
        e = table.get(t, m + 1)
        if e is None:
            raise PreconditionError(f"table has no entry for R({t},{m + 1}); needed to bracket n={n}")
        if e.lower > n:
            return m
        if e.upper <= n:
            m += 1
            continue
        raise PreconditionError(
            f"R({t},{m + 1}) is only known to lie in [{e.lower}, {e.upper}], which does not decide n={n}")


def min_alpha_direct(t: int, n: int, workers: int = 1) -> tuple[int, Graph]:
    """Smallest independence number over K_t-free graphs on n vertices, by generation."""
    gen = generate(ClassSpec(forbid_clique=t), n, workers=workers)
    best = None
    for g in gen.levels[n]:
        a = independence_number(g)
        if best is None or a < best[0]:
            best = (a, g)
    return best


# ---------------------------------------------------------------------------
# growth envelopes (constants set to 1 where the displays carry none)

def _log2(n: float) -> float:
    return math.log2(n)


def q3_envelope(n: float) -> tuple[float, float]:
    """(sqrt(n log n)/sqrt(2), sqrt(2) sqrt(n log n)) with lower-order terms dropped."""
    if n < 2:
        raise PreconditionError("n must be at least 2")
    base = math.sqrt(n * _log2(n))
    return base / math.sqrt(2), math.sqrt(2) * base


@dataclass(frozen=True)
class QEnvelope:
    """lower(n) = n^a (log n)^b, upper(n) = n^c (log n)^d."""

    t: int
    lower_exp: Fraction
    lower_log: Fraction
    upper_exp: Fraction
    upper_log: Fraction

    def lower(self, n: float) -> float:
        return n ** float(self.lower_exp) * _log2(n) ** float(self.lower_log)

    def upper(self, n: float) -> float:
        return n ** float(self.upper_exp) * _log2(n) ** float(self.upper_log)


_ENVELOPES = {
    4: QEnvelope(4, Fraction(1, 3), Fraction(2, 3), Fraction(2, 5), Fraction(4, 5)),
    5: QEnvelope(5, Fraction(1, 4), Fraction(3, 4), Fraction(1, 3), Fraction(8, 9)),
}


def q_envelope(t: int) -> QEnvelope:
    if t not in _ENVELOPES:
        raise PreconditionError(f"envelope only available for t in {sorted(_ENVELOPES)}, got {t}")
    return _ENVELOPES[t]


def shearer_threshold(k: int) -> int:
    """ceil(2k^2 / log k): vertex count forcing a triangle or an independent k-set (large k)."""
    if k < 2:
        raise PreconditionError("k must be at least 2")
    if k & (k - 1) == 0:
        lg = k.bit_length() - 1
        return -(-2 * k * k // lg)
    return math.ceil(2 * k * k / math.log2(k))
