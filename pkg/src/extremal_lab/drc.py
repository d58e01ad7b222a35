"""Dependent random choice on a k-partite host graph.

The host has parts ``Z_1, ..., Z_k`` of equal size ``n``; every vertex of the
last part must see at least ``gamma * n`` vertices of each other part. One run:

1. for each of the first ``k - 1`` parts draw ``q`` vertices uniformly with
   replacement;
2. ``S'`` = vertices of the last part adjacent to every drawn vertex;
3. a ``t``-subset ``T`` of the last part is bad if some earlier part holds
   fewer than ``gamma^a * n`` common neighbours of ``T``, where
   ``a = 2(k-1)(t+1)/c``; scanning the ``t``-subsets of ``S'`` in
   lexicographic order, delete the largest vertex of every bad one that is
   still intact. The survivors form ``S``.

``q_real = (c / (2(k-1))) * log n / log(1/gamma)``; sampling uses its ceiling.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .graph import Graph, iter_bits

EXHAUSTIVE_TUPLES = 10 ** 6
MAX_SCAN_TUPLES = 10 ** 7
INTEGRALITY_TOL = 1e-9


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x)) if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True)
class DRCParams:
    k: int
    n: int
    gamma: Fraction
    c: Fraction
    t: int

    def __post_init__(self):
        object.__setattr__(self, "gamma", _frac(self.gamma))
        object.__setattr__(self, "c", _frac(self.c))
        if self.k < 2:
            raise PreconditionError("k must be at least 2")
        if self.n < 2:
            raise PreconditionError("n must be at least 2")
        if not 0 < self.gamma < 1:
            raise PreconditionError("gamma must lie strictly between 0 and 1")
        if self.c <= 0:
            raise PreconditionError("c must be positive")
        if self.t < 2:
            raise PreconditionError("t must be at least 2")

    @property
    def c_small(self) -> bool:
        """True when c < 4 / log2 n, where the n^(c/2) factors carry little information."""
        return float(self.c) < 4 / math.log2(self.n)

    @property
    def meaningful(self) -> bool:
        """gamma^a * n >= 1, i.e. the tuple guarantee asks for at least one common neighbour."""
        return tuple_threshold_log(self) >= 0


def drc_exponent_a(p: DRCParams) -> Fraction:
    return Fraction(2 * (p.k - 1) * (p.t + 1)) / p.c


def drc_sample_size_q(p: DRCParams) -> tuple[float, int]:
    """(q_real, q) with q the ceiling of q_real, treating near-integers as integers."""
    q_real = float(p.c) / (2 * (p.k - 1)) * math.log(p.n) / -math.log(p.gamma)
    nearest = round(q_real)
    q = nearest if abs(q_real - nearest) <= INTEGRALITY_TOL * max(1.0, q_real) else math.ceil(q_real)
    return q_real, max(q, 1)


def tuple_threshold_log(p: DRCParams) -> float:
    """log(gamma^a * n)."""
    return float(drc_exponent_a(p)) * math.log(p.gamma) + math.log(p.n)


def tuple_threshold(p: DRCParams) -> float:
    return math.exp(tuple_threshold_log(p))


@dataclass(frozen=True)
class ExpectationReport:
    q_real: float
    a: Fraction
    lhs_size_log: float  # log(n gamma^((k-1) q_real))
    rhs_size_log: float  # log(n^(1 - c/2))
    lhs_bad_log: float  # log(n^t gamma^(a q_real))
    rhs_bad_log: float  # log(n^-1)
    size_rel_err: float
    bad_rel_err: float
    bound: float  # n^(1-c/2) / 2
    expectation_lower: float  # n^(1-c/2) - 1/n
    size_floor: float  # n^(1-c) / 2
    halving_ok: bool  # n^(1-c/2) - 1/n >= n^(1-c/2) / 2

    @property
    def holds(self) -> bool:
        return self.size_rel_err < 1e-9 and self.bad_rel_err < 1e-9


def drc_expectation_identities(p: DRCParams) -> ExpectationReport:
    """Check n gamma^((k-1)q) = n^(1-c/2) and n^t gamma^(aq) = 1/n in the log domain."""
    q_real, _ = drc_sample_size_q(p)
    a = drc_exponent_a(p)
    ln_n, ln_g, c = math.log(p.n), math.log(p.gamma), float(p.c)
    lhs1 = ln_n + (p.k - 1) * q_real * ln_g
    rhs1 = (1 - c / 2) * ln_n
    lhs2 = p.t * ln_n + float(a) * q_real * ln_g
    rhs2 = -ln_n
    # errors are relative to the size of the terms being cancelled
    err1 = abs(lhs1 - rhs1) / max(abs(rhs1), ln_n)
    err2 = abs(lhs2 - rhs2) / max(abs(rhs2), p.t * ln_n)
    main = p.n ** (1 - c / 2)
    return ExpectationReport(q_real, a, lhs1, rhs1, lhs2, rhs2, err1, err2, main / 2, main - 1 / p.n,
                             p.n ** (1 - c) / 2, main - 1 / p.n >= main / 2)


# ---------------------------------------------------------------------------
# host graphs

@dataclass(frozen=True)
class Host:
    """A graph with its vertices split into k equal parts (last part is the target)."""

    graph: Graph
    parts: tuple[tuple[int, ...], ...]

    @classmethod
    def from_labels(cls, g: Graph, labels: Sequence[int]) -> "Host":
        if len(labels) != g.n:
            raise PreconditionError(f"need one part label per vertex ({g.n}), got {len(labels)}")
        k = max(labels) + 1 if labels else 0
        parts = tuple(tuple(v for v in range(g.n) if labels[v] == i) for i in range(k))
        if k < 2 or len({len(p) for p in parts}) != 1:
            raise PreconditionError("parts must number at least 2 and have equal sizes")
        return cls(g, parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return len(self.parts[0])

    def masks(self) -> list[int]:
        return [sum(1 << v for v in part) for part in self.parts]


def complete_multipartite_host(k: int, n: int) -> Host:
    from .graph import complete_multipartite

    g = complete_multipartite([n] * k)
    return Host(g, tuple(tuple(range(i * n, (i + 1) * n)) for i in range(k)))


def random_multipartite_host(k: int, n: int, density: float, seed: int = 0) -> Host:
    """Each cross pair is an edge independently with probability ``density``."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, k, n])))
    edges = []
    for i in range(k):
        for j in range(i + 1, k):
            hit = rng.random((n, n)) < density
            for a, b in zip(*np.nonzero(hit)):
                edges.append((i * n + int(a), j * n + int(b)))
    g = Graph.from_edges(k * n, edges)
    return Host(g, tuple(tuple(range(i * n, (i + 1) * n)) for i in range(k)))


def check_degree_condition(host: Host, gamma: Fraction) -> None:
    masks = host.masks()
    n = host.n
    for v in host.parts[-1]:
        for i in range(host.k - 1):
            d = (host.graph.rows[v] & masks[i]).bit_count()
            if d < gamma * n:
                raise PreconditionError(
                    f"vertex {v} of the last part has {d} neighbours in part {i}, fewer than gamma*n = {float(gamma * n):g}")


# ---------------------------------------------------------------------------
# one run

@dataclass(frozen=True)
class DRCOutcome:
    q: int
    s_prime: frozenset[int]
    bad_count: int  # X: bad t-subsets of S'
    s: frozenset[int]
    min_common: int | None  # smallest |N(T, Z_i)| over t-subsets T of S and i < k
    threshold: float  # gamma^a * n
    verified: bool  # every t-subset of S checked (else sampled)
    guarantee_ok: bool

    @property
    def s_prime_size(self) -> int:
        return len(self.s_prime)

    @property
    def s_size(self) -> int:
        return len(self.s)

    @property
    def gain(self) -> int:
        return len(self.s_prime) - self.bad_count

    def to_json(self) -> dict:
        return {"q": self.q, "s_prime_size": self.s_prime_size, "bad_count": self.bad_count,
                "s_size": self.s_size, "s": sorted(self.s), "min_common": self.min_common,
                "threshold": self.threshold, "verified": self.verified, "guarantee_ok": self.guarantee_ok}


def _rng(seed) -> np.random.Generator:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(ss))


def _is_bad(nbr: list[list[int]], tup: tuple[int, ...], threshold: float) -> tuple[bool, int]:
    worst = None
    for masks in nbr:
        common = -1
        for v in tup:
            common &= masks[v]
        size = common.bit_count()
        worst = size if worst is None else min(worst, size)
    return worst < threshold, worst


def drc_run(host: Host, p: DRCParams, seed=0, check: bool = True) -> DRCOutcome:
    if host.k != p.k or host.n != p.n:
        raise PreconditionError(f"host has k={host.k}, n={host.n} but params say k={p.k}, n={p.n}")
    if check:
        check_degree_condition(host, p.gamma)
    if p.c_small:
        warnings.warn(f"c = {p.c} is below 4/log2(n); the size bound is weak at this n", stacklevel=2)
    rng = _rng(seed)
    _, q = drc_sample_size_q(p)
    masks = host.masks()
    rows = host.graph.rows
    target = host.parts[-1]
    # nbr[i][v]: neighbours of target vertex v inside part i
    nbr = [{v: rows[v] & masks[i] for v in target} for i in range(p.k - 1)]
    drawn = 0
    for i in range(p.k - 1):
        picks = rng.integers(0, p.n, size=q)
        for j in picks:
            drawn |= 1 << host.parts[i][int(j)]
    s_prime = [v for v in target if rows[v] & drawn == drawn]
    if comb(len(s_prime), p.t) > MAX_SCAN_TUPLES:
        raise BudgetExceeded(f"|S'| = {len(s_prime)} gives more than {MAX_SCAN_TUPLES} {p.t}-subsets to scan")
    threshold = tuple_threshold(p)
    alive = set(s_prime)
    bad = 0
    for tup in combinations(s_prime, p.t):
        is_bad, _ = _is_bad(nbr, tup, threshold)
        if is_bad:
            bad += 1
            if all(v in alive for v in tup):
                alive.discard(max(tup))
    s = sorted(alive)
    min_common, verified, ok = _verify(nbr, s, p.t, threshold, rng)
    return DRCOutcome(q, frozenset(s_prime), bad, frozenset(s), min_common, threshold, verified, ok)


def _verify(nbr, s: list[int], t: int, threshold: float, rng: np.random.Generator):
    total = comb(len(s), t)
    if total == 0:
        return None, True, True
    if total <= EXHAUSTIVE_TUPLES:
        tuples = combinations(s, t)
        verified = True
    else:
        tuples = (tuple(sorted(int(x) for x in rng.choice(s, size=t, replace=False))) for _ in range(10 ** 4))
        verified = False
    worst = None
    for tup in tuples:
        _, w = _is_bad(nbr, tup, threshold)
        worst = w if worst is None else min(worst, w)
    return worst, verified, worst >= threshold


# ---------------------------------------------------------------------------
# Monte Carlo

@dataclass(frozen=True)
class MonteCarloReport:
    trials: int
    mean: float  # of |S'| - X
    std_error: float
    bound: float  # n^(1-c/2) / 2
    size_floor: float  # n^(1-c) / 2
    min_s_size: int
    values: tuple[int, ...] = field(repr=False)

    @property
    def passes(self) -> bool:
        return self.mean + 3 * self.std_error >= self.bound

    def to_json(self) -> dict:
        return {"trials": self.trials, "mean": self.mean, "std_error": self.std_error, "bound": self.bound,
                "size_floor": self.size_floor, "min_s_size": self.min_s_size, "passes": self.passes}


def _trial(args) -> tuple[int, int]:
    host, p, ss = args
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = drc_run(host, p, ss, check=False)
    return out.gain, out.s_size


def drc_monte_carlo(host: Host, p: DRCParams, trials: int, seed: int = 0, workers: int = 1) -> MonteCarloReport:
    """Empirical mean and standard error of |S'| - X over independent runs."""
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    check_degree_condition(host, p.gamma)
    children = np.random.SeedSequence(seed).spawn(trials)
    jobs = [(host, p, ss) for ss in children]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        results = [_trial(j) for j in jobs]
    gains = np.array([r[0] for r in results], dtype=float)
    se = float(gains.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    c = float(p.c)
    return MonteCarloReport(trials, float(gains.mean()), se, p.n ** (1 - c / 2) / 2, p.n ** (1 - c) / 2,
                            min(r[1] for r in results), tuple(int(x) for x in gains))
