"""Reference table of known Ramsey-Turán densities for K_s, 3 <= s <= 13.

Each entry records the clique order ``s``, a symbolic tag for the independence
bound ``f``, a density (exact value or upper bound), whether the result rests
on the off-diagonal Ramsey growth conjecture, and a source tag. ``g(n)`` below
stands for ``n e^{-w(n) sqrt(log n)}`` with ``w`` slowly growing; such tags are
descriptive only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

EXACT = "exact"
UPPER = "upper"
CONJECTURE_TAG = "ramsey-growth-conjecture"
THIS_WORK = "(*)"

# o(sqrt(n log n)) and o(Q(3,n)) describe the same regime
ALIASES = {"o(Q(3,n))": "o(sqrt(n log n))"}


@dataclass(frozen=True)
class DensityCatalogEntry:
    s: int
    f_class: str
    density: Fraction
    status: str
    source: str
    conditional: bool = False

    @property
    def conjecture_tag(self) -> str | None:
        return CONJECTURE_TAG if self.conditional else None

    @property
    def lower(self) -> Fraction:
        return self.density if self.status == EXACT else Fraction(0)

    @property
    def upper(self) -> Fraction:
        return self.density

    def to_json(self) -> dict:
        return {"s": self.s, "f_class": self.f_class, "density": f"{self.density.numerator}/{self.density.denominator}",
                "density_num": self.density.numerator, "density_den": self.density.denominator,
                "density_decimal": float(self.density), "status": self.status, "source": self.source,
                "conditional": self.conditional, "conjecture_tag": self.conjecture_tag}


def _e(s, f, num, den, status, source, cond=False):
    return DensityCatalogEntry(s, f, Fraction(num, den), status, source, cond)


X, U = EXACT, UPPER

ENTRIES: tuple[DensityCatalogEntry, ...] = (
    _e(3, "n/2", 1, 4, X, "Mantels"),
    _e(3, "o(n)", 0, 1, X, "Mantels"),

    _e(4, "n/3", 1, 3, X, "Turans"),
    _e(4, "o(n)", 1, 8, X, "Szemeredi, BollErdos"),
    _e(4, "g(n)", 0, 1, X, "Sudakov"),

    _e(5, "n/4", 3, 8, X, "Turans"),
    _e(5, "o(n)", 1, 4, X, "ErdosSos1"),
    _e(5, "2sqrt(n log n)", 1, 4, X, "BHS"),
    _e(5, "o(sqrt(n log n))", 0, 1, X, "BHS"),

    _e(6, "n/5", 2, 5, X, "Turans"),
    _e(6, "o(n)", 2, 7, X, "EHSSS"),
    _e(6, "g(n)", 1, 4, X, "BHS"),
    _e(6, "2sqrt(n log n)", 1, 4, X, "Sudakov"),
    _e(6, "o(sqrt(n log n))", 1, 6, U, "EHSSS1"),
    _e(6, "sqrt(n) e^(-w(n) sqrt(log n))", 0, 1, X, "Sudakov"),

    _e(7, "n/6", 5, 12, X, "Turans"),
    _e(7, "o(n)", 1, 3, X, "ErdosSos1"),
    _e(7, "2sqrt(n log n)", 1, 3, X, "BHS"),
    _e(7, "o(sqrt(n log n))", 1, 4, X, "BHS"),
    _e(7, "Q(4,n)", 1, 4, X, "BHS"),
    _e(7, "o(Q(4,n))", 0, 1, X, "BHS"),

    _e(8, "n/7", 3, 7, X, "Turans"),
    _e(8, "o(n)", 7, 20, X, "EHSSS"),
    _e(8, "g(n)", 1, 3, X, "BHS"),
    _e(8, "2sqrt(n log n)", 1, 3, X, "BHS"),
    _e(8, "o(sqrt(n log n))", 1, 4, X, "KKL"),
    _e(8, "Q(4,n)", 1, 4, X, "BHS"),
    _e(8, "o(Q(4,n))", 3, 16, U, "BHS"),
    _e(8, "Q(4,g(n))", 0, 1, X, "BHS"),

    _e(9, "n/8", 7, 16, X, "Turans"),
    _e(9, "o(n)", 3, 8, X, "ErdosSos1"),
    _e(9, "2sqrt(n log n)", 3, 8, X, "BHS"),
    _e(9, "o(sqrt(n log n))", 3, 10, U, THIS_WORK),
    _e(9, "Q(3,g(n))", 1, 4, X, "BHS"),
    _e(9, "o(Q(4,n))", 1, 4, X, THIS_WORK),
    _e(9, "Q(5,n)", 1, 4, X, "BHS", True),
    _e(9, "o(Q(5,n))", 0, 1, X, "BHS", True),

    _e(10, "n/9", 4, 9, X, "Turans"),
    _e(10, "o(n)", 5, 13, X, "EHSSS"),
    _e(10, "g(n)", 3, 8, X, "BHS"),
    _e(10, "2sqrt(n log n)", 3, 8, X, "BHS"),
    _e(10, "o(sqrt(n log n))", 1, 3, X, "BHS"),
    _e(10, "Q(4,n)", 1, 3, X, "BHS"),
    _e(10, "o(Q(4,n))", 1, 4, X, THIS_WORK),
    _e(10, "Q(5,n)", 1, 4, X, "BHS", True),
    _e(10, "o(Q(5,n))", 1, 5, U, "BHS", True),
    _e(10, "Q(5,g(n))", 0, 1, X, "BHS", True),

    _e(11, "n/10", 9, 20, X, "Turans"),
    _e(11, "o(n)", 2, 5, X, "ErdosSos1"),
    _e(11, "sqrt(n log n)", 2, 5, X, "BHS"),
    _e(11, "o(sqrt(n log n))", 7, 20, U, "BHS"),
    _e(11, "sqrt(n) e^(-w(n) sqrt(log n))", 1, 3, X, "BHS"),
    _e(11, "Q(4,n)", 1, 3, X, "BHS"),
    _e(11, "o(Q(4,n))", 1, 4, X, THIS_WORK),
    _e(11, "Q(6,n)", 1, 4, X, "BHS", True),
    _e(11, "o(Q(6,n))", 0, 1, X, "BHS", True),

    _e(12, "n/11", 5, 11, X, "Turans"),
    _e(12, "o(n)", 13, 32, X, "EHSSS"),
    _e(12, "g(n)", 2, 5, X, "BHS"),
    _e(12, "sqrt(n log n)", 2, 5, X, "BHS"),
    _e(12, "o(sqrt(n log n))", 8, 22, U, "BHS"),
    _e(12, "sqrt(n) e^(-w(n) sqrt(log n))", 1, 3, X, "BHS"),
    _e(12, "Q(4,n)", 1, 3, X, "BHS"),
    _e(12, "o(Q(4,n))", 4, 13, U, THIS_WORK),
    _e(12, "Q(4,g(n))", 1, 4, X, "BHS", True),
    _e(12, "Q(6,n)", 1, 4, X, "BHS", True),
    _e(12, "o(Q(6,n))", 5, 24, U, "BHS", True),
    _e(12, "Q(6,g(n))", 0, 1, X, "BHS", True),

    _e(13, "n/12", 11, 24, X, "Turans"),
    _e(13, "o(n)", 5, 12, X, "ErdosSos1"),
    _e(13, "sqrt(n log n)", 5, 12, X, "BHS"),
    _e(13, "o(sqrt(n log n))", 3, 8, X, "BHS"),
    _e(13, "Q(4,n)", 3, 8, X, "BHS"),
    _e(13, "o(Q(4,n))", 1, 3, X, "BHS", True),
    _e(13, "Q(5,n)", 1, 3, X, "BHS", True),
    _e(13, "o(Q(5,n))", 4, 15, U, THIS_WORK),
    _e(13, "o(Q(5,n))", 1, 4, X, THIS_WORK, True),
    _e(13, "Q(7,n)", 1, 4, X, "BHS", True),
    _e(13, "o(Q(7,n))", 0, 1, X, "BHS", True),
)


def canonical_tag(f_class: str) -> str:
    tag = " ".join(f_class.split())
    return ALIASES.get(tag, tag)


def catalog_lookup(s: int, f_class: str | None = None) -> list[DensityCatalogEntry]:
    """All entries for ``s`` (and ``f_class`` when given); unknown ``s`` gives an empty list."""
    tag = None if f_class is None else canonical_tag(f_class)
    return [e for e in ENTRIES if e.s == s and (tag is None or e.f_class == tag)]


# ---------------------------------------------------------------------------
# finite-n budgets for the tags that have one

LITTLE_O_FACTOR = Fraction(1, 4)


def _sqrt_nlogn(n: int) -> float:
    return math.sqrt(n * math.log2(n)) if n >= 2 else 0.0


def _base_evaluator(tag: str) -> Callable[[int], float] | None:
    if tag.startswith("n/"):
        r = int(tag[2:])
        return lambda n: n / r
    if tag == "n":
        return lambda n: float(n)
    if tag == "2sqrt(n log n)":
        return lambda n: 2 * _sqrt_nlogn(n)
    if tag == "sqrt(n log n)":
        return _sqrt_nlogn
    return None


def evaluate_budget(f_class: str, n: int, little_o_factor: Fraction = LITTLE_O_FACTOR) -> int | None:
    """Integer independence budget for ``f_class`` at ``n``, or None if the tag has no finite form.

    ``o(f)`` is read as ``little_o_factor * f``. Tags built on Q(t, .) or on
    the slowly growing exponent are not evaluated.
    """
    tag = canonical_tag(f_class)
    factor = 1.0
    if tag.startswith("o(") and tag.endswith(")"):
        tag = tag[2:-1]
        factor = float(little_o_factor)
    ev = _base_evaluator(tag)
    if ev is None:
        return None
    return math.floor(factor * ev(n) + 1e-12)
