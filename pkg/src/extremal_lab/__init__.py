"""Exact small-scale Ramsey-Turán computations: weightings, Ramsey numbers,
join constructions, dependent random choice and cluster-graph tooling."""

from .errors import BudgetExceeded, Graph6Error, PreconditionError
from .graph import Graph, from_graph6, to_graph6

__all__ = ["BudgetExceeded", "Graph", "Graph6Error", "PreconditionError", "from_graph6", "to_graph6"]
__version__ = "0.1.0"
