"""Exact rational LP solving with certificates."""
from .problem import LpOutcome, LpProblem, MalformedProblemError
from .simplex import BoundedSimplex, solve_lp
from .verify import check_outcome, is_feasible

__all__ = ["BoundedSimplex", "LpOutcome", "LpProblem", "MalformedProblemError", "check_outcome", "is_feasible", "solve_lp"]
