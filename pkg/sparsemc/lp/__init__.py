"""Minimum-reach solver: ``min s`` subject to ``||p_i - z||^2 <= alpha_i s + beta_i``."""

from .center import center_candidates, center_of_basis, reach
from .msw import Solution, basis_computation, solve_M, violation_test
from .types import Basis, Constraint, NumericalFailure


__all__ = [
    "Basis",
    "Constraint",
    "NumericalFailure",
    "Solution",
    "basis_computation",
    "center_candidates",
    "center_of_basis",
    "reach",
    "solve_M",
    "violation_test",
]
