"""
Otimização do tratamento com orçamento: força bruta, branch-and-bound e busca local
"""

from .problem import (
    BudgetedProblem, MisspecifiedProblem, TableProblem, Solution, make_problem,
    STATUS_EXACT, STATUS_HEURISTIC, STATUS_TRIVIAL,
)
from .bruteforce import solve_bruteforce, enumerate_feasible, argmax_enumerated
from .simplex import LinearProgram, LPResult, BoundedSimplex, solve_lp
from .encoding import Encoding, encode, dump_encoding
from .bnb import solve_bnb
from .local_search import solve_local_search, climb_scored
from .solvers import SolverSettings, solve, SOLVER_METHODS

__all__ = [
    "BudgetedProblem", "MisspecifiedProblem", "TableProblem", "Solution", "make_problem",
    "STATUS_EXACT", "STATUS_HEURISTIC", "STATUS_TRIVIAL",
    "solve_bruteforce", "enumerate_feasible", "argmax_enumerated",
    "LinearProgram", "LPResult", "BoundedSimplex", "solve_lp",
    "Encoding", "encode", "dump_encoding",
    "solve_bnb", "solve_local_search", "climb_scored",
    "SolverSettings", "solve", "SOLVER_METHODS",
]
