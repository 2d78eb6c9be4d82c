"""
Seleção do solver a partir das configurações.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.exceptions import ConfigurationError
from .bnb import DEFAULT_MAX_LP_CELLS, solve_bnb
from .bruteforce import solve_bruteforce
from .local_search import solve_local_search
from .problem import BudgetedProblem, Solution, TableProblem
from .simplex import LP_BACKENDS

logger = logging.getLogger(__name__)

SOLVER_METHODS = ("auto", "bruteforce", "bnb", "local_search")
AUTO_BRUTEFORCE_MAX_N = 16


@dataclass(frozen=True)
class SolverSettings:
    """Parâmetros de um solver"""
    method: str = "auto"
    time_limit: float = 60.0
    gap_tolerance: float = 0.01
    restarts: int = 20
    restart_jobs: int = 1
    lp_backend: str = "simplex"
    max_lp_cells: int = DEFAULT_MAX_LP_CELLS

    def validate(self) -> None:
        problems = []
        if self.method not in SOLVER_METHODS:
            problems.append(f"método desconhecido: {self.method} (use {', '.join(SOLVER_METHODS)})")
        if self.time_limit <= 0:
            problems.append(f"time_limit deve ser > 0 (recebido {self.time_limit})")
        if self.gap_tolerance < 0:
            problems.append(f"gap_tolerance deve ser >= 0 (recebido {self.gap_tolerance})")
        if self.restarts < 1:
            problems.append(f"restarts deve ser >= 1 (recebido {self.restarts})")
        if self.restart_jobs < 1:
            problems.append(f"restart_jobs deve ser >= 1 (recebido {self.restart_jobs})")
        if self.lp_backend not in LP_BACKENDS:
            problems.append(f"lp_backend desconhecido: {self.lp_backend}")
        if problems:
            raise ConfigurationError("Configuração de solver inválida", problems)

    def resolve_method(self, problem: TableProblem) -> str:
        """Método efetivo: auto usa força bruta até n=16, depois bnb (ou busca local se não aditivo)"""
        if self.method != "auto":
            return self.method
        if problem.n <= AUTO_BRUTEFORCE_MAX_N:
            return "bruteforce"
        return "bnb" if problem.is_linear else "local_search"


def solve(problem: TableProblem, settings: Optional[SolverSettings] = None,
          rng: Optional[np.random.Generator] = None) -> Solution:
    """
    Resolve um problema com o método configurado

    Args:
        problem: Problema aditivo ou não aditivo
        settings: Parâmetros do solver (padrão: auto)
        rng: Gerador para busca local e incumbente inicial do bnb

    Returns:
        Solução viável
    """
    settings = settings or SolverSettings()
    method = settings.resolve_method(problem)

    if method == "bruteforce":
        return solve_bruteforce(problem)
    if method == "bnb":
        if not isinstance(problem, BudgetedProblem):
            raise ConfigurationError("bnb exige recompensas aditivas; use bruteforce ou local_search")
        return solve_bnb(problem, time_limit=settings.time_limit,
                         gap_tolerance=settings.gap_tolerance,
                         lp_backend=settings.lp_backend,
                         max_lp_cells=settings.max_lp_cells, rng=rng)
    if method == "local_search":
        return solve_local_search(problem, restarts=settings.restarts, rng=rng, jobs=settings.restart_jobs)
    raise ConfigurationError(f"Método de solver desconhecido: {method}")
