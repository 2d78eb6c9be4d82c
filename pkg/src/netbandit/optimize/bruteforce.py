"""
Enumeração exaustiva dos vetores de tratamento viáveis.

O código inteiro c representa z com z_i = bit (n-1-i) de c, de modo que a
ordem numérica dos códigos coincide com a ordem lexicográfica de z.
"""

import time
import logging
from typing import Callable, Iterator, Optional, Tuple

import numpy as np

from ..core.exceptions import SolverRefusal
from .problem import OBJECTIVE_TOLERANCE, STATUS_EXACT, Solution, TableProblem

logger = logging.getLogger(__name__)

MAX_BRUTEFORCE_N = 25
CHUNK_SIZE = 1 << 16


def enumerate_feasible(n: int, budget: int, chunk_size: int = CHUNK_SIZE) -> Iterator[np.ndarray]:
    """
    Gera blocos de vetores viáveis (Σ z ≤ budget) em ordem lexicográfica

    Args:
        n: Número de nós
        budget: Orçamento efetivo
        chunk_size: Códigos processados por bloco

    Yields:
        Matrizes m x n de tratamentos (int64)
    """
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, chunk_size):
        codes = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        Z = (codes[:, None] >> shifts[None, :]) & 1
        if budget < n:
            Z = Z[Z.sum(axis=1) <= budget]
        if len(Z):
            yield Z


def argmax_enumerated(n: int, budget: int,
                      score: Callable[[np.ndarray], np.ndarray]) -> Tuple[np.ndarray, float]:
    """
    Maximiza uma função de pontuação sobre todos os z viáveis

    Args:
        n: Número de nós
        budget: Orçamento efetivo
        score: Função que pontua um bloco m x n de tratamentos

    Returns:
        (z ótimo lexicograficamente menor, valor)
    """
    best_z: Optional[np.ndarray] = None
    best_value = -np.inf
    for Z in enumerate_feasible(n, budget):
        values = np.asarray(score(Z), dtype=float)
        chunk_max = values.max()
        if best_z is None or chunk_max > best_value + OBJECTIVE_TOLERANCE:
            first = int(np.flatnonzero(values >= chunk_max - OBJECTIVE_TOLERANCE)[0])
            best_z, best_value = Z[first].copy(), float(values[first])
    return best_z, best_value


def solve_bruteforce(problem: TableProblem) -> Solution:
    """
    Solução exata por enumeração

    Args:
        problem: Problema com n <= 25

    Returns:
        Solução com status exact (ou trivial quando B = 0)

    Raises:
        SolverRefusal: se n excede o limite de enumeração
    """
    if problem.n > MAX_BRUTEFORCE_N:
        raise SolverRefusal(
            f"Força bruta limitada a n <= {MAX_BRUTEFORCE_N} (recebido n={problem.n}); "
            f"use 'bnb' ou 'local_search'"
        )
    started = time.perf_counter()
    z, value = argmax_enumerated(problem.n, problem.effective_budget, problem.evaluate_many)
    elapsed = time.perf_counter() - started
    logger.debug(f"Força bruta em {problem.describe()}: objetivo {value:.6g} em {elapsed:.3f}s")
    return Solution.create(problem, z, STATUS_EXACT, objective=value,
                           solver="bruteforce", bound=value, gap=0.0, wall_time=elapsed)
