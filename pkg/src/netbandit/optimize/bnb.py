"""
Branch-and-bound sobre a codificação linear inteira.

Busca pela melhor cota (heap de nós abertos), cota superior pela relaxação
linear, ramificação na variável z mais fracionária (depois w e y).
Incumbente inicial vem da busca local; cada relaxação também alimenta uma
heurística de arredondamento.
"""

import time
import heapq
import logging
import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.exceptions import ContractViolation
from .encoding import Encoding, encode
from .local_search import solve_local_search
from .problem import (
    OBJECTIVE_TOLERANCE, STATUS_EXACT, STATUS_HEURISTIC, BudgetedProblem, Solution, better,
)
from .simplex import LP_INFEASIBLE, LP_OPTIMAL, solve_lp

logger = logging.getLogger(__name__)

INTEGRALITY_TOLERANCE = 1e-6
DEFAULT_MAX_LP_CELLS = 5_000_000
INCUMBENT_RESTARTS = 5


@dataclass
class _Node:
    lower: np.ndarray
    upper: np.ndarray
    bound: float
    depth: int


def _most_fractional(values: np.ndarray, indices: np.ndarray) -> Optional[int]:
    if not indices.size:
        return None
    fractional = np.abs(values[indices] - np.round(values[indices]))
    best = int(np.argmax(fractional))
    if fractional[best] <= INTEGRALITY_TOLERANCE:
        return None
    return int(indices[best])


def _branch_variable(encoding: Encoding, x: np.ndarray) -> Optional[int]:
    n, width = encoding.n, encoding.cutoff + 1
    z_idx = np.arange(n)
    w_idx = n + n * (width + 1) + np.arange(n)
    y_idx = n + np.arange(n * width)
    for group in (z_idx, w_idx, y_idx):
        index = _most_fractional(x, group)
        if index is not None:
            return index
    return None


def _may_hold_lex_smaller(lower: np.ndarray, upper: np.ndarray, best_z: np.ndarray) -> bool:
    """Se a caixa [lower, upper] de z contém algum z lexicograficamente menor que best_z"""
    compatible = (lower <= best_z) & (best_z <= upper)
    stop = int(np.argmin(compatible)) if not compatible.all() else len(best_z) - 1
    can_drop = (best_z == 1) & (lower < 0.5)
    return bool(can_drop[:stop + 1].any())


def _first_free(lower: np.ndarray, upper: np.ndarray) -> Optional[int]:
    free = np.flatnonzero(lower < upper)
    return int(free[0]) if free.size else None


def _round_lp_point(problem: BudgetedProblem, z_values: np.ndarray) -> np.ndarray:
    """Trata os nós com z > 1/2, mantendo os maiores valores até o orçamento"""
    order = np.lexsort((np.arange(problem.n), -z_values))
    chosen = [i for i in order if z_values[i] > 0.5][:problem.effective_budget]
    z = np.zeros(problem.n, dtype=np.int64)
    z[chosen] = 1
    return z


def solve_bnb(problem: BudgetedProblem,
              time_limit: float = 60.0,
              gap_tolerance: float = 0.01,
              lp_backend: str = "simplex",
              max_lp_cells: int = DEFAULT_MAX_LP_CELLS,
              rng: Optional[np.random.Generator] = None) -> Solution:
    """
    Resolve o problema por branch-and-bound

    Args:
        problem: Problema aditivo
        time_limit: Limite de tempo em segundos; excedido devolve o incumbente
        gap_tolerance: Gap relativo (cota - incumbente)/max(1, |incumbente|) aceito
        lp_backend: "simplex" ou "highs"
        max_lp_cells: Acima deste tamanho de tableau o simplex próprio não é
            usado e a busca local assume (status heuristic)
        rng: Gerador para a busca local que produz o incumbente inicial

    Returns:
        Solução exact quando a cota fecha sobre o incumbente; parada pelo
        gap_tolerance, por tempo ou por relaxações sem solução devolve heuristic
    """
    if not isinstance(problem, BudgetedProblem):
        raise ContractViolation("Branch-and-bound exige um BudgetedProblem (modelo aditivo)")
    started = time.perf_counter()
    rng = rng if rng is not None else np.random.default_rng(0)

    incumbent = solve_local_search(problem, restarts=INCUMBENT_RESTARTS, rng=rng)
    best_z, best_value = incumbent.z.astype(np.int64), incumbent.objective

    if problem.effective_budget == 0:
        return Solution.create(problem, best_z, STATUS_EXACT, solver="bnb",
                               bound=best_value, gap=0.0, wall_time=time.perf_counter() - started)

    encoding = encode(problem)
    if lp_backend == "simplex" and encoding.lp.tableau_cells() > max_lp_cells:
        logger.warning(
            f"Relaxação de {problem.describe()} excede {max_lp_cells} células; "
            f"usando busca local (status heuristic)"
        )
        return Solution.create(problem, best_z, STATUS_HEURISTIC, solver="bnb-fallback",
                               wall_time=time.perf_counter() - started)

    base = encoding.lp
    counter = itertools.count()
    open_nodes = []
    explored = 0
    unresolved = 0
    timed_out = False
    stopped_on_gap = False

    def relax(lower: np.ndarray, upper: np.ndarray):
        return solve_lp(base.with_bounds(lower, upper), backend=lp_backend)

    def tolerance() -> float:
        return OBJECTIVE_TOLERANCE * max(1.0, abs(best_value))

    def relative_gap(bound: float) -> float:
        return (bound - best_value) / max(1.0, abs(best_value))

    def worth_exploring(bound: float, lower: np.ndarray, upper: np.ndarray) -> bool:
        # cota empatada com o incumbente só interessa se o nó ainda admite z menor
        if bound > best_value + tolerance():
            return True
        if bound < best_value - tolerance():
            return False
        return _may_hold_lex_smaller(lower[:problem.n], upper[:problem.n], best_z)

    root = relax(base.lower.copy(), base.upper.copy())
    explored += 1
    if root.status != LP_OPTIMAL:
        # a relaxação de um problema com z = 0 viável nunca é inviável
        logger.warning(f"Relaxação raiz terminou com status {root.status}; usando incumbente")
        return Solution.create(problem, best_z, STATUS_HEURISTIC, solver="bnb",
                               nodes=explored, wall_time=time.perf_counter() - started)
    heapq.heappush(open_nodes, (-root.objective, next(counter),
                                _Node(base.lower.copy(), base.upper.copy(), root.objective, 0), root.x))

    while open_nodes:
        bound = -open_nodes[0][0]
        if bound > best_value + tolerance() and relative_gap(bound) <= gap_tolerance:
            stopped_on_gap = True
            break
        if time.perf_counter() - started > time_limit:
            timed_out = True
            break

        _, _, node, x = heapq.heappop(open_nodes)
        if not worth_exploring(node.bound, node.lower, node.upper):
            continue
        candidate = _round_lp_point(problem, encoding.z_part(x))
        value = problem.objective(candidate)
        if better(value, candidate, best_value, best_z):
            best_z, best_value = candidate, value

        index = _branch_variable(encoding, x)
        if index is None:
            # ponto inteiro: o valor da relaxação é o objetivo do z correspondente
            z = np.round(encoding.z_part(x)).astype(np.int64)
            value = problem.objective(z)
            if better(value, z, best_value, best_z):
                best_z, best_value = z, value
            if not worth_exploring(node.bound, node.lower, node.upper):
                continue
            index = _first_free(node.lower[:problem.n], node.upper[:problem.n])
            if index is None:
                continue

        for fixed in (0.0, 1.0):
            lower, upper = node.lower.copy(), node.upper.copy()
            lower[index] = upper[index] = fixed
            child = relax(lower, upper)
            explored += 1
            if child.status == LP_INFEASIBLE:
                continue
            if child.status != LP_OPTIMAL:
                unresolved += 1
                continue
            if not worth_exploring(child.objective, lower, upper):
                continue
            heapq.heappush(open_nodes, (-child.objective, next(counter),
                                        _Node(lower, upper, child.objective, node.depth + 1), child.x))

    open_bound = -open_nodes[0][0] if open_nodes else best_value
    bound = max(open_bound, best_value)
    gap = relative_gap(bound)
    status = STATUS_EXACT if bound <= best_value + tolerance() else STATUS_HEURISTIC
    if unresolved:
        logger.warning(f"{unresolved} relaxações sem solução ótima; resultado marcado como heuristic")
        status = STATUS_HEURISTIC
    elapsed = time.perf_counter() - started

    if stopped_on_gap:
        logger.debug(f"Branch-and-bound parou com gap {gap:.2%} <= {gap_tolerance:.2%}; status heuristic")
    if timed_out and status == STATUS_HEURISTIC:
        logger.warning(f"Branch-and-bound atingiu {time_limit}s em {problem.describe()}; gap {gap:.2%}")
    logger.debug(f"Branch-and-bound: {explored} relaxações, objetivo {best_value:.6g}, "
                 f"cota {bound:.6g}, status {status}")
    return Solution.create(problem, best_z, status, objective=best_value, solver="bnb",
                           bound=bound, gap=gap, nodes=explored, wall_time=elapsed)
