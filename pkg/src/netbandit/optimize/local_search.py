"""
Busca local com reinícios para o problema com orçamento.

Vizinhança: adicionar um nó, remover um nó ou trocar um tratado por um não
tratado (troca preserva o tamanho). Os ganhos de cada movimento são obtidos
de forma incremental a partir das contagens de vizinhos tratados, mantidas a
cada movimento aceito. Os pontos de partida são sorteados antes da subida,
então o resultado não depende da ordem de execução dos reinícios.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..core.exceptions import ConfigurationError
from .problem import STATUS_HEURISTIC, Solution, TableProblem, better

logger = logging.getLogger(__name__)

IMPROVEMENT_TOLERANCE = 1e-10
MAX_SWAP_PAIRS = 250_000
SWAP_CANDIDATES = 64

MoveCallback = Callable[[np.ndarray, float], None]


def random_start(n: int, budget: int, rng: np.random.Generator) -> np.ndarray:
    """Tratamento viável aleatório: tamanho uniforme em 0..budget, nós uniformes"""
    size = int(rng.integers(0, budget + 1))
    z = np.zeros(n, dtype=np.int64)
    z[rng.choice(n, size=size, replace=False)] = 1
    return z


class _TableClimber:
    """Subida de encosta por melhor melhoria sobre a tabela F[i, z_i, c]"""

    def __init__(self, problem: TableProblem, swap_candidates: int = SWAP_CANDIDATES,
                 callback: Optional[MoveCallback] = None):
        self.problem = problem
        self.table = problem.node_table
        self.adjacency = problem.graph.adjacency.tocsr().astype(float)
        self.columns = self.adjacency.tocsc()
        self.cutoff = problem.cutoff
        self.budget = problem.effective_budget
        self.swap_candidates = swap_candidates
        self.callback = callback
        self.nodes = np.arange(problem.n)

    def climb(self, start: np.ndarray) -> Tuple[np.ndarray, float, int]:
        z = start.astype(np.int64).copy()
        counts = np.asarray(self.problem.graph.adjacency @ z, dtype=np.int64)
        value = self.problem.objective(z)
        moves = 0
        max_moves = 10 * self.problem.n + 100

        while moves < max_moves:
            move = self._best_move(z, counts, value)
            if move is None:
                break
            kind, added, removed, delta = move
            if added is not None:
                z[added] = 1
                counts[self.problem.graph.neighbors(added)] += 1
            if removed is not None:
                z[removed] = 0
                counts[self.problem.graph.neighbors(removed)] -= 1
            value += delta
            moves += 1
            if self.callback is not None:
                self.callback(z.copy(), value)
        return z, value, moves

    def _best_move(self, z: np.ndarray, counts: np.ndarray, value: float):
        F, C, nodes = self.table, self.cutoff, self.nodes
        pooled = np.minimum(counts, C)
        pooled_up = np.minimum(counts + 1, C)
        pooled_down = np.minimum(np.maximum(counts - 1, 0), C)

        current = F[nodes, z, pooled]
        up = F[nodes, z, pooled_up] - current
        down = F[nodes, z, pooled_down] - current
        flip = F[nodes, 1 - z, pooled] - current
        add = flip + self.adjacency @ up
        remove = flip + self.adjacency @ down

        untreated = np.flatnonzero(z == 0)
        treated = np.flatnonzero(z == 1)
        tolerance = IMPROVEMENT_TOLERANCE * max(1.0, abs(value))
        best = None

        if untreated.size and treated.size < self.budget:
            j = untreated[int(np.argmax(add[untreated]))]
            if add[j] > tolerance:
                best = ("add", int(j), None, float(add[j]))

        if treated.size:
            l = treated[int(np.argmax(remove[treated]))]
            if remove[l] > tolerance and (best is None or remove[l] > best[3]):
                best = ("remove", None, int(l), float(remove[l]))

        if untreated.size and treated.size:
            swap = self._best_swap(z, untreated, treated, add, remove, up, down,
                                   pooled, pooled_up, pooled_down)
            if swap is not None and swap[3] > tolerance and (best is None or swap[3] > best[3]):
                best = swap
        return best

    def _best_swap(self, z, untreated, treated, add, remove, up, down,
                   pooled, pooled_up, pooled_down):
        F = self.table
        if untreated.size * treated.size > MAX_SWAP_PAIRS:
            m = self.swap_candidates
            untreated = untreated[np.argsort(-add[untreated], kind="stable")[:m]]
            treated = treated[np.argsort(-remove[treated], kind="stable")[:m]]
            untreated.sort()
            treated.sort()

        # vizinhos comuns recebem +1 e -1: seus ganhos contados em add/remove se anulam
        rows = self.adjacency[untreated].multiply((up + down)[None, :]).tocsr()
        common = (rows @ self.columns[:, treated]).toarray()
        adjacent = self.adjacency[untreated][:, treated].toarray()

        j, l = untreated, treated
        eta = (F[j, 1, pooled_down[j]] - F[j, 1, pooled[j]]
               - F[j, 0, pooled_down[j]] + F[j, 0, pooled[j]])
        eps = (F[l, 0, pooled_up[l]] - F[l, 0, pooled[l]]
               - F[l, 1, pooled_up[l]] + F[l, 1, pooled[l]])
        gain = (add[j][:, None] + remove[l][None, :] - common
                + adjacent * (eta[:, None] + eps[None, :]))
        flat = int(np.argmax(gain))
        a, b = np.unravel_index(flat, gain.shape)
        return ("swap", int(j[a]), int(l[b]), float(gain[a, b]))


def solve_local_search(problem: TableProblem,
                       restarts: int = 20,
                       rng: Optional[np.random.Generator] = None,
                       jobs: int = 1,
                       swap_candidates: int = SWAP_CANDIDATES,
                       callback: Optional[MoveCallback] = None) -> Solution:
    """
    Subida de encosta com reinícios aleatórios

    Args:
        problem: Problema (aditivo ou não aditivo)
        restarts: Número de pontos de partida
        rng: Gerador numpy semeado para os pontos de partida
        jobs: Threads para executar os reinícios
        swap_candidates: Candidatos por lado quando a vizinhança de trocas é grande
        callback: Chamado com (z, objetivo incremental) após cada movimento aceito

    Returns:
        Melhor solução (maior objetivo; empate pelo z lexicograficamente menor),
        status heuristic
    """
    if restarts < 1:
        raise ConfigurationError(f"restarts deve ser >= 1 (recebido {restarts})")
    rng = rng if rng is not None else np.random.default_rng()
    budget = problem.effective_budget
    starts = [random_start(problem.n, budget, rng) for _ in range(restarts)]
    climber = _TableClimber(problem, swap_candidates=swap_candidates, callback=callback)

    if jobs > 1 and callback is None:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(climber.climb, starts))
    else:
        results = [climber.climb(start) for start in starts]

    best_z, best_value = None, None
    total_moves = 0
    for z, value, moves in results:
        total_moves += moves
        if better(value, z, best_value, best_z):
            best_z, best_value = z, value

    logger.debug(f"Busca local em {problem.describe()}: {restarts} reinícios, "
                 f"{total_moves} movimentos, objetivo {best_value:.6g}")
    return Solution.create(problem, best_z, STATUS_HEURISTIC, objective=best_value,
                           solver="local_search", nodes=total_moves)


def climb_scored(score: Callable[[np.ndarray], np.ndarray],
                 n: int,
                 budget: int,
                 start: np.ndarray,
                 swap_candidates: int = 16,
                 max_moves: Optional[int] = None) -> Tuple[np.ndarray, float]:
    """
    Subida de encosta para uma pontuação arbitrária avaliada em lote

    Usada quando o objetivo não se decompõe por nó (pontuação otimista do
    agente UCB). Avalia todas as inversões de um bit e as trocas entre os
    melhores candidatos de cada lado.

    Args:
        score: Função que pontua um bloco m x n de tratamentos
        n: Número de nós
        budget: Orçamento efetivo
        start: Tratamento viável inicial
        swap_candidates: Candidatos por lado para as trocas
        max_moves: Limite de movimentos aceitos

    Returns:
        (z localmente ótimo, pontuação)
    """
    z = np.asarray(start, dtype=np.int64).copy()
    value = float(score(z[None, :])[0])
    max_moves = max_moves if max_moves is not None else 10 * n + 100

    for _ in range(max_moves):
        flips = np.repeat(z[None, :], n, axis=0)
        flips[np.arange(n), np.arange(n)] = 1 - z
        flip_scores = np.asarray(score(flips), dtype=float)
        if z.sum() >= budget:
            flip_scores[z == 0] = -np.inf

        untreated = np.flatnonzero(z == 0)
        treated = np.flatnonzero(z == 1)
        candidates: List[Tuple[float, np.ndarray]] = []
        best_flip = int(np.argmax(flip_scores))
        candidates.append((flip_scores[best_flip], flips[best_flip]))

        if untreated.size and treated.size:
            ins = untreated[np.argsort(-flip_scores[untreated], kind="stable")[:swap_candidates]]
            outs = treated[np.argsort(-flip_scores[treated], kind="stable")[:swap_candidates]]
            pairs = np.array([(a, b) for a in np.sort(ins) for b in np.sort(outs)])
            swaps = np.repeat(z[None, :], len(pairs), axis=0)
            swaps[np.arange(len(pairs)), pairs[:, 0]] = 1
            swaps[np.arange(len(pairs)), pairs[:, 1]] = 0
            swap_scores = np.asarray(score(swaps), dtype=float)
            best_swap = int(np.argmax(swap_scores))
            candidates.append((swap_scores[best_swap], swaps[best_swap]))

        top_value, top_z = max(candidates, key=lambda item: item[0])
        if not top_value > value + IMPROVEMENT_TOLERANCE * max(1.0, abs(value)):
            break
        z, value = top_z.copy(), float(top_value)
    return z, value
