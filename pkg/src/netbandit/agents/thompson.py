"""
Amostragem de Thompson sob interferência em rede.

A cada rodada: sorteia θ da posterior, resolve o problema com orçamento sob
o θ sorteado e atualiza a posterior com as n observações. A variante somada
colapsa a rodada em uma única observação (soma das linhas, soma das recompensas).
"""

from typing import Optional

import numpy as np

from ..core.exceptions import ContractViolation
from ..models.design import build_design
from ..models.netgen import Graph, TreatmentVector
from ..models.posterior import PosteriorState, init_prior, sample, update, update_collapsed
from ..optimize.problem import BudgetedProblem, Solution
from ..optimize.solvers import SolverSettings, solve
from .base import AgentContext, AgentSpec, BaseAgent


def thompson_solution(s: PosteriorState, g: Graph, budget: Optional[int],
                      rng: np.random.Generator, settings: SolverSettings,
                      k: int, cutoff: int) -> Solution:
    """Sorteia θ ~ posterior e devolve a solução do solver sob o θ sorteado"""
    theta = sample(s, rng)
    problem = BudgetedProblem(g, theta, k, budget)
    if problem.cutoff != cutoff:
        raise ContractViolation(f"Posterior de dimensão {s.dimension} incompatível com k={k}, C={cutoff}")
    return solve(problem, settings, rng)


def ts_step(s: PosteriorState, g: Graph, budget: Optional[int], rng: np.random.Generator,
            settings: SolverSettings, k: int, cutoff: int) -> TreatmentVector:
    """
    Um passo de Thompson sampling

    Args:
        s: Posterior atual
        g: Rede da rodada
        budget: Orçamento (None para ilimitado)
        rng: Fluxo aleatório do agente (sorteio de θ e reinícios do solver)
        settings: Solver usado na maximização
        k: Número de grupos
        cutoff: Corte C do agente

    Returns:
        Vetor de tratamento viável
    """
    return thompson_solution(s, g, budget, rng, settings, k, cutoff).z


def sum_linear_ts_step(s: PosteriorState, g: Graph, budget: Optional[int],
                       rng: np.random.Generator, settings: SolverSettings,
                       k: int, cutoff: int) -> TreatmentVector:
    """Mesmo passo; a diferença da variante somada está só na atualização"""
    return ts_step(s, g, budget, rng, settings, k, cutoff)


class ThompsonAgent(BaseAgent):
    """Thompson sampling com posterior completa (n observações por rodada)"""

    kind = "thompson"

    def __init__(self, spec: AgentSpec, context: AgentContext):
        super().__init__(spec, context)
        self.state = init_prior(self.dimension, spec.prior_mean, spec.prior_lambda,
                                obs_noise_var=spec.obs_noise_var)

    def act(self, graph: Graph, budget: Optional[int], rng: np.random.Generator) -> TreatmentVector:
        self.last_solution = thompson_solution(self.state, graph, budget, rng,
                                               self.context.solver, self.k, self.cutoff)
        return self.last_solution.z

    def observe(self, graph: Graph, z: TreatmentVector, rewards: np.ndarray) -> None:
        X = build_design(graph, z, self.k, self.cutoff)
        self.state = update(self.state, X, rewards)

    def snapshot(self) -> PosteriorState:
        return self.state


class SumLinearThompsonAgent(ThompsonAgent):
    """Linear bandit clássico: a rodada vira uma única observação agregada"""

    kind = "sum_linear_ts"

    def observe(self, graph: Graph, z: TreatmentVector, rewards: np.ndarray) -> None:
        X = build_design(graph, z, self.k, self.cutoff)
        self.state = update_collapsed(self.state, X, rewards)
