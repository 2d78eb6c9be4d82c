"""
Políticas de referência: aleatória (piso de exploração) e oráculo (θ verdadeiro)
"""

from typing import Optional

import numpy as np

from ..core.exceptions import ContractViolation
from ..models.netgen import Graph, TreatmentVector
from ..optimize.problem import Solution, make_problem
from ..optimize.solvers import SolverSettings, solve
from .base import AgentContext, AgentSpec, BaseAgent


def random_policy_step(g: Graph, budget: Optional[int], rng: np.random.Generator) -> TreatmentVector:
    """
    Trata um subconjunto uniforme de tamanho B

    Sem orçamento, cada nó é tratado independentemente com probabilidade 1/2.
    """
    if budget is None:
        return (rng.random(g.n) < 0.5).astype(np.int8)
    if budget > g.n:
        raise ContractViolation(f"Orçamento {budget} maior que n={g.n}")
    z = np.zeros(g.n, dtype=np.int8)
    z[rng.choice(g.n, size=budget, replace=False)] = 1
    return z


def oracle_step(theta_true, g: Graph, budget: Optional[int],
                settings: Optional[SolverSettings] = None,
                rng: Optional[np.random.Generator] = None) -> Solution:
    """
    Solução do solver sob o θ verdadeiro

    Args:
        theta_true: ThetaTrue ou MisspecTheta do ambiente
        g: Rede da rodada
        budget: Orçamento (None para ilimitado)
        settings: Solver do oráculo
        rng: Fluxo para busca local / incumbente do bnb

    Returns:
        Solution com status exact ou heuristic (usado na contabilidade de regret)
    """
    if theta_true is None:
        raise ContractViolation("O oráculo exige o θ verdadeiro")
    problem = make_problem(g, theta_true, budget)
    return solve(problem, settings or SolverSettings(), rng)


class RandomAgent(BaseAgent):
    kind = "random_policy"

    def act(self, graph: Graph, budget: Optional[int], rng: np.random.Generator) -> TreatmentVector:
        return random_policy_step(graph, None if budget is None else min(budget, graph.n), rng)


class OracleAgent(BaseAgent):
    """Conhece o θ do ambiente; regret zero quando o solver é exato"""

    kind = "oracle"

    def __init__(self, spec: AgentSpec, context: AgentContext):
        super().__init__(spec, context)
        if context.theta_true is None:
            raise ContractViolation("O agente oráculo exige o θ verdadeiro no contexto")

    def act(self, graph: Graph, budget: Optional[int], rng: np.random.Generator) -> TreatmentVector:
        self.last_solution = oracle_step(self.context.theta_true, graph, budget,
                                         self.context.solver, rng)
        return self.last_solution.z
