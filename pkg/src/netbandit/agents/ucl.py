"""
Agente otimista (UCB) sobre a soma das linhas do design.

UCB(z) = ⟨x_z, θ̂⟩ + √β_t(δ)·‖x_z‖_{V̄⁻¹}, com x_z = X(z)ᵀ1, θ̂ a solução de
mínimos quadrados regularizada e V̄ = λI + Σ XᵀX. A maximização conjunta em
{0,1}ⁿ é exata por enumeração para redes pequenas; acima disso o máximo é
tomado sobre um conjunto de candidatos (soluções de sorteios da posterior,
adições gulosas e busca local sobre a própria pontuação).
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from ..core.exceptions import ConfigurationError
from ..models.design import build_design, design_sums
from ..models.netgen import Graph, TreatmentVector
from ..models.posterior import PosteriorState, init_prior, map_estimate, sample, update
from ..optimize.bruteforce import argmax_enumerated
from ..optimize.local_search import climb_scored, random_start
from ..optimize.problem import BudgetedProblem, better
from ..optimize.solvers import SolverSettings, solve
from .base import AgentContext, AgentSpec, BaseAgent


@dataclass(frozen=True)
class ConfidenceParams:
    """Constantes do conjunto de confiança: S ≥ ‖θ‖₂, R sub-gaussiano, L ≥ ‖linha‖², δ, λ"""
    S: float
    R: float
    L: float
    delta: float = 0.05
    lam: float = 0.1

    def validate(self) -> None:
        problems = []
        for name in ("S", "R", "L", "lam"):
            if not getattr(self, name) > 0:
                problems.append(f"{name} deve ser > 0 (recebido {getattr(self, name)})")
        if not 0 < self.delta < 1:
            problems.append(f"delta deve estar em (0, 1) (recebido {self.delta})")
        if problems:
            raise ConfigurationError("Parâmetros de confiança inválidos", problems)


def confidence_radius(params: ConfidenceParams, n: int, t: int, dimension: int) -> float:
    """
    √β_t(δ) = λ^{1/2} S + R √(2 log(1/δ) + D log(1 + n t L / (λ D)))

    Args:
        params: Constantes do conjunto de confiança
        n: Nós por rodada
        t: Rodadas observadas
        dimension: D

    Returns:
        Raio do elipsoide de confiança
    """
    inner = (2.0 * math.log(1.0 / params.delta)
             + dimension * math.log(1.0 + n * t * params.L / (params.lam * dimension)))
    return math.sqrt(params.lam) * params.S + params.R * math.sqrt(inner)


def ucl_regret_bound(params: ConfidenceParams, n: int, horizon: int, dimension: int) -> float:
    """Cota de regret 4√(n T D log(λ + n T L / D))·√β_T(δ)"""
    log_term = math.log(params.lam + n * horizon * params.L / dimension)
    return (4.0 * math.sqrt(n * horizon * dimension * max(log_term, 0.0))
            * confidence_radius(params, n, horizon, dimension))


def default_confidence_params(k: int, cutoff: int, noise_sigma: float = 1.0, lam: float = 0.1,
                              mu_mean: float = 2.0, mu_sd: float = 1.0,
                              gamma_sd: float = 1.0, delta: float = 0.05,
                              S: Optional[float] = None, R: Optional[float] = None,
                              L: Optional[float] = None) -> ConfidenceParams:
    """
    Constantes padrão: S pelo envelope de 3 desvios do gerador de θ,
    R = sigma do ruído, L = C + 2
    """
    if S is None:
        mu_env = (abs(mu_mean) + 3.0 * mu_sd) ** 2 * k
        gamma_env = float(np.sum((np.arange(cutoff + 1) + 3.0 * gamma_sd) ** 2))
        S = math.sqrt(mu_env + gamma_env)
    if R is None:
        R = max(noise_sigma, 1e-6)
    if L is None:
        L = float(cutoff + 2)
    params = ConfidenceParams(S=S, R=R, L=L, delta=delta, lam=lam)
    params.validate()
    return params


def confidence_params_for(spec: AgentSpec, context: AgentContext) -> ConfidenceParams:
    """Constantes do agente: valores explícitos da spec, o resto pelo gerador de θ do contexto"""
    gen = context.theta_gen
    generator = {} if gen is None else {"mu_mean": gen.mu_mean, "mu_sd": gen.mu_sd,
                                        "gamma_sd": gen.gamma_sd}
    return default_confidence_params(
        context.k, context.cutoff, noise_sigma=context.noise_sigma, lam=spec.prior_lambda,
        delta=spec.ucl_delta, S=spec.ucl_S, R=spec.ucl_R, L=spec.ucl_L, **generator,
    )


def ucb_scorer(s: PosteriorState, g: Graph, params: ConfidenceParams,
               k: int, cutoff: int) -> Callable[[np.ndarray], np.ndarray]:
    """Função que pontua blocos de tratamentos pelo UCB da rodada"""
    radius = confidence_radius(params, g.n, s.rounds_seen, s.dimension)
    center = map_estimate(s)
    covariance = s.covariance

    def score(Z: np.ndarray) -> np.ndarray:
        X = design_sums(g, Z, k, cutoff)
        width = np.sqrt(np.clip(np.einsum("ij,jk,ik->i", X, covariance, X), 0.0, None))
        return X @ center + radius * width

    return score


def ucb_value(s: PosteriorState, g: Graph, z: TreatmentVector,
              params: ConfidenceParams, k: int, cutoff: int) -> float:
    return float(ucb_scorer(s, g, params, k, cutoff)(np.asarray(z)[None, :])[0])


@dataclass(frozen=True)
class CandidatePolicy:
    """Como o máximo do UCB é aproximado acima da escala de enumeração"""
    exact_max_n: int = 12
    draws: int = 10
    restarts: int = 5
    swap_candidates: int = 16


def _greedy_additions(score, n: int, budget: int) -> np.ndarray:
    z = np.zeros(n, dtype=np.int64)
    value = float(score(z[None, :])[0])
    while z.sum() < budget:
        untreated = np.flatnonzero(z == 0)
        trial = np.repeat(z[None, :], len(untreated), axis=0)
        trial[np.arange(len(untreated)), untreated] = 1
        scores = score(trial)
        best = int(np.argmax(scores))
        if scores[best] <= value:
            break
        z, value = trial[best], float(scores[best])
    return z


def ucl_candidates(s: PosteriorState, g: Graph, budget: int, score,
                   rng: np.random.Generator, settings: SolverSettings,
                   k: int, cutoff: int, policy: CandidatePolicy) -> List[np.ndarray]:
    """Conjunto de candidatos: sorteios resolvidos, adições gulosas e busca local no UCB"""
    candidates = []
    for theta in [map_estimate(s)] + [sample(s, rng) for _ in range(policy.draws)]:
        problem = BudgetedProblem(g, theta, k, budget)
        candidates.append(solve(problem, settings, rng).z.astype(np.int64))
    candidates.append(_greedy_additions(score, g.n, budget))
    for _ in range(policy.restarts):
        start = random_start(g.n, budget, rng)
        z, _ = climb_scored(score, g.n, budget, start, swap_candidates=policy.swap_candidates)
        candidates.append(z)
    return candidates


def ucl_step(s: PosteriorState, g: Graph, budget: Optional[int], params: ConfidenceParams,
             k: int, cutoff: int, rng: np.random.Generator,
             settings: Optional[SolverSettings] = None,
             policy: Optional[CandidatePolicy] = None) -> TreatmentVector:
    """
    Maximiza o UCB sobre tratamentos viáveis

    Args:
        s: Estado de mínimos quadrados regularizado (média 0, precisão V̄)
        g: Rede da rodada
        budget: Orçamento (None para ilimitado)
        params: Constantes do conjunto de confiança
        k: Número de grupos
        cutoff: Corte C
        rng: Fluxo aleatório do agente
        settings: Solver usado para os candidatos de sorteio
        policy: Política de candidatos

    Returns:
        Vetor de tratamento viável
    """
    policy = policy or CandidatePolicy()
    settings = settings or SolverSettings()
    effective = g.n if budget is None else min(budget, g.n)
    score = ucb_scorer(s, g, params, k, cutoff)

    if g.n <= policy.exact_max_n:
        z, _ = argmax_enumerated(g.n, effective, score)
        return z

    best_z, best_value = None, None
    for z in ucl_candidates(s, g, effective, score, rng, settings, k, cutoff, policy):
        value = float(score(z[None, :])[0])
        if better(value, z, best_value, best_z):
            best_z, best_value = z, value
    return best_z


class NetworkUCLAgent(BaseAgent):
    """Agente UCB com θ̂ de mínimos quadrados regularizado (média a priori 0)"""

    kind = "network_ucl"

    def __init__(self, spec: AgentSpec, context: AgentContext):
        super().__init__(spec, context)
        self.state = init_prior(self.dimension, 0.0, spec.prior_lambda, obs_noise_var=1.0)
        self.params = confidence_params_for(spec, context)
        self.policy = CandidatePolicy(exact_max_n=spec.ucl_exact_max_n, draws=spec.ucl_draws,
                                      restarts=spec.ucl_restarts)

    def act(self, graph: Graph, budget: Optional[int], rng: np.random.Generator) -> TreatmentVector:
        return ucl_step(self.state, graph, budget, self.params, self.k, self.cutoff, rng,
                        settings=self.context.solver, policy=self.policy)

    def observe(self, graph: Graph, z: TreatmentVector, rewards: np.ndarray) -> None:
        X = build_design(graph, z, self.k, self.cutoff)
        self.state = update(self.state, X, rewards)

    def snapshot(self) -> PosteriorState:
        return self.state
