"""
Classe base abstrata para políticas de tratamento e registro de agentes
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from ..core.exceptions import ConfigurationError, ContractViolation
from ..models.netgen import Graph, TreatmentVector
from ..models.posterior import PosteriorState
from ..optimize.problem import Solution
from ..optimize.solvers import SolverSettings

logger = logging.getLogger(__name__)

AGENT_KINDS = ("thompson", "network_ucl", "sum_linear_ts", "random_policy", "oracle")


@dataclass(frozen=True)
class AgentSpec:
    """Escolha do agente e seus hiperparâmetros"""
    kind: str = "thompson"
    prior_mean: float = 1.0
    prior_lambda: float = 0.1
    obs_noise_var: float = 1.0
    ucl_S: Optional[float] = None
    ucl_R: Optional[float] = None
    ucl_L: Optional[float] = None
    ucl_delta: float = 0.05
    ucl_draws: int = 10
    ucl_restarts: int = 5
    ucl_exact_max_n: int = 12

    def validate(self) -> None:
        problems = []
        if self.kind not in AGENT_KINDS:
            problems.append(f"agente desconhecido: {self.kind} (use {', '.join(AGENT_KINDS)})")
        if not self.prior_lambda > 0:
            problems.append(f"prior_lambda deve ser > 0 (recebido {self.prior_lambda})")
        if not self.obs_noise_var > 0:
            problems.append(f"obs_noise_var deve ser > 0 (recebido {self.obs_noise_var})")
        if not 0 < self.ucl_delta < 1:
            problems.append(f"ucl_delta deve estar em (0, 1) (recebido {self.ucl_delta})")
        for name in ("ucl_S", "ucl_R", "ucl_L"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                problems.append(f"{name} deve ser > 0 (recebido {value})")
        if self.ucl_draws < 0 or self.ucl_restarts < 0:
            problems.append("ucl_draws e ucl_restarts devem ser >= 0")
        if problems:
            raise ConfigurationError("Configuração de agente inválida", problems)


@dataclass(frozen=True)
class AgentContext:
    """O que o harness entrega ao construir um agente para uma replicação"""
    k: int
    cutoff: int
    solver: SolverSettings
    noise_sigma: float = 1.0
    theta_true: object = None
    theta_gen: object = None


def check_budget(z: TreatmentVector, budget: Optional[int], n: int) -> np.ndarray:
    """Garante que z é binário, tem comprimento n e respeita o orçamento"""
    z = np.asarray(z)
    if z.shape != (n,):
        raise ContractViolation(f"Agente devolveu vetor de forma {z.shape}, esperado ({n},)")
    if np.any((z != 0) & (z != 1)):
        raise ContractViolation("Agente devolveu vetor não binário")
    if budget is not None and int(z.sum()) > budget:
        raise ContractViolation(f"Agente violou o orçamento: {int(z.sum())} > {budget}")
    return z.astype(np.int8)


class BaseAgent(ABC):
    """Política que escolhe um tratamento por rodada e aprende com as recompensas"""

    kind: str = ""

    def __init__(self, spec: AgentSpec, context: AgentContext):
        self.spec = spec
        self.context = context
        self.k = context.k
        self.cutoff = context.cutoff
        self.last_solution: Optional[Solution] = None
        self.logger = logging.getLogger(f"{__name__}.{self.kind}")

    @property
    def dimension(self) -> int:
        return self.k + self.cutoff + 1

    def step(self, graph: Graph, budget: Optional[int], rng: np.random.Generator) -> np.ndarray:
        """Escolhe e valida o tratamento da rodada"""
        return check_budget(self.act(graph, budget, rng), budget, graph.n)

    @abstractmethod
    def act(self, graph: Graph, budget: Optional[int], rng: np.random.Generator) -> TreatmentVector:
        """
        Escolhe o vetor de tratamento da rodada

        Args:
            graph: Rede observada na rodada
            budget: Orçamento B_t (None para ilimitado)
            rng: Fluxo aleatório do agente

        Returns:
            Vetor binário de comprimento n
        """

    def observe(self, graph: Graph, z: TreatmentVector, rewards: np.ndarray) -> None:
        """Recebe as recompensas realizadas; políticas sem estado ignoram"""

    def snapshot(self) -> Optional[PosteriorState]:
        """Estado posterior atual, quando houver"""
        return None

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(k={self.k}, cutoff={self.cutoff})"


AgentFactory = Callable[[AgentSpec, AgentContext], BaseAgent]


class AgentRegistry:
    """Registro dos tipos de agente disponíveis"""

    def __init__(self):
        self._factories: Dict[str, AgentFactory] = {}

    def register(self, kind: str, factory: AgentFactory) -> None:
        self._factories[kind] = factory

    def create(self, spec: AgentSpec, context: AgentContext) -> BaseAgent:
        """
        Instancia o agente descrito por spec

        Args:
            spec: Tipo e hiperparâmetros
            context: Dimensões, solver e θ verdadeiro (para o oráculo)

        Returns:
            Agente novo, sem estado compartilhado
        """
        spec.validate()
        if spec.kind not in self._factories:
            raise ConfigurationError(f"Agente não registrado: {spec.kind}")
        return self._factories[spec.kind](spec, context)

    def kinds(self) -> List[str]:
        return sorted(self._factories)

    def __contains__(self, kind: str) -> bool:
        return kind in self._factories


_global_registry: Optional[AgentRegistry] = None


def get_registry() -> AgentRegistry:
    """Retorna registro global de agentes"""
    global _global_registry
    if _global_registry is None:
        _global_registry = AgentRegistry()
    return _global_registry
