"""
Problema de seleção de tratamentos com orçamento e sua solução.

Todo problema expõe uma tabela por nó F[i, z_i, c] com a recompensa esperada
do nó i quando seu tratamento é z_i e sua contagem agrupada de vizinhos
tratados é c. O objetivo é Σ_i F[i, z_i, min((A z)_i, C)].
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..core.exceptions import ContractViolation
from ..models.netgen import Graph, TreatmentVector
from ..models.reward import MisspecTheta, ThetaTrue

logger = logging.getLogger(__name__)

OBJECTIVE_TOLERANCE = 1e-9

STATUS_EXACT = "exact"
STATUS_HEURISTIC = "heuristic"
STATUS_TRIVIAL = "trivial"


class TableProblem:
    """Base dos problemas: grafo, orçamento e tabela de recompensas por nó"""

    def __init__(self, graph: Graph, cutoff: int, budget: Optional[int]):
        if cutoff < 0:
            raise ContractViolation(f"cutoff deve ser >= 0 (recebido {cutoff})")
        if budget is not None and budget < 0:
            raise ContractViolation(f"Orçamento deve ser >= 0 (recebido {budget})")
        self.graph = graph
        self.cutoff = int(cutoff)
        self.budget = None if budget is None else int(budget)
        self._table: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def effective_budget(self) -> int:
        """Orçamento efetivo: n quando ilimitado"""
        return self.n if self.budget is None else min(self.budget, self.n)

    @property
    def is_linear(self) -> bool:
        return False

    def _build_table(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def node_table(self) -> np.ndarray:
        if self._table is None:
            table = self._build_table()
            table.setflags(write=False)
            self._table = table
        return self._table

    def check_treatment(self, z: TreatmentVector) -> np.ndarray:
        z = np.asarray(z)
        if z.shape != (self.n,):
            raise ContractViolation(f"Vetor de tratamento com forma {z.shape}, esperado ({self.n},)")
        if np.any((z != 0) & (z != 1)):
            raise ContractViolation("Vetor de tratamento deve ser binário")
        return z.astype(np.int64)

    def is_feasible(self, z: TreatmentVector) -> bool:
        return int(np.sum(z)) <= self.effective_budget

    def objective(self, z: TreatmentVector) -> float:
        """Recompensa total esperada de z"""
        z = self.check_treatment(z)
        counts = np.minimum(self.graph.adjacency @ z, self.cutoff)
        return float(self.node_table[np.arange(self.n), z, counts].sum())

    def evaluate_many(self, Z: np.ndarray) -> np.ndarray:
        """Objetivo para cada linha de uma matriz m x n de tratamentos"""
        Z = np.atleast_2d(np.asarray(Z, dtype=np.int64))
        counts = np.minimum((self.graph.adjacency @ Z.T).T, self.cutoff)
        nodes = np.arange(self.n)[None, :]
        return self.node_table[nodes, Z, counts].sum(axis=1)

    def describe(self) -> str:
        budget = "ilimitado" if self.budget is None else str(self.budget)
        return f"{type(self).__name__}(n={self.n}, C={self.cutoff}, B={budget})"

    def __repr__(self) -> str:
        return self.describe()


class BudgetedProblem(TableProblem):
    """
    max_z Σ_i [z_i μ_{g(i)} + γ(min(d_i, C))] sujeito a Σ z_i ≤ B

    Args:
        graph: Grafo da rodada
        theta: Vetor θ (bloco μ com k entradas, bloco γ com C+1 entradas)
        k: Número de grupos
        budget: Orçamento B ou None para ilimitado
    """

    def __init__(self, graph: Graph, theta: Sequence[float], k: int,
                 budget: Optional[int] = None):
        theta = np.array(theta, dtype=float).reshape(-1)
        if k < 1 or len(theta) < k + 1:
            raise ContractViolation(f"θ de tamanho {len(theta)} incompatível com k={k}")
        if not np.all(np.isfinite(theta)):
            raise ContractViolation("θ contém valores não finitos")
        if graph.group_count > k:
            raise ContractViolation(f"Rótulo de grupo {graph.group_count} fora do intervalo 1..{k}")
        super().__init__(graph, len(theta) - k - 1, budget)
        self.theta = theta
        self.theta.setflags(write=False)
        self.k = int(k)

    @classmethod
    def from_theta(cls, graph: Graph, theta: ThetaTrue,
                   budget: Optional[int] = None) -> "BudgetedProblem":
        return cls(graph, theta.as_vector(), theta.k, budget)

    @property
    def mu(self) -> np.ndarray:
        return self.theta[:self.k]

    @property
    def gamma(self) -> np.ndarray:
        return self.theta[self.k:]

    @property
    def is_linear(self) -> bool:
        return True

    def _build_table(self) -> np.ndarray:
        direct = self.mu[self.graph.groups - 1]
        table = np.empty((self.n, 2, self.cutoff + 1))
        table[:, 0, :] = self.gamma[None, :]
        table[:, 1, :] = self.gamma[None, :] + direct[:, None]
        return table

    def scaled(self, factor: float) -> "BudgetedProblem":
        return BudgetedProblem(self.graph, self.theta * factor, self.k, self.budget)

    def with_budget(self, budget: Optional[int]) -> "BudgetedProblem":
        return BudgetedProblem(self.graph, self.theta, self.k, budget)


class MisspecifiedProblem(TableProblem):
    """Mesmo problema sob recompensas não aditivas (tabelas Γ_0 e Γ_1)"""

    def __init__(self, graph: Graph, mtheta: MisspecTheta, budget: Optional[int] = None):
        if graph.group_count > mtheta.k:
            raise ContractViolation(f"Rótulo de grupo {graph.group_count} fora do intervalo 1..{mtheta.k}")
        super().__init__(graph, mtheta.cutoff, budget)
        self.mtheta = mtheta

    def _build_table(self) -> np.ndarray:
        direct = self.mtheta.mu[self.graph.groups - 1]
        table = np.empty((self.n, 2, self.cutoff + 1))
        table[:, 0, :] = self.mtheta.gamma0[None, :]
        table[:, 1, :] = self.mtheta.gamma1[None, :] + direct[:, None]
        return table


def make_problem(graph: Graph, theta, budget: Optional[int]) -> TableProblem:
    """Constrói o problema adequado ao tipo de parâmetro verdadeiro"""
    if isinstance(theta, MisspecTheta):
        return MisspecifiedProblem(graph, theta, budget)
    if isinstance(theta, ThetaTrue):
        return BudgetedProblem.from_theta(graph, theta, budget)
    raise ContractViolation(f"Tipo de parâmetro não suportado: {type(theta).__name__}")


def lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    """a < b na ordem lexicográfica (z_0 mais significativo)"""
    diff = np.flatnonzero(np.asarray(a) != np.asarray(b))
    return bool(diff.size) and a[diff[0]] < b[diff[0]]


def better(candidate_value: float, candidate_z: np.ndarray,
           best_value: Optional[float], best_z: Optional[np.ndarray]) -> bool:
    """Maior objetivo vence; empates (1e-9) vão para o z lexicograficamente menor"""
    if best_value is None:
        return True
    if candidate_value > best_value + OBJECTIVE_TOLERANCE:
        return True
    if candidate_value >= best_value - OBJECTIVE_TOLERANCE:
        return lex_less(candidate_z, best_z)
    return False


@dataclass(frozen=True, eq=False)
class Solution:
    """Tratamento escolhido, objetivo recalculado e metadados do solver"""
    z: np.ndarray
    objective: float
    status: str
    solver: str = ""
    bound: Optional[float] = None
    gap: Optional[float] = None
    nodes: int = 0
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    @classmethod
    def create(cls, problem: TableProblem, z: TreatmentVector, status: str,
               objective: Optional[float] = None, **kwargs) -> "Solution":
        """
        Valida e constrói uma solução

        O objetivo é sempre recalculado; um valor informado que difira em
        mais de 1e-9 (relativo) indica erro no solver.
        """
        z = problem.check_treatment(z).astype(np.int8)
        if not problem.is_feasible(z):
            raise ContractViolation(
                f"Solução viola o orçamento: {int(z.sum())} > {problem.effective_budget}"
            )
        value = problem.objective(z)
        if objective is not None:
            scale = max(1.0, abs(value))
            if abs(objective - value) > OBJECTIVE_TOLERANCE * scale:
                raise ContractViolation(
                    f"Objetivo informado {objective!r} difere do recalculado {value!r}"
                )
        if problem.effective_budget == 0:
            status = STATUS_TRIVIAL
        z.setflags(write=False)
        return cls(z=z, objective=value, status=status, **kwargs)

    @property
    def treated(self) -> int:
        return int(self.z.sum())

    @property
    def is_exact(self) -> bool:
        return self.status in (STATUS_EXACT, STATUS_TRIVIAL)

    def __repr__(self) -> str:
        return (f"Solution(objective={self.objective:.6g}, status={self.status}, "
                f"treated={self.treated}, solver={self.solver})")
