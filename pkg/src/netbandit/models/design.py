"""
Matriz de design do modelo linear.

Colunas: bloco μ (k colunas, uma por grupo) seguido do bloco γ (C+1 colunas,
contagem agrupada 0..C em ordem crescente). Posterior, otimizador e CSV
indexam θ por esta posição.
"""

from dataclasses import dataclass

import numpy as np

from ..core.exceptions import ContractViolation
from .netgen import Graph, TreatmentVector, treated_neighbor_counts


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    values: np.ndarray
    k: int
    cutoff: int

    def __post_init__(self):
        expected_cols = self.k + self.cutoff + 1
        if self.values.ndim != 2 or self.values.shape[1] != expected_cols:
            raise ContractViolation(
                f"Design com forma {self.values.shape}, esperado (n, {expected_cols})"
            )
        self.values.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    @property
    def mu_block(self) -> np.ndarray:
        return self.values[:, :self.k]

    @property
    def gamma_block(self) -> np.ndarray:
        return self.values[:, self.k:]

    def predict(self, theta: np.ndarray) -> np.ndarray:
        """X θ: recompensas esperadas por nó"""
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.dimension,):
            raise ContractViolation(f"θ com forma {theta.shape}, esperado ({self.dimension},)")
        return self.values @ theta

    def stack(self, other: "DesignMatrix") -> "DesignMatrix":
        if (other.k, other.cutoff) != (self.k, self.cutoff):
            raise ContractViolation("Designs com (k, C) diferentes não podem ser empilhados")
        return DesignMatrix(np.vstack([self.values, other.values]), self.k, self.cutoff)


def build_design(g: Graph, z: TreatmentVector, k: int, cutoff: int) -> DesignMatrix:
    """
    Constrói X = [diag(z) X_G | X_d] para uma rodada

    Args:
        g: Grafo da rodada
        z: Vetor de tratamento
        k: Número de grupos
        cutoff: Corte C das contagens de vizinhos tratados

    Returns:
        DesignMatrix n x (k + C + 1) com entradas 0/1
    """
    if g.group_count > k:
        raise ContractViolation(f"Rótulo de grupo {g.group_count} fora do intervalo 1..{k}")
    if cutoff < 0:
        raise ContractViolation(f"cutoff deve ser >= 0 (recebido {cutoff})")
    z = np.asarray(z)
    counts = np.minimum(treated_neighbor_counts(g, z), cutoff)

    rows = np.arange(g.n)
    values = np.zeros((g.n, k + cutoff + 1), dtype=float)
    values[rows, g.groups - 1] = z
    values[rows, k + counts] = 1.0
    return DesignMatrix(values, k, cutoff)


def collapse_to_sum(X: DesignMatrix) -> np.ndarray:
    """Soma das linhas de X; ⟨soma, θ⟩ é a recompensa total esperada"""
    return X.values.sum(axis=0)


def design_sums(g: Graph, Z: np.ndarray, k: int, cutoff: int) -> np.ndarray:
    """
    collapse_to_sum(build_design(g, z)) para cada linha de um bloco de tratamentos

    Args:
        g: Grafo da rodada
        Z: Matriz m x n de tratamentos
        k: Número de grupos
        cutoff: Corte C

    Returns:
        Matriz m x (k + C + 1)
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=np.int64))
    if Z.shape[1] != g.n:
        raise ContractViolation(f"Tratamentos com {Z.shape[1]} colunas para n={g.n}")
    if g.group_count > k:
        raise ContractViolation(f"Rótulo de grupo {g.group_count} fora do intervalo 1..{k}")
    m, width = Z.shape[0], cutoff + 1
    counts = np.minimum(np.asarray(g.adjacency @ Z.T).T, cutoff)
    membership = np.eye(k)[g.groups - 1]
    mu_part = Z @ membership
    slots = (np.arange(m)[:, None] * width + counts).ravel()
    gamma_part = np.bincount(slots, minlength=m * width).reshape(m, width)
    return np.hstack([mu_part, gamma_part.astype(float)])
