"""
Ambiente verdadeiro: recompensas esperadas estruturadas (efeito direto por
grupo + efeito indireto pela contagem de vizinhos tratados), a variante
não aditiva, realização de ruído e geração aleatória dos parâmetros.

Contagens de vizinhos tratados acima do corte C são agrupadas em C.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.exceptions import ConfigurationError, ContractViolation
from .netgen import Graph, TreatmentVector, treated_neighbor_counts

logger = logging.getLogger(__name__)


def _as_table(values: Sequence[float], name: str) -> np.ndarray:
    table = np.array(values, dtype=float).reshape(-1)
    if table.size == 0:
        raise ConfigurationError(f"{name} não pode ser vazio")
    if not np.all(np.isfinite(table)):
        raise ConfigurationError(f"{name} contém valores não finitos")
    table.setflags(write=False)
    return table


def _check_labels(g: Graph, k: int) -> None:
    if g.group_count > k:
        raise ContractViolation(
            f"Rótulo de grupo {g.group_count} fora do intervalo 1..{k}"
        )


def _check_treatment(g: Graph, z: TreatmentVector) -> np.ndarray:
    z = np.asarray(z)
    if z.shape != (g.n,):
        raise ContractViolation(f"Vetor de tratamento com forma {z.shape}, esperado ({g.n},)")
    if np.any((z != 0) & (z != 1)):
        raise ContractViolation("Vetor de tratamento deve ser binário")
    return z.astype(np.int64)


@dataclass(frozen=True, eq=False)
class ThetaTrue:
    """Parâmetros verdadeiros: mu (k efeitos diretos) e gamma (C+1 efeitos indiretos)"""
    mu: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu", _as_table(self.mu, "mu"))
        object.__setattr__(self, "gamma", _as_table(self.gamma, "gamma"))

    @property
    def k(self) -> int:
        return len(self.mu)

    @property
    def cutoff(self) -> int:
        return len(self.gamma) - 1

    @property
    def dimension(self) -> int:
        return self.k + self.cutoff + 1

    def as_vector(self) -> np.ndarray:
        """Vetor θ na ordem de colunas do design: bloco μ e depois bloco γ"""
        return np.concatenate([self.mu, self.gamma])

    @classmethod
    def from_vector(cls, vector: Sequence[float], k: int) -> "ThetaTrue":
        vector = np.asarray(vector, dtype=float)
        if k < 1 or len(vector) < k + 1:
            raise ContractViolation(f"Vetor de tamanho {len(vector)} incompatível com k={k}")
        return cls(mu=vector[:k], gamma=vector[k:])

    def scaled(self, factor: float) -> "ThetaTrue":
        return ThetaTrue(mu=self.mu * factor, gamma=self.gamma * factor)

    def expected(self, g: Graph, z: TreatmentVector) -> np.ndarray:
        return expected_rewards(g, z, self)

    def __repr__(self) -> str:
        return f"ThetaTrue(k={self.k}, cutoff={self.cutoff})"


@dataclass(frozen=True, eq=False)
class MisspecTheta:
    """Modelo não aditivo: tabelas de efeito indireto distintas para tratados e não tratados"""
    mu: np.ndarray
    gamma0: np.ndarray
    gamma1: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu", _as_table(self.mu, "mu"))
        object.__setattr__(self, "gamma0", _as_table(self.gamma0, "gamma0"))
        object.__setattr__(self, "gamma1", _as_table(self.gamma1, "gamma1"))
        if len(self.gamma0) != len(self.gamma1):
            raise ConfigurationError(
                f"gamma0 e gamma1 devem ter o mesmo tamanho ({len(self.gamma0)} != {len(self.gamma1)})"
            )

    @property
    def k(self) -> int:
        return len(self.mu)

    @property
    def cutoff(self) -> int:
        return len(self.gamma0) - 1

    def expected(self, g: Graph, z: TreatmentVector) -> np.ndarray:
        return expected_rewards_misspec(g, z, self)

    def __repr__(self) -> str:
        return f"MisspecTheta(k={self.k}, cutoff={self.cutoff})"


@dataclass(frozen=True)
class NoiseSpec:
    """Ruído gaussiano com desvio padrão sigma"""
    sigma: float = 1.0
    family: str = "gaussian"

    def validate(self) -> None:
        problems = []
        if not np.isfinite(self.sigma) or self.sigma < 0:
            problems.append(f"sigma deve ser >= 0 (recebido {self.sigma})")
        if self.family != "gaussian":
            problems.append(f"família de ruído não suportada: {self.family}")
        if problems:
            raise ConfigurationError("Especificação de ruído inválida", problems)


@dataclass(frozen=True)
class ThetaGenSpec:
    """
    Regras de geração dos parâmetros verdadeiros.

    μ_j ~ N(mu_mean, mu_sd²); Γ(d) ~ N(d, gamma_sd²). No modelo não aditivo,
    Γ_1(d) ~ N(misspec_slope·d, gamma_sd²).
    """
    k: int
    cutoff: int
    mu_mean: float = 2.0
    mu_sd: float = 1.0
    gamma_sd: float = 1.0
    misspec_slope: float = 0.5

    def validate(self) -> None:
        problems = []
        if self.k < 1:
            problems.append(f"k deve ser >= 1 (recebido {self.k})")
        if self.cutoff < 0:
            problems.append(f"cutoff deve ser >= 0 (recebido {self.cutoff})")
        if self.mu_sd < 0 or self.gamma_sd < 0:
            problems.append("desvios padrão devem ser >= 0")
        if problems:
            raise ConfigurationError("Gerador de parâmetros inválido", problems)

    @property
    def dimension(self) -> int:
        return self.k + self.cutoff + 1


def sample_theta(spec: ThetaGenSpec, rng: np.random.Generator) -> ThetaTrue:
    """
    Sorteia os parâmetros verdadeiros de uma replicação

    Args:
        spec: Regras de geração
        rng: Gerador numpy semeado

    Returns:
        ThetaTrue com μ_j ~ N(2,1) e Γ(d) ~ N(d,1) nas configurações padrão
    """
    spec.validate()
    mu = rng.normal(spec.mu_mean, spec.mu_sd, size=spec.k)
    gamma = rng.normal(np.arange(spec.cutoff + 1, dtype=float), spec.gamma_sd)
    return ThetaTrue(mu=mu, gamma=gamma)


def sample_misspec_theta(spec: ThetaGenSpec, rng: np.random.Generator) -> MisspecTheta:
    """Sorteia parâmetros do modelo não aditivo (Γ_0 como Γ, Γ_1 com inclinação reduzida)"""
    spec.validate()
    counts = np.arange(spec.cutoff + 1, dtype=float)
    mu = rng.normal(spec.mu_mean, spec.mu_sd, size=spec.k)
    gamma0 = rng.normal(counts, spec.gamma_sd)
    gamma1 = rng.normal(spec.misspec_slope * counts, spec.gamma_sd)
    return MisspecTheta(mu=mu, gamma0=gamma0, gamma1=gamma1)


def pooled_counts(g: Graph, z: TreatmentVector, cutoff: int) -> np.ndarray:
    """min(A z, C) por nó"""
    return np.minimum(treated_neighbor_counts(g, z), cutoff)


def expected_rewards(g: Graph, z: TreatmentVector, theta: ThetaTrue) -> np.ndarray:
    """
    Recompensa esperada de cada nó sob o modelo aditivo

    Args:
        g: Grafo da rodada
        z: Vetor de tratamento
        theta: Parâmetros verdadeiros

    Returns:
        Vetor com z_i·μ_{g(i)} + Γ(min(d_i, C))
    """
    _check_labels(g, theta.k)
    z = _check_treatment(g, z)
    counts = pooled_counts(g, z, theta.cutoff)
    return z * theta.mu[g.groups - 1] + theta.gamma[counts]


def expected_rewards_misspec(g: Graph, z: TreatmentVector, mtheta: MisspecTheta) -> np.ndarray:
    """Recompensa esperada sob o modelo não aditivo"""
    _check_labels(g, mtheta.k)
    z = _check_treatment(g, z)
    counts = pooled_counts(g, z, mtheta.cutoff)
    treated = mtheta.mu[g.groups - 1] + mtheta.gamma1[counts]
    return np.where(z == 1, treated, mtheta.gamma0[counts])


def realize_rewards(expected: np.ndarray, noise: NoiseSpec,
                    rng: np.random.Generator) -> np.ndarray:
    """
    Adiciona ruído independente às recompensas esperadas

    Args:
        expected: Recompensas esperadas
        noise: Especificação do ruído
        rng: Gerador numpy semeado

    Returns:
        expected + sigma·N(0,1), ou cópia exata quando sigma = 0
    """
    noise.validate()
    expected = np.asarray(expected, dtype=float)
    if noise.sigma == 0:
        return expected.copy()
    return expected + noise.sigma * rng.standard_normal(expected.shape)
