"""
Geração de redes aleatórias por rodada e consultas sobre o grafo.

A cada rodada uma nova rede (adjacência + rótulos de grupo) é amostrada de um
modelo populacional: stochastic block model (SBM) ou modelo de espaço latente.
A adjacência é guardada de forma esparsa (listas de vizinhos em formato CSR),
pois a escala alvo é n=1000 com grau médio em torno de 4.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from ..core.exceptions import ConfigurationError, ContractViolation

logger = logging.getLogger(__name__)

TreatmentVector = np.ndarray


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Graph:
    """Rede de uma rodada: adjacência simétrica sem laços e rótulos em {1..k}."""
    n: int
    indptr: np.ndarray
    indices: np.ndarray
    groups: np.ndarray
    _adjacency: sp.csr_matrix = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ContractViolation(f"Grafo precisa de ao menos 1 nó (n={self.n})")
        if len(self.indptr) != self.n + 1:
            raise ContractViolation("indptr incompatível com n")
        if len(self.groups) != self.n:
            raise ContractViolation(
                f"Vetor de grupos com tamanho {len(self.groups)} para n={self.n}"
            )
        if self.n and np.min(self.groups) < 1:
            raise ContractViolation("Rótulos de grupo devem estar em {1..k}")

        data = np.ones(len(self.indices), dtype=np.int64)
        adjacency = sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))
        object.__setattr__(self, "_adjacency", adjacency)
        for name in ("indptr", "indices", "groups"):
            _frozen(getattr(self, name))

    @classmethod
    def from_edges(cls,
                   n: int,
                   edges: Union[Sequence[Tuple[int, int]], np.ndarray],
                   groups: Optional[Sequence[int]] = None) -> "Graph":
        """
        Constrói um grafo a partir de uma lista de arestas não direcionadas

        Args:
            n: Número de nós
            edges: Pares (i, j) com índices base 0; duplicatas são ignoradas
            groups: Rótulos de grupo (base 1); padrão é grupo único

        Returns:
            Grafo imutável
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(edges) and (edges.min() < 0 or edges.max() >= n):
            raise ContractViolation(f"Aresta com nó fora de 0..{n - 1}")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ContractViolation("Laços (i, i) não são permitidos")

        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        matrix = sp.coo_matrix(
            (np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(n, n)
        ).tocsr()
        matrix.data[:] = 1
        matrix.sort_indices()

        if groups is None:
            groups = np.ones(n, dtype=np.int64)
        return cls(
            n=n,
            indptr=matrix.indptr.astype(np.int64),
            indices=matrix.indices.astype(np.int64),
            groups=np.asarray(groups, dtype=np.int64).copy(),
        )

    @property
    def adjacency(self) -> sp.csr_matrix:
        """Matriz de adjacência esparsa (somente leitura por convenção)"""
        return self._adjacency

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def group_count(self) -> int:
        return int(self.groups.max())

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edges(self) -> np.ndarray:
        """Retorna as arestas (i < j) como matriz m x 2"""
        upper = sp.triu(self._adjacency, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return np.column_stack([upper.row[order], upper.col[order]]).astype(np.int64)

    def to_dense(self) -> np.ndarray:
        return self._adjacency.toarray()

    def mean_degree(self) -> float:
        return float(self.degrees.mean())

    def density(self) -> float:
        if self.n < 2:
            return 0.0
        return self.edge_count / (self.n * (self.n - 1) / 2)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count}, groups={self.group_count})"


def _pairs_to_graph(n: int, mask: np.ndarray, groups: np.ndarray) -> Graph:
    rows, cols = np.triu_indices(n, k=1)
    return Graph.from_edges(n, np.column_stack([rows[mask], cols[mask]]), groups)


@dataclass(frozen=True)
class SbmParams:
    """Parâmetros do stochastic block model"""
    k: int
    p: Tuple[float, ...]
    W: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))
        object.__setattr__(self, "W", tuple(tuple(float(v) for v in row) for row in self.W))

    @property
    def membership(self) -> np.ndarray:
        return np.asarray(self.p, dtype=float)

    @property
    def edge_matrix(self) -> np.ndarray:
        return np.asarray(self.W, dtype=float)

    def validate(self) -> None:
        """Levanta ConfigurationError se p não for estocástico ou W inválida"""
        problems = []
        p = self.membership
        W = self.edge_matrix
        if self.k < 1:
            problems.append(f"k deve ser >= 1 (recebido {self.k})")
        if p.shape != (self.k,):
            problems.append(f"p deve ter comprimento k={self.k} (recebido {p.shape[0]})")
        elif np.any(p < 0) or not math.isclose(p.sum(), 1.0, abs_tol=1e-9):
            problems.append("p deve ser não negativo e somar 1")
        if W.shape != (self.k, self.k):
            problems.append(f"W deve ser {self.k}x{self.k} (recebido {W.shape})")
        else:
            if np.any(W < 0) or np.any(W > 1):
                problems.append("entradas de W devem estar em [0, 1]")
            if not np.allclose(W, W.T):
                problems.append("W deve ser simétrica")
        if problems:
            raise ConfigurationError("Parâmetros de SBM inválidos", problems)

    def expected_degree(self, n: int) -> float:
        """Grau esperado (n-1) p^T W p"""
        p = self.membership
        return float((n - 1) * p @ self.edge_matrix @ p)

    def sample(self, n: int, rng: np.random.Generator) -> Graph:
        return sample_sbm(self, n, rng)


def protocol_sbm_params(n: int, within: float = 0.3, across: Optional[float] = None,
                     k: Optional[int] = None) -> SbmParams:
    """
    SBM do protocolo de simulação: k = ceil(n/10) grupos equiprováveis,
    probabilidade 0.3 dentro do grupo e 1/n entre grupos.
    """
    k = k or max(1, math.ceil(n / 10))
    across = (1.0 / n) if across is None else across
    W = np.full((k, k), across)
    np.fill_diagonal(W, within)
    return SbmParams(k=k, p=tuple(np.full(k, 1.0 / k)), W=tuple(map(tuple, W)))


def sample_sbm(params: SbmParams, n: int, rng: np.random.Generator) -> Graph:
    """
    Amostra um grafo do SBM

    Args:
        params: Parâmetros (k, p, W)
        n: Número de nós
        rng: Gerador numpy semeado

    Returns:
        Grafo com grupos ~ Multinomial(p) e arestas independentes
        com probabilidade W[g_i, g_j]
    """
    params.validate()
    if n < 1:
        raise ConfigurationError(f"n deve ser >= 1 (recebido {n})")

    groups = rng.choice(params.k, size=n, p=params.membership) + 1
    rows, cols = np.triu_indices(n, k=1)
    probs = params.edge_matrix[groups[rows] - 1, groups[cols] - 1]
    mask = rng.random(len(rows)) < probs
    return _pairs_to_graph(n, mask, groups.astype(np.int64))


@dataclass(frozen=True)
class LatentSpaceParams:
    """Modelo de espaço latente com efeitos aditivos de emissor/receptor"""
    alpha: float = -2.0
    latent_dim: int = 2
    u_scale: float = 1.0
    a_scale: float = 0.0
    b_scale: float = 0.0

    def validate(self) -> None:
        problems = []
        if self.latent_dim < 1:
            problems.append(f"latent_dim deve ser >= 1 (recebido {self.latent_dim})")
        for name in ("u_scale", "a_scale", "b_scale"):
            if getattr(self, name) < 0:
                problems.append(f"{name} deve ser >= 0")
        if not math.isfinite(self.alpha):
            problems.append("alpha deve ser finito")
        if problems:
            raise ConfigurationError("Parâmetros de espaço latente inválidos", problems)

    def sample(self, n: int, rng: np.random.Generator,
               groups: Optional[Sequence[int]] = None) -> Graph:
        return sample_latent_space(self, n, rng, groups=groups)


def latent_edge_probabilities(params: LatentSpaceParams, u: np.ndarray,
                              a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Probabilidades de aresta para os pares i<j (ordem de np.triu_indices)"""
    n = len(a)
    rows, cols = np.triu_indices(n, k=1)
    similarity = np.einsum("ij,ij->i", u[rows], u[cols])
    # log-odds simétrico: média dos efeitos de emissor/receptor dos dois lados
    logits = params.alpha + similarity + (a[rows] + b[rows] + a[cols] + b[cols]) / 2.0
    return expit(logits)


def sample_latent_space(params: LatentSpaceParams, n: int, rng: np.random.Generator,
                        groups: Optional[Sequence[int]] = None) -> Graph:
    """
    Amostra um grafo do modelo de espaço latente

    Args:
        params: Parâmetros do modelo
        n: Número de nós
        rng: Gerador numpy semeado
        groups: Rótulos opcionais (base 1); padrão é um único grupo

    Returns:
        Grafo não direcionado
    """
    params.validate()
    if n < 1:
        raise ConfigurationError(f"n deve ser >= 1 (recebido {n})")
    if groups is not None and len(groups) != n:
        raise ContractViolation(f"Rótulos fornecidos ({len(groups)}) não batem com n={n}")

    u = rng.normal(0.0, params.u_scale, size=(n, params.latent_dim))
    a = rng.normal(0.0, params.a_scale, size=n)
    b = rng.normal(0.0, params.b_scale, size=n)
    probs = latent_edge_probabilities(params, u, a, b)
    mask = rng.random(len(probs)) < probs

    labels = np.ones(n, dtype=np.int64) if groups is None else np.asarray(groups, dtype=np.int64)
    return _pairs_to_graph(n, mask, labels.copy())


def treated_neighbor_counts(g: Graph, z: TreatmentVector) -> np.ndarray:
    """
    Conta os vizinhos tratados de cada nó (o próprio tratamento não entra)

    Args:
        g: Grafo da rodada
        z: Vetor binário de tratamento de comprimento n

    Returns:
        Vetor inteiro A z
    """
    z = np.asarray(z)
    if z.shape != (g.n,):
        raise ContractViolation(f"Vetor de tratamento com forma {z.shape}, esperado ({g.n},)")
    return np.asarray(g.adjacency @ z.astype(np.int64), dtype=np.int64)
