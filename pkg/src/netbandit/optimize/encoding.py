"""
Codificação linear inteira do problema com orçamento.

Variáveis (índices base 0):
    z_j          j                       tratamento do nó j
    y_{i,c}      n + i(C+1) + c          seletor da contagem agrupada c do nó i
    s_i          n + n(C+1) + i          contagem agrupada min((Az)_i, C)
    w_i          n + n(C+2) + i          indicador "contagem >= C"

Objetivo: Σ_j μ_{g(j)} z_j + Σ_{i,c} γ(c) y_{i,c}.

Restrições:
    Σ_c y_{i,c} = 1
    s_i − Σ_c c·y_{i,c} = 0
    s_i − Σ_j A_ij z_j ≤ 0
    −s_i + Σ_j A_ij z_j − M_i w_i ≤ 0      M_i = (d_i − C)⁺
    C·w_i − s_i ≤ 0
    Σ_j z_j ≤ B

Limites: z, y, w ∈ [0, 1]; s_i ∈ [0, min(d_i, C)]; y_{i,c} = 0 para
c > min(d_i, C); w_i = 0 quando d_i < C.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

import numpy as np
import scipy.sparse as sp

from ..core.exceptions import ContractViolation
from .problem import BudgetedProblem
from .simplex import LinearProgram

logger = logging.getLogger(__name__)

FEASIBILITY_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Encoding:
    """Programa linear inteiro associado a um BudgetedProblem"""
    problem: BudgetedProblem
    lp: LinearProgram
    binary: np.ndarray

    @property
    def n(self) -> int:
        return self.problem.n

    @property
    def cutoff(self) -> int:
        return self.problem.cutoff

    def z_index(self, j: int) -> int:
        return j

    def y_index(self, i: int, c: int) -> int:
        return self.n + i * (self.cutoff + 1) + c

    def s_index(self, i: int) -> int:
        return self.n + self.n * (self.cutoff + 1) + i

    def w_index(self, i: int) -> int:
        return self.n + self.n * (self.cutoff + 2) + i

    @property
    def num_vars(self) -> int:
        return self.n * (self.cutoff + 4)

    def variable_name(self, index: int) -> str:
        n, width = self.n, self.cutoff + 1
        if index < n:
            return f"z_{index}"
        index -= n
        if index < n * width:
            return f"y_{index // width}_{index % width}"
        index -= n * width
        if index < n:
            return f"s_{index}"
        return f"w_{index - n}"

    def z_part(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x)[:self.n]

    def point_from_z(self, z: np.ndarray) -> np.ndarray:
        """Ponto inteiro da codificação correspondente a um tratamento z"""
        z = self.problem.check_treatment(z)
        counts = np.asarray(self.problem.graph.adjacency @ z)
        pooled = np.minimum(counts, self.cutoff)
        x = np.zeros(self.num_vars)
        x[:self.n] = z
        nodes = np.arange(self.n)
        x[self.n + nodes * (self.cutoff + 1) + pooled] = 1.0
        x[self.n + self.n * (self.cutoff + 1) + nodes] = pooled
        x[self.n + self.n * (self.cutoff + 2) + nodes] = (counts > self.cutoff).astype(float)
        return x

    def is_feasible(self, x: np.ndarray, tol: float = FEASIBILITY_TOLERANCE) -> bool:
        """Verifica limites e restrições (sem exigir integralidade)"""
        x = np.asarray(x, dtype=float)
        lp = self.lp
        if np.any(x < lp.lower - tol) or np.any(x > lp.upper + tol):
            return False
        if lp.A_ub is not None and np.any(lp.A_ub @ x > lp.b_ub + tol):
            return False
        if lp.A_eq is not None and np.any(np.abs(lp.A_eq @ x - lp.b_eq) > tol):
            return False
        return True

    def is_integral(self, x: np.ndarray, tol: float = 1e-6) -> bool:
        x = np.asarray(x)[self.binary]
        return bool(np.all(np.abs(x - np.round(x)) <= tol))

    def objective(self, x: np.ndarray) -> float:
        return float(self.lp.c @ np.asarray(x, dtype=float))

    def dump(self, path: Union[str, Path]) -> Path:
        """
        Grava a codificação em texto, uma restrição por linha

        Formato:
            maximize: <coef> <var> + ...
            c<k>: <coef> <var> + ... <= | = <rhs>
            bounds: <lower> <= <var> <= <upper>   (uma linha por variável)
            binary: <var> <var> ...
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(self.dump_lines()) + "\n", encoding="utf-8")
        logger.info(f"Codificação gravada em {path} ({self.num_vars} variáveis)")
        return path

    def dump_lines(self) -> List[str]:
        lp = self.lp
        lines = [f"# {self.problem.describe()}", "maximize: " + self._terms(lp.c)]
        count = 0
        for matrix, rhs, sense in ((lp.A_eq, lp.b_eq, "="), (lp.A_ub, lp.b_ub, "<=")):
            if matrix is None:
                continue
            csr = sp.csr_matrix(matrix)
            for row in range(csr.shape[0]):
                start, end = csr.indptr[row], csr.indptr[row + 1]
                coefficients = np.zeros(self.num_vars)
                coefficients[csr.indices[start:end]] = csr.data[start:end]
                lines.append(f"c{count}: {self._terms(coefficients)} {sense} {rhs[row]:.17g}")
                count += 1
        for index in range(self.num_vars):
            lines.append(f"bounds: {lp.lower[index]:.17g} <= {self.variable_name(index)} "
                         f"<= {lp.upper[index]:.17g}")
        lines.append("binary: " + " ".join(self.variable_name(i) for i in np.flatnonzero(self.binary)))
        return lines

    def _terms(self, coefficients: np.ndarray) -> str:
        nonzero = np.flatnonzero(coefficients)
        if not nonzero.size:
            return "0"
        return " + ".join(f"{coefficients[i]:.17g} {self.variable_name(i)}" for i in nonzero)


def encode(problem: BudgetedProblem) -> Encoding:
    """
    Monta a codificação linear inteira de um problema aditivo

    Args:
        problem: Problema com recompensas lineares em θ

    Returns:
        Encoding com matrizes esparsas e limites apertados pelos graus
    """
    if not isinstance(problem, BudgetedProblem):
        raise ContractViolation("A codificação linear exige um BudgetedProblem (modelo aditivo)")

    n, C = problem.n, problem.cutoff
    width = C + 1
    A = problem.graph.adjacency.tocsr().astype(float)
    degrees = problem.graph.degrees
    nodes = np.arange(n)

    y_start = n
    s_start = n + n * width
    w_start = s_start + n
    num_vars = w_start + n

    c = np.zeros(num_vars)
    c[:n] = problem.mu[problem.graph.groups - 1]
    c[y_start:s_start] = np.tile(problem.gamma, n)

    identity = sp.identity(n, format="csr")
    zeros = sp.csr_matrix((n, n))
    y_sum = sp.kron(identity, np.ones((1, width)), format="csr")
    y_count = sp.kron(identity, np.arange(width, dtype=float).reshape(1, -1), format="csr")
    empty_y = sp.csr_matrix((n, n * width))

    A_eq = sp.vstack([
        sp.hstack([zeros, y_sum, zeros, zeros]),
        sp.hstack([zeros, -y_count, identity, zeros]),
    ], format="csr")
    b_eq = np.concatenate([np.ones(n), np.zeros(n)])

    big_m = np.maximum(degrees - C, 0).astype(float)
    ub_blocks = [
        sp.hstack([-A, empty_y, identity, zeros]),
        sp.hstack([A, empty_y, -identity, -sp.diags(big_m)]),
        sp.hstack([zeros, empty_y, -identity, sp.diags(np.full(n, float(C)))]),
    ]
    b_ub = [np.zeros(3 * n)]
    if problem.budget is not None and problem.budget < n:
        ub_blocks.append(sp.hstack([sp.csr_matrix(np.ones((1, n))),
                                    sp.csr_matrix((1, n * width + 2 * n))]))
        b_ub.append(np.array([float(problem.budget)]))
    A_ub = sp.vstack(ub_blocks, format="csr")

    reach = np.minimum(degrees, C)
    lower = np.zeros(num_vars)
    upper = np.ones(num_vars)
    y_upper = (np.arange(width)[None, :] <= reach[:, None]).astype(float)
    upper[y_start:s_start] = y_upper.reshape(-1)
    upper[s_start:w_start] = reach
    upper[w_start:] = np.where(degrees >= C, 1.0, 0.0)

    binary = np.zeros(num_vars, dtype=bool)
    binary[:n] = True
    binary[y_start:s_start] = True
    binary[w_start:] = True

    lp = LinearProgram(c=c, A_ub=A_ub, b_ub=np.concatenate(b_ub),
                       A_eq=A_eq, b_eq=b_eq, lower=lower, upper=upper)
    logger.debug(f"Codificação de {problem.describe()}: {num_vars} variáveis, "
                 f"{A_ub.shape[0]} desigualdades, {A_eq.shape[0]} igualdades")
    return Encoding(problem=problem, lp=lp, binary=binary)


def dump_encoding(problem: BudgetedProblem, path: Union[str, Path]) -> Path:
    """Atalho: codifica e grava em texto"""
    return encode(problem).dump(path)
