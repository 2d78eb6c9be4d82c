"""
Simplex de variáveis limitadas para as relaxações lineares do branch-and-bound.

Forma aceita: maximizar cᵀx sujeito a A_ub x ≤ b_ub, A_eq x = b_eq e
lower ≤ x ≤ upper, com lower finito. Colunas fixas (lower = upper) são
substituídas antes da montagem do tableau, o que encolhe os nós profundos da
árvore de busca. O backend "highs" delega ao scipy.optimize.linprog para
conferência cruzada.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from ..core.exceptions import ConfigurationError, ContractViolation, NumericalError

logger = logging.getLogger(__name__)

LP_OPTIMAL = "optimal"
LP_INFEASIBLE = "infeasible"
LP_UNBOUNDED = "unbounded"
LP_ITERATION_LIMIT = "iteration_limit"

LP_BACKENDS = ("simplex", "highs")


def _dense(matrix, cols: int) -> np.ndarray:
    if matrix is None:
        return np.zeros((0, cols))
    if sp.issparse(matrix):
        return matrix.toarray().astype(float)
    return np.atleast_2d(np.asarray(matrix, dtype=float)).reshape(-1, cols)


def _vector(values, size: int) -> np.ndarray:
    if values is None:
        return np.zeros(size)
    return np.asarray(values, dtype=float).reshape(size)


@dataclass
class LinearProgram:
    """max cᵀx s.a. A_ub x ≤ b_ub, A_eq x = b_eq, lower ≤ x ≤ upper"""
    c: np.ndarray
    A_ub: Optional[object] = None
    b_ub: Optional[np.ndarray] = None
    A_eq: Optional[object] = None
    b_eq: Optional[np.ndarray] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        n = len(self.c)
        self.lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float).copy()
        self.upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).copy()
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ContractViolation("Limites com tamanho diferente do vetor de custos")
        if not np.all(np.isfinite(self.lower)):
            raise ContractViolation("Limites inferiores devem ser finitos")
        for name in ("A_ub", "A_eq"):
            matrix = getattr(self, name)
            if matrix is not None and matrix.shape[1] != n:
                raise ContractViolation(f"{name} com {matrix.shape[1]} colunas para {n} variáveis")

    @property
    def num_vars(self) -> int:
        return len(self.c)

    @property
    def num_ub(self) -> int:
        return 0 if self.A_ub is None else self.A_ub.shape[0]

    @property
    def num_eq(self) -> int:
        return 0 if self.A_eq is None else self.A_eq.shape[0]

    def with_bounds(self, lower: np.ndarray, upper: np.ndarray) -> "LinearProgram":
        """Cópia rasa com novos limites (matrizes compartilhadas)"""
        return LinearProgram(self.c, self.A_ub, self.b_ub, self.A_eq, self.b_eq, lower, upper)

    def tableau_cells(self) -> int:
        """Estimativa do tamanho do tableau denso (linhas x colunas)"""
        rows = self.num_ub + self.num_eq
        return rows * (self.num_vars + rows + 1)


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    iterations: int = 0
    backend: str = "simplex"

    @property
    def success(self) -> bool:
        return self.status == LP_OPTIMAL


class BoundedSimplex:
    """
    Simplex primal de duas fases em tableau denso com limites superiores implícitos

    Variáveis não básicas ficam no limite inferior (0 após deslocamento) ou no
    superior; o teste da razão considera a troca de limite da variável que
    entra. Preço de Dantzig, com a regra de Bland após pivôs degenerados
    consecutivos.
    """

    def __init__(self,
                 tol: float = 1e-9,
                 pivot_tol: float = 1e-9,
                 max_iterations: Optional[int] = None,
                 refresh_every: int = 50,
                 bland_after: int = 50):
        self.tol = tol
        self.pivot_tol = pivot_tol
        self.max_iterations = max_iterations
        self.refresh_every = refresh_every
        self.bland_after = bland_after

    def solve(self, lp: LinearProgram) -> LPResult:
        lower, upper = lp.lower, lp.upper
        if np.any(lower > upper + self.tol):
            return LPResult(LP_INFEASIBLE)

        n = lp.num_vars
        A_ub = _dense(lp.A_ub, n)
        A_eq = _dense(lp.A_eq, n)
        b_ub = _vector(lp.b_ub, A_ub.shape[0]) - A_ub @ lower
        b_eq = _vector(lp.b_eq, A_eq.shape[0]) - A_eq @ lower

        free = np.flatnonzero(upper - lower > self.tol)
        cap = (upper - lower)[free]
        A_ub, A_eq = A_ub[:, free], A_eq[:, free]

        keep_ub = np.any(np.abs(A_ub) > self.tol, axis=1)
        if np.any(b_ub[~keep_ub] < -self.tol):
            return LPResult(LP_INFEASIBLE)
        keep_eq = np.any(np.abs(A_eq) > self.tol, axis=1)
        if np.any(np.abs(b_eq[~keep_eq]) > self.tol):
            return LPResult(LP_INFEASIBLE)
        A_ub, b_ub = A_ub[keep_ub], b_ub[keep_ub]
        A_eq, b_eq = A_eq[keep_eq], b_eq[keep_eq]

        status, x_free, iterations = self._solve_standard(lp.c[free], A_ub, b_ub, A_eq, b_eq, cap)
        if status != LP_OPTIMAL:
            return LPResult(status, iterations=iterations)

        x = lower.copy()
        x[free] += x_free
        x = np.clip(x, lower, upper)
        return LPResult(LP_OPTIMAL, x=x, objective=float(lp.c @ x), iterations=iterations)

    def _solve_standard(self, c, A_ub, b_ub, A_eq, b_eq, cap):
        nf = len(c)
        m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
        m = m_ub + m_eq

        negative_ub = b_ub < 0
        n_art = int(negative_ub.sum()) + m_eq
        ncols = nf + m_ub + n_art

        T = np.zeros((m, ncols))
        beta = np.zeros(m)
        basis = np.empty(m, dtype=np.int64)

        sign = np.where(negative_ub, -1.0, 1.0)
        T[:m_ub, :nf] = A_ub * sign[:, None]
        T[np.arange(m_ub), nf + np.arange(m_ub)] = sign
        beta[:m_ub] = b_ub * sign

        eq_sign = np.where(b_eq < 0, -1.0, 1.0)
        T[m_ub:, :nf] = A_eq * eq_sign[:, None]
        beta[m_ub:] = b_eq * eq_sign

        art_rows = np.concatenate([np.flatnonzero(negative_ub), m_ub + np.arange(m_eq)])
        art_cols = nf + m_ub + np.arange(n_art)
        T[art_rows, art_cols] = 1.0
        basis[:m_ub] = nf + np.arange(m_ub)
        basis[art_rows] = art_cols

        upper = np.concatenate([cap, np.full(m_ub + n_art, np.inf)])
        state = _TableauState(T, beta, basis, upper)
        limit = self.max_iterations or 50 * (m + ncols) + 1000
        iterations = 0

        artificial = np.zeros(ncols, dtype=bool)
        artificial[art_cols] = True

        if n_art:
            phase1_cost = np.where(artificial, -1.0, 0.0)
            status, used = self._iterate(state, phase1_cost, np.ones(ncols, dtype=bool), limit)
            iterations += used
            if status != LP_OPTIMAL:
                return status, None, iterations
            infeasibility = state.values()[artificial].sum()
            if infeasibility > 1e-7 * max(1.0, np.abs(beta).sum()):
                return LP_INFEASIBLE, None, iterations
            self._drive_out_artificials(state, artificial)

        cost = np.concatenate([c, np.zeros(m_ub + n_art)])
        status, used = self._iterate(state, cost, ~artificial, limit - iterations)
        iterations += used
        if status != LP_OPTIMAL:
            return status, None, iterations
        return LP_OPTIMAL, state.values()[:nf], iterations

    def _drive_out_artificials(self, state: "_TableauState", artificial: np.ndarray) -> None:
        state.upper[artificial] = 0.0
        for r in np.flatnonzero(artificial[state.basis]):
            row = np.abs(state.T[r])
            row[artificial | state.is_basic] = 0.0
            j = int(np.argmax(row)) if row.size else 0
            if row.size and row[j] > 1e-7:
                value = state.upper[j] if state.at_upper[j] else 0.0
                state.pivot(r, j)
                state.xB[r] = value
            # senão a linha é redundante e a artificial permanece básica em 0

    def _iterate(self, state: "_TableauState", cost: np.ndarray,
                 eligible: np.ndarray, limit: int):
        d = state.reduced_costs(cost)
        degenerate = 0
        for iteration in range(max(limit, 0)):
            if iteration and iteration % self.refresh_every == 0:
                d = state.reduced_costs(cost)
                state.refresh_values()

            movable = eligible & ~state.is_basic
            can_rise = movable & ~state.at_upper & (d > self.tol) & (state.upper > self.tol)
            can_fall = movable & state.at_upper & (d < -self.tol)
            score = np.where(can_rise, d, np.where(can_fall, -d, 0.0))
            if not np.any(score > 0):
                return LP_OPTIMAL, iteration

            if degenerate >= self.bland_after:
                j = int(np.flatnonzero(score > 0)[0])
            else:
                j = int(np.argmax(score))
            direction = 1.0 if can_rise[j] else -1.0
            col = direction * state.T[:, j]

            ratios = np.full(len(col), np.inf)
            falling = col > self.pivot_tol
            ratios[falling] = np.maximum(state.xB[falling], 0.0) / col[falling]
            rising = (col < -self.pivot_tol) & np.isfinite(state.upper[state.basis])
            ratios[rising] = np.maximum(state.upper[state.basis][rising] - state.xB[rising], 0.0) / -col[rising]
            theta_rows = ratios.min() if len(ratios) else np.inf
            theta_flip = state.upper[j]

            if not np.isfinite(theta_rows) and not np.isfinite(theta_flip):
                return LP_UNBOUNDED, iteration

            if theta_flip <= theta_rows:
                state.xB -= col * theta_flip
                state.at_upper[j] = not state.at_upper[j]
                degenerate = 0
                continue

            ties = np.flatnonzero(ratios <= theta_rows + self.tol)
            if degenerate >= self.bland_after:
                r = int(ties[np.argmin(state.basis[ties])])
            else:
                r = int(ties[np.argmax(np.abs(col[ties]))])
            theta = theta_rows

            leaving = state.basis[r]
            leaves_at_upper = col[r] < 0
            entering_value = theta if direction > 0 else state.upper[j] - theta
            state.xB -= col * theta

            pivot_row = state.pivot(r, j)
            d = d - d[j] * pivot_row
            state.xB[r] = entering_value
            state.at_upper[leaving] = leaves_at_upper
            degenerate = degenerate + 1 if theta <= self.tol else 0

        return LP_ITERATION_LIMIT, max(limit, 0)


class _TableauState:
    """Tableau B⁻¹[A | b] com valores das básicas e situação das não básicas"""

    def __init__(self, T: np.ndarray, beta: np.ndarray, basis: np.ndarray, upper: np.ndarray):
        self.T = T
        self.beta = beta
        self.basis = basis
        self.upper = upper
        self.at_upper = np.zeros(T.shape[1], dtype=bool)
        self.is_basic = np.zeros(T.shape[1], dtype=bool)
        self.is_basic[basis] = True
        self.xB = beta.copy()

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        return cost - cost[self.basis] @ self.T

    def refresh_values(self) -> None:
        raised = np.flatnonzero(self.at_upper & ~self.is_basic)
        self.xB = self.beta - self.T[:, raised] @ self.upper[raised]

    def pivot(self, r: int, j: int) -> np.ndarray:
        column = self.T[:, j].copy()
        pivot_row = self.T[r] / column[r]
        beta_r = self.beta[r] / column[r]
        self.T -= np.outer(column, pivot_row)
        self.T[r] = pivot_row
        self.beta -= column * beta_r
        self.beta[r] = beta_r

        leaving = self.basis[r]
        self.is_basic[leaving] = False
        self.is_basic[j] = True
        self.at_upper[j] = False
        self.basis[r] = j
        return pivot_row

    def values(self) -> np.ndarray:
        x = np.where(self.at_upper & ~self.is_basic, self.upper, 0.0)
        x[self.basis] = self.xB
        return x


def _solve_highs(lp: LinearProgram) -> LPResult:
    bounds = [(lo, None if np.isinf(hi) else hi) for lo, hi in zip(lp.lower, lp.upper)]
    result = linprog(
        -lp.c,
        A_ub=lp.A_ub, b_ub=lp.b_ub,
        A_eq=lp.A_eq, b_eq=lp.b_eq,
        bounds=bounds, method="highs",
    )
    status = {0: LP_OPTIMAL, 1: LP_ITERATION_LIMIT, 2: LP_INFEASIBLE, 3: LP_UNBOUNDED}.get(result.status)
    if status is None:
        raise NumericalError(f"HiGHS falhou: {result.message}")
    if status != LP_OPTIMAL:
        return LPResult(status, iterations=int(getattr(result, "nit", 0)), backend="highs")
    x = np.clip(result.x, lp.lower, lp.upper)
    return LPResult(LP_OPTIMAL, x=x, objective=float(lp.c @ x),
                    iterations=int(getattr(result, "nit", 0)), backend="highs")


def solve_lp(lp: LinearProgram, backend: str = "simplex", **options) -> LPResult:
    """
    Resolve um programa linear

    Args:
        lp: Programa linear (maximização)
        backend: "simplex" (implementação própria) ou "highs" (scipy)
        **options: Parâmetros repassados ao BoundedSimplex

    Returns:
        LPResult com status, ponto ótimo e valor
    """
    if backend == "simplex":
        return BoundedSimplex(**options).solve(lp)
    if backend == "highs":
        return _solve_highs(lp)
    raise ConfigurationError(f"Backend de LP desconhecido: {backend} (use {', '.join(LP_BACKENDS)})")
