"""
Crença gaussiana sobre θ com conjugação normal-normal.

O estado guarda acumuladores na forma de precisão (Σ⁻¹ e Σ⁻¹μ); média e
covariância são derivadas por fatoração de Cholesky a cada atualização, sem
inversões encadeadas. Estados são imutáveis: update devolve um novo estado.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy import linalg

from ..core.exceptions import ConfigurationError, ContractViolation, DataError, NumericalError
from .design import DesignMatrix, collapse_to_sum

logger = logging.getLogger(__name__)

JITTER_START = 1e-10
JITTER_MAX = 1e-6


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.T) / 2.0


def cholesky_with_jitter(matrix: np.ndarray, what: str = "matriz") -> np.ndarray:
    """
    Fator de Cholesky inferior, somando jitter diagonal se necessário

    Args:
        matrix: Matriz simétrica supostamente positiva definida
        what: Nome usado nas mensagens de erro

    Returns:
        L com L Lᵀ = matrix (+ jitter·I)

    Raises:
        NumericalError: se a fatoração falhar mesmo com jitter 1e-6
    """
    try:
        return linalg.cholesky(matrix, lower=True)
    except linalg.LinAlgError:
        pass

    identity = np.eye(matrix.shape[0])
    jitter = JITTER_START
    while jitter <= JITTER_MAX * (1 + 1e-9):
        try:
            factor = linalg.cholesky(matrix + jitter * identity, lower=True)
            logger.debug(f"Cholesky de {what} exigiu jitter {jitter:.0e}")
            return factor
        except linalg.LinAlgError:
            jitter *= 10.0
    raise NumericalError(f"Falha na fatoração de Cholesky de {what} após jitter {JITTER_MAX:.0e}")


@dataclass(frozen=True, eq=False)
class PosteriorState:
    """Posterior N(mean, covariance) com acumuladores de precisão"""
    mean: np.ndarray
    covariance: np.ndarray
    precision: np.ndarray
    shift: np.ndarray
    obs_noise_var: float = 1.0
    rounds_seen: int = 0

    @property
    def dimension(self) -> int:
        return len(self.mean)

    def marginal_sd(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))

    def __repr__(self) -> str:
        return f"PosteriorState(D={self.dimension}, rounds_seen={self.rounds_seen})"


def _from_precision(precision: np.ndarray, shift: np.ndarray,
                    obs_noise_var: float, rounds_seen: int) -> PosteriorState:
    factor = cholesky_with_jitter(precision, "precisão posterior")
    mean = linalg.cho_solve((factor, True), shift)
    covariance = _symmetrize(linalg.cho_solve((factor, True), np.eye(len(shift))))
    return PosteriorState(
        mean=_readonly(mean),
        covariance=_readonly(covariance),
        precision=_readonly(precision),
        shift=_readonly(shift),
        obs_noise_var=obs_noise_var,
        rounds_seen=rounds_seen,
    )


def init_prior(dimension: int,
               prior_mean: Union[float, Sequence[float]],
               lam: float,
               obs_noise_var: float = 1.0,
               prior_cov: Optional[np.ndarray] = None) -> PosteriorState:
    """
    Cria a priori N(prior_mean, (1/λ) I) ou N(prior_mean, prior_cov)

    Args:
        dimension: Dimensão D de θ
        prior_mean: Escalar (replicado) ou vetor de comprimento D
        lam: Escala de precisão λ (peso de penalização tipo ridge)
        obs_noise_var: Variância σ² do ruído de observação
        prior_cov: Covariância explícita que substitui (1/λ) I

    Returns:
        Estado inicial com rounds_seen = 0
    """
    if dimension < 1:
        raise ConfigurationError(f"Dimensão deve ser >= 1 (recebido {dimension})")
    if not lam > 0:
        raise ConfigurationError(f"lambda deve ser > 0 (recebido {lam})")
    if not obs_noise_var > 0:
        raise ConfigurationError(f"obs_noise_var deve ser > 0 (recebido {obs_noise_var})")

    mean = np.broadcast_to(np.asarray(prior_mean, dtype=float), (dimension,)).copy()
    if prior_cov is None:
        covariance = np.eye(dimension) / lam
        precision = np.eye(dimension) * lam
    else:
        covariance = _symmetrize(np.asarray(prior_cov, dtype=float))
        if covariance.shape != (dimension, dimension):
            raise ConfigurationError(
                f"prior_cov deve ser {dimension}x{dimension} (recebido {covariance.shape})"
            )
        factor = cholesky_with_jitter(covariance, "covariância a priori")
        precision = _symmetrize(linalg.cho_solve((factor, True), np.eye(dimension)))

    return PosteriorState(
        mean=_readonly(mean),
        covariance=_readonly(covariance),
        precision=_readonly(precision),
        shift=_readonly(precision @ mean),
        obs_noise_var=float(obs_noise_var),
        rounds_seen=0,
    )


def _as_rows(X: Union[DesignMatrix, np.ndarray]) -> np.ndarray:
    return X.values if isinstance(X, DesignMatrix) else np.atleast_2d(np.asarray(X, dtype=float))


def _accumulate(s: PosteriorState, rows: np.ndarray, r: np.ndarray,
                noise_var: float) -> PosteriorState:
    if rows.shape[1] != s.dimension:
        raise ContractViolation(f"Design com {rows.shape[1]} colunas para posterior de dimensão {s.dimension}")
    if rows.shape[0] != len(r):
        raise ContractViolation(f"Design com {rows.shape[0]} linhas para {len(r)} recompensas")
    if not np.all(np.isfinite(r)):
        raise DataError("Recompensas observadas contêm valores não finitos")

    precision = _symmetrize(s.precision + rows.T @ rows / noise_var)
    shift = s.shift + rows.T @ r / noise_var
    return _from_precision(precision, shift, s.obs_noise_var, s.rounds_seen + 1)


def update(s: PosteriorState, X: Union[DesignMatrix, np.ndarray], r: np.ndarray) -> PosteriorState:
    """
    Atualização conjugada com as n observações de uma rodada

    Args:
        s: Estado atual (não é modificado)
        X: Design da rodada
        r: Recompensas realizadas

    Returns:
        Novo estado com Σ_t = (XᵀX/σ² + Σ_{t-1}⁻¹)⁻¹ e
        μ_t = Σ_t (Xᵀr/σ² + Σ_{t-1}⁻¹ μ_{t-1})
    """
    r = np.asarray(r, dtype=float).reshape(-1)
    return _accumulate(s, _as_rows(X), r, s.obs_noise_var)


def update_collapsed(s: PosteriorState, X: DesignMatrix, r: np.ndarray) -> PosteriorState:
    """
    Atualização com uma única observação agregada (soma das linhas, soma das recompensas)

    A soma de n ruídos independentes tem variância nσ².
    """
    r = np.asarray(r, dtype=float).reshape(-1)
    if X.n != len(r):
        raise ContractViolation(f"Design com {X.n} linhas para {len(r)} recompensas")
    if not np.all(np.isfinite(r)):
        raise DataError("Recompensas observadas contêm valores não finitos")
    row = collapse_to_sum(X).reshape(1, -1)
    total = np.array([r.sum()])
    return _accumulate(s, row, total, X.n * s.obs_noise_var)


def sample(s: PosteriorState, rng: np.random.Generator) -> np.ndarray:
    """Sorteia θ ~ N(mean, covariance) via fator de Cholesky da covariância"""
    factor = cholesky_with_jitter(s.covariance, "covariância posterior")
    return s.mean + factor @ rng.standard_normal(s.dimension)


def map_estimate(s: PosteriorState) -> np.ndarray:
    """Média posterior (estimativa MAP para a gaussiana)"""
    return np.array(s.mean, copy=True)


def point_mass(theta: Sequence[float], obs_noise_var: float = 1.0,
               spread: float = 1e-12) -> PosteriorState:
    """Posterior degenerada concentrada em θ (covariância spread·I)"""
    theta = np.asarray(theta, dtype=float)
    return init_prior(len(theta), theta, 1.0 / spread, obs_noise_var=obs_noise_var)
