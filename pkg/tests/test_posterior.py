"""
Testes para a posterior gaussiana conjugada
"""

import pytest
import numpy as np

from src.netbandit.core.exceptions import ConfigurationError, ContractViolation, DataError, NumericalError
from src.netbandit.models.design import build_design
from src.netbandit.models.netgen import Graph
from src.netbandit.models.posterior import (
    cholesky_with_jitter, init_prior, map_estimate, point_mass, sample, update, update_collapsed,
)


def _random_rounds(rng, rounds: int, n: int, dimension: int):
    for _ in range(rounds):
        X = rng.integers(0, 2, size=(n, dimension)).astype(float)
        yield X, X @ np.arange(1, dimension + 1) + rng.normal(size=n)


class TestInitPrior:
    """Testes para a priori"""

    def test_standard_normal(self):
        """Testa D=3, média 0, λ=1: N(0, I)"""
        s = init_prior(3, 0.0, 1.0)
        assert np.array_equal(s.mean, np.zeros(3))
        assert np.allclose(s.covariance, np.eye(3))
        assert s.rounds_seen == 0

    def test_protocol_prior(self):
        """Testa média 1 e λ=0.1: covariância 10·I"""
        s = init_prior(5, 1.0, 0.1)
        assert np.allclose(s.covariance, 10.0 * np.eye(5))
        assert list(map_estimate(s)) == [1.0] * 5

    def test_vector_mean(self):
        """Testa média vetorial"""
        s = init_prior(3, [1.0, 2.0, 3.0], 1.0)
        assert list(s.mean) == [1.0, 2.0, 3.0]

    def test_explicit_covariance(self):
        """Testa Σ_0 explícita sobrepondo (1/λ) I"""
        cov = np.array([[2.0, 0.5], [0.5, 1.0]])
        s = init_prior(2, 0.0, 1.0, prior_cov=cov)
        assert np.allclose(s.covariance, cov)
        assert np.allclose(s.precision @ cov, np.eye(2))

    @pytest.mark.parametrize("lam", [0.0, -1.0])
    def test_invalid_lambda(self, lam):
        """Testa λ ≤ 0"""
        with pytest.raises(ConfigurationError):
            init_prior(3, 0.0, lam)

    def test_invalid_dimension(self):
        """Testa D < 1"""
        with pytest.raises(ConfigurationError):
            init_prior(0, 0.0, 1.0)


class TestUpdate:
    """Testes para a atualização conjugada"""

    def test_zero_design_keeps_prior(self):
        """Testa que X nulo não altera a posterior"""
        s = init_prior(3, 1.0, 0.1)
        s2 = update(s, np.zeros((4, 3)), np.array([1.0, 2.0, 3.0, 4.0]))
        assert np.allclose(s2.mean, s.mean)
        assert np.allclose(s2.covariance, s.covariance)
        assert s2.rounds_seen == 1

    def test_scalar_example(self):
        """Testa D=1, N(0,1), x=1, r=2: posterior N(1, 1/2)"""
        s = update(init_prior(1, 0.0, 1.0), np.array([[1.0]]), np.array([2.0]))
        assert map_estimate(s)[0] == pytest.approx(1.0)
        assert s.covariance[0, 0] == pytest.approx(0.5)

    def test_input_unmodified(self):
        """Testa que o estado de entrada não muda"""
        s = init_prior(2, 0.0, 1.0)
        update(s, np.eye(2), np.array([1.0, 1.0]))
        assert np.array_equal(s.mean, np.zeros(2))
        assert s.rounds_seen == 0

    def test_batch_equivalence(self, rng):
        """Testa que uma atualização empilhada iguala duas sequenciais"""
        X1, r1 = next(_random_rounds(rng, 1, 10, 4))
        X2, r2 = next(_random_rounds(rng, 1, 10, 4))
        s = init_prior(4, 1.0, 0.1)
        sequential = update(update(s, X1, r1), X2, r2)
        stacked = update(s, np.vstack([X1, X2]), np.concatenate([r1, r2]))
        assert np.allclose(sequential.mean, stacked.mean, atol=1e-8)
        assert np.allclose(sequential.covariance, stacked.covariance, atol=1e-8)

    def test_ridge_equivalence(self, rng):
        """Testa média posterior = solução ridge com média a priori zero"""
        lam, noise_var, D = 0.1, 2.0, 6
        s = init_prior(D, 0.0, lam, obs_noise_var=noise_var)
        gram = np.zeros((D, D))
        moment = np.zeros(D)
        for X, r in _random_rounds(rng, 20, 50, D):
            s = update(s, X, r)
            gram += X.T @ X
            moment += X.T @ r
        ridge = np.linalg.solve(gram + lam * noise_var * np.eye(D), moment)
        assert np.allclose(map_estimate(s), ridge, atol=1e-8)

    def test_monotone_information(self, rng):
        """Testa Σ_t − Σ_{t+1} semidefinida positiva"""
        s = init_prior(5, 0.0, 0.1)
        for X, r in _random_rounds(rng, 10, 8, 5):
            s_next = update(s, X, r)
            eigenvalues = np.linalg.eigvalsh(s.covariance - s_next.covariance)
            assert eigenvalues.min() >= -1e-10
            s = s_next

    def test_covariance_symmetric(self, rng):
        """Testa simetria da covariância após muitas atualizações"""
        s = init_prior(4, 0.0, 0.1)
        for X, r in _random_rounds(rng, 50, 20, 4):
            s = update(s, X, r)
        assert np.abs(s.covariance - s.covariance.T).max() <= 1e-10

    def test_non_finite_rewards(self):
        """Testa erro de dados com recompensa não finita"""
        with pytest.raises(DataError):
            update(init_prior(2, 0.0, 1.0), np.eye(2), np.array([1.0, np.inf]))

    def test_shape_mismatch(self):
        """Testa número de linhas diferente do número de recompensas"""
        with pytest.raises(ContractViolation):
            update(init_prior(2, 0.0, 1.0), np.eye(2), np.array([1.0]))

    def test_accepts_design_matrix(self, path_graph: Graph):
        """Testa atualização direta com DesignMatrix"""
        X = build_design(path_graph, np.array([1, 0, 1]), 2, 2)
        s = update(init_prior(5, 0.0, 1.0), X, np.array([2.0, 3.0, 2.0]))
        assert s.rounds_seen == 1


class TestCollapsedUpdate:
    """Testes para a atualização agregada por rodada"""

    def test_single_observation_precision(self, star_graph: Graph):
        """Testa incremento de precisão x xᵀ / (nσ²)"""
        z = np.array([1, 0, 1, 0, 0, 1])
        X = build_design(star_graph, z, 2, 3)
        s = init_prior(X.dimension, 0.0, 1.0)
        collapsed = update_collapsed(s, X, np.ones(6))
        x = X.values.sum(axis=0)
        assert np.allclose(collapsed.precision - s.precision, np.outer(x, x) / 6.0)

    def test_less_information_than_full(self, rng, star_graph: Graph):
        """Testa que a posterior agregada é mais larga (ordem PSD)"""
        full = collapsed = init_prior(6, 1.0, 0.1)
        for _ in range(15):
            z = rng.integers(0, 2, size=6)
            X = build_design(star_graph, z, 2, 3)
            r = rng.normal(size=6)
            full = update(full, X, r)
            collapsed = update_collapsed(collapsed, X, r)
        assert np.linalg.eigvalsh(collapsed.covariance - full.covariance).min() >= -1e-10


class TestSample:
    """Testes para o sorteio da posterior"""

    def test_deterministic(self):
        """Testa reprodutibilidade pela semente"""
        s = init_prior(3, 1.0, 0.1)
        a = sample(s, np.random.default_rng(5))
        b = sample(s, np.random.default_rng(5))
        assert np.array_equal(a, b)

    def test_identity_moments(self, rng):
        """Testa covariância empírica próxima da identidade"""
        s = init_prior(2, 0.0, 1.0)
        draws = np.array([sample(s, rng) for _ in range(20_000)])
        assert np.allclose(np.cov(draws.T), np.eye(2), atol=0.03)
        se = 1.0 / np.sqrt(len(draws))
        assert np.all(np.abs(draws.mean(axis=0)) < 3 * se + 1e-3)

    def test_point_mass(self):
        """Testa concentração no θ da massa pontual"""
        theta = np.array([2.0, -1.0, 0.5])
        s = point_mass(theta)
        draw = sample(s, np.random.default_rng(0))
        assert np.allclose(draw, theta, atol=1e-4)
        assert np.all(s.marginal_sd() <= 1e-5)


class TestCholeskyJitter:
    """Testes para a política de jitter"""

    def test_semidefinite_recovers(self):
        """Testa matriz semidefinida fatorada com jitter"""
        factor = cholesky_with_jitter(np.zeros((2, 2)))
        assert factor.shape == (2, 2)

    def test_indefinite_fails(self):
        """Testa erro numérico após o jitter máximo"""
        with pytest.raises(NumericalError):
            cholesky_with_jitter(-np.eye(2))
