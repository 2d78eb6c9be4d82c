"""
Testes para o gerador de redes
"""

import pytest
import numpy as np

from src.netbandit.core.exceptions import ConfigurationError, ContractViolation
from src.netbandit.models.netgen import (
    Graph, LatentSpaceParams, SbmParams, latent_edge_probabilities, protocol_sbm_params,
    sample_latent_space, sample_sbm, treated_neighbor_counts,
)


class TestGraph:
    """Testes para a classe Graph"""

    def test_from_edges_symmetric(self, path_graph: Graph):
        """Testa que a adjacência é simétrica e sem laços"""
        dense = path_graph.to_dense()
        assert np.array_equal(dense, dense.T)
        assert np.all(np.diag(dense) == 0)
        assert path_graph.edge_count == 2

    def test_duplicate_edges_ignored(self):
        """Testa que arestas repetidas contam uma vez"""
        g = Graph.from_edges(3, [(0, 1), (1, 0), (0, 1)])
        assert g.edge_count == 1
        assert g.to_dense().max() == 1

    def test_self_loop_rejected(self):
        """Testa rejeição de laços"""
        with pytest.raises(ContractViolation):
            Graph.from_edges(3, [(1, 1)])

    def test_node_out_of_range(self):
        """Testa rejeição de nó fora do intervalo"""
        with pytest.raises(ContractViolation):
            Graph.from_edges(3, [(0, 3)])

    def test_group_labels_start_at_one(self):
        """Testa rejeição de rótulos fora de {1..k}"""
        with pytest.raises(ContractViolation):
            Graph.from_edges(2, [(0, 1)], groups=[0, 1])

    def test_arrays_are_read_only(self, path_graph: Graph):
        """Testa imutabilidade do grafo"""
        with pytest.raises(ValueError):
            path_graph.groups[0] = 2

    def test_neighbors_and_degrees(self, star_graph: Graph):
        """Testa consultas de vizinhança"""
        assert list(star_graph.neighbors(0)) == [1, 2, 3, 4, 5]
        assert list(star_graph.degrees) == [5, 1, 1, 1, 1, 1]
        assert star_graph.group_count == 2
        assert star_graph.edges().shape == (5, 2)


class TestTreatedNeighborCounts:
    """Testes para a contagem de vizinhos tratados"""

    def test_all_zero(self, k4_graph: Graph):
        """Testa que sem tratamento as contagens são zero"""
        assert list(treated_neighbor_counts(k4_graph, np.zeros(4, dtype=int))) == [0, 0, 0, 0]

    def test_path_example(self, path_graph: Graph):
        """Testa o caminho 1–2–3 com z=(1,0,1)"""
        counts = treated_neighbor_counts(path_graph, np.array([1, 0, 1]))
        assert list(counts) == [0, 2, 0]

    def test_k4_example(self, k4_graph: Graph):
        """Testa K4 com z=(1,1,0,0): o próprio tratamento não conta"""
        counts = treated_neighbor_counts(k4_graph, np.array([1, 1, 0, 0]))
        assert list(counts) == [1, 1, 2, 2]

    def test_length_mismatch(self, path_graph: Graph):
        """Testa erro de comprimento"""
        with pytest.raises(ContractViolation):
            treated_neighbor_counts(path_graph, np.array([1, 0]))


class TestSbm:
    """Testes para o stochastic block model"""

    def test_complete_graph(self, rng):
        """Testa que W=[[1]] produz K4"""
        params = SbmParams(k=1, p=(1.0,), W=((1.0,),))
        g = sample_sbm(params, 4, rng)
        assert g.edge_count == 6
        assert list(g.groups) == [1, 1, 1, 1]

    def test_empty_graph(self, rng):
        """Testa que W=[[0]] produz grafo vazio"""
        params = SbmParams(k=1, p=(1.0,), W=((0.0,),))
        assert sample_sbm(params, 10, rng).edge_count == 0

    def test_deterministic_given_seed(self):
        """Testa reprodutibilidade pela semente"""
        params = protocol_sbm_params(40)
        a = sample_sbm(params, 40, np.random.default_rng(3))
        b = sample_sbm(params, 40, np.random.default_rng(3))
        assert np.array_equal(a.indices, b.indices)
        assert np.array_equal(a.groups, b.groups)

    def test_invalid_membership(self, rng):
        """Testa p que não soma 1"""
        params = SbmParams(k=2, p=(0.3, 0.3), W=((0.1, 0.1), (0.1, 0.1)))
        with pytest.raises(ConfigurationError) as exc_info:
            sample_sbm(params, 5, rng)
        assert exc_info.value.problems

    def test_asymmetric_edge_matrix(self):
        """Testa W não simétrica"""
        params = SbmParams(k=2, p=(0.5, 0.5), W=((0.1, 0.2), (0.3, 0.1)))
        with pytest.raises(ConfigurationError):
            params.validate()

    def test_protocol_params(self):
        """Testa o SBM do protocolo: k=ceil(n/10), 0.3 dentro, 1/n entre grupos"""
        params = protocol_sbm_params(100)
        assert params.k == 10
        assert params.edge_matrix[0, 0] == pytest.approx(0.3)
        assert params.edge_matrix[0, 1] == pytest.approx(0.01)
        assert params.membership.sum() == pytest.approx(1.0)

    def test_mean_degree(self):
        """Testa o grau médio (n-1)·pᵀWp ≈ 3.861 no protocolo com n=100"""
        params = protocol_sbm_params(100)
        expected = params.expected_degree(100)
        assert expected == pytest.approx(3.861)
        degrees = [sample_sbm(params, 100, np.random.default_rng(seed)).mean_degree()
                   for seed in range(200)]
        assert np.mean(degrees) == pytest.approx(expected, abs=0.2)

    def test_edge_density_converges(self):
        """Testa densidade empírica com k=1 próxima de q"""
        q = 0.2
        params = SbmParams(k=1, p=(1.0,), W=((q,),))
        densities = [sample_sbm(params, 30, np.random.default_rng(seed)).density()
                     for seed in range(50)]
        assert np.mean(densities) == pytest.approx(q, abs=0.015)

    def test_symmetry_and_diagonal(self):
        """Testa simetria e diagonal nula em grafos amostrados"""
        params = protocol_sbm_params(60)
        for seed in range(5):
            dense = sample_sbm(params, 60, np.random.default_rng(seed)).to_dense()
            assert np.array_equal(dense, dense.T)
            assert not np.any(np.diag(dense))


class TestLatentSpace:
    """Testes para o modelo de espaço latente"""

    def test_very_negative_intercept(self, rng):
        """Testa α = −50 com escalas zero: grafo vazio"""
        params = LatentSpaceParams(alpha=-50.0, u_scale=0.0)
        assert sample_latent_space(params, 30, rng).edge_count == 0

    def test_zero_intercept_probability(self):
        """Testa α = 0 com escalas zero: probabilidade exatamente 0.5"""
        params = LatentSpaceParams(alpha=0.0, u_scale=0.0)
        probs = latent_edge_probabilities(params, np.zeros((2, 2)), np.zeros(2), np.zeros(2))
        assert probs.shape == (1,)
        assert probs[0] == 0.5

    def test_single_group_default(self, rng):
        """Testa rótulo único quando nenhum grupo é fornecido"""
        g = sample_latent_space(LatentSpaceParams(), 20, rng)
        assert set(g.groups.tolist()) == {1}

    def test_density_matches_monte_carlo(self):
        """Testa densidade empírica contra estimativa de Monte Carlo por pares"""
        params = LatentSpaceParams(alpha=-2.0, latent_dim=2, u_scale=1.0)
        mc_rng = np.random.default_rng(99)
        u = mc_rng.normal(size=(200_000, 2))
        v = mc_rng.normal(size=(200_000, 2))
        reference = np.mean(1.0 / (1.0 + np.exp(-(params.alpha + np.einsum("ij,ij->i", u, v)))))

        densities = [sample_latent_space(params, 200, np.random.default_rng(seed)).density()
                     for seed in range(5)]
        assert np.mean(densities) == pytest.approx(reference, rel=0.2)

    def test_invalid_params(self, rng):
        """Testa validação de escalas negativas"""
        with pytest.raises(ConfigurationError):
            sample_latent_space(LatentSpaceParams(u_scale=-1.0), 5, rng)

    def test_group_length_mismatch(self, rng):
        """Testa rótulos com tamanho errado"""
        with pytest.raises(ContractViolation):
            sample_latent_space(LatentSpaceParams(), 5, rng, groups=[1, 1])
