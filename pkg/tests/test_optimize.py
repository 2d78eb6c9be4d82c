"""
Testes para o otimizador com orçamento
"""

import pytest
import numpy as np

from src.netbandit.core.exceptions import ConfigurationError, ContractViolation, SolverRefusal
from src.netbandit.models.design import build_design
from src.netbandit.models.netgen import Graph, protocol_sbm_params, sample_sbm
from src.netbandit.models.reward import MisspecTheta, ThetaGenSpec, sample_theta
from src.netbandit.optimize import (
    BudgetedProblem, LinearProgram, MisspecifiedProblem, STATUS_EXACT, STATUS_HEURISTIC,
    STATUS_TRIVIAL, Solution, SolverSettings, dump_encoding, encode, enumerate_feasible,
    solve, solve_bnb, solve_bruteforce, solve_local_search, solve_lp,
)


def _instances(make_instance, seed: int, count: int, max_n: int = 12):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        graph, theta = make_instance(rng, n, k=2, cutoff=int(rng.integers(0, 4)))
        budget = int(rng.integers(0, n + 1))
        yield BudgetedProblem(graph, theta, 2, budget)


class TestObjective:
    """Testes para o objetivo do problema"""

    def test_path_example(self, path_graph: Graph):
        """Testa θ=(μ=(2,0), γ=(0,1,3)) e z=(1,0,1): objetivo 7"""
        problem = BudgetedProblem(path_graph, [2.0, 0.0, 0.0, 1.0, 3.0], k=2)
        assert problem.objective(np.array([1, 0, 1])) == 7.0

    def test_untreated(self, star_graph: Graph):
        """Testa z=0: n·γ(0)"""
        problem = BudgetedProblem(star_graph, [1.0, 1.0, 0.5, 2.0], k=2, budget=2)
        assert problem.objective(np.zeros(6, dtype=int)) == pytest.approx(3.0)

    def test_with_budget(self, star_graph: Graph):
        """Testa cópia com outro orçamento e o mesmo θ"""
        problem = BudgetedProblem(star_graph, [1.0, 1.0, 0.5, 2.0], k=2, budget=2)
        unlimited = problem.with_budget(None)
        assert unlimited.effective_budget == 6
        assert np.array_equal(unlimited.theta, problem.theta)
        assert problem.effective_budget == 2

    def test_matches_design(self, rng, make_instance):
        """Testa objetivo = 1ᵀ(X θ)"""
        for _ in range(50):
            graph, theta = make_instance(rng, int(rng.integers(1, 15)), k=2, cutoff=3)
            problem = BudgetedProblem(graph, theta, 2)
            z = rng.integers(0, 2, size=graph.n)
            X = build_design(graph, z, 2, 3)
            assert problem.objective(z) == pytest.approx(X.predict(theta).sum(), abs=1e-9)

    def test_evaluate_many(self, rng, make_instance):
        """Testa avaliação em lote contra avaliação individual"""
        graph, theta = make_instance(rng, 9)
        problem = BudgetedProblem(graph, theta, 2)
        Z = rng.integers(0, 2, size=(30, 9))
        assert np.allclose(problem.evaluate_many(Z), [problem.objective(z) for z in Z])

    def test_theta_not_aliased(self, path_graph: Graph):
        """Testa que o problema copia θ"""
        theta = np.array([2.0, 0.0, 0.0, 1.0, 3.0])
        problem = BudgetedProblem(path_graph, theta, k=2)
        theta[0] = 100.0
        assert problem.mu[0] == 2.0

    def test_inconsistent_labels(self, path_graph: Graph):
        """Testa θ com k menor que os rótulos do grafo"""
        with pytest.raises(ContractViolation):
            BudgetedProblem(path_graph, [1.0, 0.0, 1.0], k=1)


class TestSolution:
    """Testes para a construção de soluções"""

    def test_budget_violation(self, path_graph: Graph):
        """Testa rejeição de solução acima do orçamento"""
        problem = BudgetedProblem(path_graph, [2.0, 0.0, 0.0, 1.0, 3.0], k=2, budget=1)
        with pytest.raises(ContractViolation):
            Solution.create(problem, np.array([1, 0, 1]), STATUS_EXACT)

    def test_objective_recomputed(self, path_graph: Graph):
        """Testa rejeição de objetivo informado incorreto"""
        problem = BudgetedProblem(path_graph, [2.0, 0.0, 0.0, 1.0, 3.0], k=2)
        with pytest.raises(ContractViolation):
            Solution.create(problem, np.array([1, 0, 1]), STATUS_EXACT, objective=6.0)
        solution = Solution.create(problem, np.array([1, 0, 1]), STATUS_EXACT, objective=7.0)
        assert solution.treated == 2
        assert solution.is_exact


class TestBruteforce:
    """Testes para a solução por enumeração"""

    def test_zero_budget(self, star_graph: Graph):
        """Testa B=0: vetor nulo com status trivial"""
        problem = BudgetedProblem(star_graph, [5.0, 5.0, 1.0, 2.0], k=2, budget=0)
        solution = solve_bruteforce(problem)
        assert solution.treated == 0
        assert solution.objective == pytest.approx(6.0)
        assert solution.status == STATUS_TRIVIAL

    def test_single_node(self):
        """Testa nó único com μ=5, γ=(0), B=1"""
        problem = BudgetedProblem(Graph.from_edges(1, []), [5.0, 0.0], k=1, budget=1)
        solution = solve_bruteforce(problem)
        assert list(solution.z) == [1]
        assert solution.objective == 5.0

    def test_dominates_enumeration(self, make_instance):
        """Testa objetivo ≥ de todo z viável enumerado"""
        for problem in _instances(make_instance, 11, 100, max_n=10):
            solution = solve_bruteforce(problem)
            best = max(problem.evaluate_many(Z).max()
                       for Z in enumerate_feasible(problem.n, problem.effective_budget))
            assert solution.objective >= best - 1e-9

    def test_lexicographic_tie_break(self, k4_graph: Graph):
        """Testa que empates escolhem o menor z lexicográfico"""
        problem = BudgetedProblem(k4_graph, [0.0, 1.0, 1.0], k=1, budget=2)
        assert list(solve_bruteforce(problem).z) == [0, 0, 0, 0]

    def test_refuses_large_n(self, rng):
        """Testa recusa acima do limite de enumeração"""
        graph = sample_sbm(protocol_sbm_params(30), 30, rng)
        problem = BudgetedProblem(graph, np.ones(3 + 4), k=3, budget=5)
        with pytest.raises(SolverRefusal) as exc_info:
            solve_bruteforce(problem)
        assert "bnb" in str(exc_info.value)


class TestBranchAndBound:
    """Testes para o branch-and-bound"""

    def test_matches_bruteforce(self, make_instance):
        """Testa igualdade de objetivo com a força bruta (gap zero)"""
        for problem in _instances(make_instance, 21, 40):
            exact = solve_bruteforce(problem)
            solution = solve_bnb(problem, gap_tolerance=0.0, rng=np.random.default_rng(0))
            assert solution.objective == pytest.approx(exact.objective, abs=1e-9)
            assert solution.is_exact
            assert np.array_equal(solution.z, exact.z)

    @pytest.mark.parametrize("gamma", [[0.0, 0.0, 0.0, 0.0], [0.0, 0.5, 0.5, 0.5], [1.0, 1.0, -1.0, -1.0]])
    def test_ties_pick_lexicographic_smallest(self, make_instance, gamma):
        """Testa empates (μ repetido, γ constante por trechos): mesmo z da força bruta"""
        rng = np.random.default_rng(31)
        for _ in range(15):
            n = int(rng.integers(2, 10))
            graph, _ = make_instance(rng, n, k=2, cutoff=3)
            budget = int(rng.integers(0, n + 1))
            problem = BudgetedProblem(graph, [1.0, 1.0] + gamma, 2, budget)
            exact = solve_bruteforce(problem)
            solution = solve_bnb(problem, gap_tolerance=0.0, rng=np.random.default_rng(0))
            assert solution.is_exact
            assert np.array_equal(solution.z, exact.z)

    def test_all_equal_treats_last_nodes(self, path_graph: Graph):
        """Testa γ ≡ 0 e μ iguais: o menor z lexicográfico trata os últimos nós"""
        problem = BudgetedProblem(path_graph, [1.0, 1.0, 0.0, 0.0, 0.0], k=2, budget=1)
        solution = solve_bnb(problem, gap_tolerance=0.0, rng=np.random.default_rng(5))
        assert list(solution.z) == [0, 0, 1]

    def test_gap_stop_is_not_exact(self, make_instance):
        """Testa parada pelo gap_tolerance marcada heuristic; exact só com cota fechada"""
        for problem in _instances(make_instance, 24, 40):
            exact = solve_bruteforce(problem)
            solution = solve_bnb(problem, gap_tolerance=10.0, rng=np.random.default_rng(0))
            assert solution.objective <= exact.objective + 1e-9
            if solution.is_exact:
                assert solution.objective == pytest.approx(exact.objective, abs=1e-9)
            else:
                assert solution.status == STATUS_HEURISTIC
                assert solution.bound >= solution.objective - 1e-9

    @pytest.mark.slow
    def test_matches_bruteforce_full(self, make_instance):
        """Testa 200 instâncias com γ de sinais mistos e orçamentos 0..n"""
        mismatches = 0
        for problem in _instances(make_instance, 22, 200):
            exact = solve_bruteforce(problem)
            solution = solve_bnb(problem, gap_tolerance=0.0, rng=np.random.default_rng(0))
            mismatches += abs(solution.objective - exact.objective) > 1e-9
        assert mismatches == 0

    def test_highs_backend(self, make_instance):
        """Testa o backend HiGHS nas mesmas instâncias"""
        for problem in _instances(make_instance, 23, 10):
            exact = solve_bruteforce(problem)
            solution = solve_bnb(problem, gap_tolerance=0.0, lp_backend="highs",
                                 rng=np.random.default_rng(0))
            assert solution.objective == pytest.approx(exact.objective, abs=1e-9)

    def test_monotone_gamma_treats_everyone(self, star_graph: Graph):
        """Testa μ > 0, γ crescente e B=n: tratar todos"""
        problem = BudgetedProblem(star_graph, [1.0, 2.0, 0.0, 1.0, 2.0, 3.0], k=2, budget=None)
        solution = solve_bnb(problem, gap_tolerance=0.0)
        assert list(solution.z) == [1] * 6

    def test_cell_limit_falls_back(self, rng):
        """Testa retorno heurístico quando o tableau excede o limite"""
        graph = sample_sbm(protocol_sbm_params(30), 30, rng)
        theta = sample_theta(ThetaGenSpec(k=3, cutoff=3), rng).as_vector()
        problem = BudgetedProblem(graph, theta, k=3, budget=6)
        solution = solve_bnb(problem, max_lp_cells=10, rng=rng)
        assert solution.status == STATUS_HEURISTIC
        assert solution.treated <= 6

    def test_rejects_misspecified(self, path_graph: Graph):
        """Testa que bnb exige o modelo aditivo"""
        mtheta = MisspecTheta(mu=[1.0, 1.0], gamma0=[0.0, 1.0], gamma1=[0.0, 0.5])
        with pytest.raises(ContractViolation):
            solve_bnb(MisspecifiedProblem(path_graph, mtheta, budget=1))


class TestLocalSearch:
    """Testes para a busca local"""

    def test_zero_budget(self, star_graph: Graph):
        """Testa B=0: vetor nulo"""
        problem = BudgetedProblem(star_graph, [5.0, 5.0, 1.0, 2.0], k=2, budget=0)
        assert solve_local_search(problem, rng=np.random.default_rng(0)).treated == 0

    def test_close_to_bruteforce(self, make_instance):
        """Testa ≥ 95% de acertos e nunca acima do ótimo"""
        matches = total = 0
        for problem in _instances(make_instance, 31, 200):
            exact = solve_bruteforce(problem)
            heuristic = solve_local_search(problem, restarts=20, rng=np.random.default_rng(1))
            assert heuristic.objective <= exact.objective + 1e-9
            assert heuristic.status in (STATUS_HEURISTIC, STATUS_TRIVIAL)
            matches += abs(heuristic.objective - exact.objective) <= 1e-9
            total += 1
        assert matches / total >= 0.95

    def test_incremental_values(self, make_instance, rng):
        """Testa que o valor incremental bate com o recalculado após cada movimento"""
        graph, theta = make_instance(rng, 12, k=2, cutoff=2)
        problem = BudgetedProblem(graph, theta, 2, budget=5)
        checked = []

        def callback(z, value):
            assert problem.objective(z) == pytest.approx(value, abs=1e-9)
            assert z.sum() <= 5
            checked.append(value)

        solve_local_search(problem, restarts=5, rng=rng, callback=callback)
        assert checked

    def test_parallel_restarts_deterministic(self, rng):
        """Testa mesmo resultado com reinícios em threads"""
        graph = sample_sbm(protocol_sbm_params(60), 60, rng)
        theta = sample_theta(ThetaGenSpec(k=6, cutoff=5), rng).as_vector()
        problem = BudgetedProblem(graph, theta, 6, budget=12)
        a = solve_local_search(problem, restarts=8, rng=np.random.default_rng(4))
        b = solve_local_search(problem, restarts=8, rng=np.random.default_rng(4), jobs=4)
        assert np.array_equal(a.z, b.z)

    def test_misspecified_problem(self, make_instance, rng):
        """Testa busca local e força bruta no modelo não aditivo"""
        graph, theta = make_instance(rng, 9, k=2, cutoff=2)
        mtheta = MisspecTheta(mu=theta[:2], gamma0=theta[2:], gamma1=theta[2:] * 0.5)
        problem = MisspecifiedProblem(graph, mtheta, budget=4)
        exact = solve_bruteforce(problem)
        heuristic = solve_local_search(problem, restarts=20, rng=rng)
        assert heuristic.objective <= exact.objective + 1e-9


class TestEncoding:
    """Testes para a codificação linear inteira"""

    def test_round_trip(self, make_instance, rng):
        """Testa que todo z viável vira um ponto inteiro viável com o mesmo objetivo"""
        for _ in range(20):
            graph, theta = make_instance(rng, int(rng.integers(2, 12)), k=2, cutoff=2)
            problem = BudgetedProblem(graph, theta, 2, budget=int(rng.integers(0, graph.n + 1)))
            encoding = encode(problem)
            for _ in range(10):
                z = np.zeros(graph.n, dtype=int)
                size = int(rng.integers(0, problem.effective_budget + 1))
                z[rng.choice(graph.n, size=size, replace=False)] = 1
                x = encoding.point_from_z(z)
                assert encoding.is_feasible(x)
                assert encoding.is_integral(x)
                assert encoding.objective(x) == pytest.approx(problem.objective(z), abs=1e-9)

    def test_dump(self, temp_dir, path_graph: Graph):
        """Testa o formato texto: objetivo, uma restrição por linha, limites e binárias"""
        problem = BudgetedProblem(path_graph, [2.0, 0.0, 0.0, 1.0, 3.0], k=2, budget=1)
        path = dump_encoding(problem, temp_dir / "encoding.txt")
        lines = path.read_text(encoding="utf-8").splitlines()
        encoding = encode(problem)
        constraint_lines = [line for line in lines if line.startswith("c")]
        rows = encoding.lp.A_ub.shape[0] + encoding.lp.A_eq.shape[0]
        assert lines[1].startswith("maximize: ")
        assert len(constraint_lines) == rows
        assert sum(line.startswith("bounds: ") for line in lines) == encoding.num_vars
        assert lines[-1].startswith("binary: z_0")

    def test_variable_layout(self, path_graph: Graph):
        """Testa a posição e o nome de cada família de variáveis"""
        encoding = encode(BudgetedProblem(path_graph, [2.0, 0.0, 0.0, 1.0, 3.0], k=2, budget=1))
        assert encoding.variable_name(encoding.z_index(2)) == "z_2"
        assert encoding.variable_name(encoding.y_index(1, 2)) == "y_1_2"
        assert encoding.variable_name(encoding.s_index(0)) == "s_0"
        assert encoding.variable_name(encoding.w_index(2)) == "w_2"
        assert encoding.w_index(2) == encoding.num_vars - 1

    def test_rejects_misspecified(self, path_graph: Graph):
        """Testa que a codificação exige o modelo aditivo"""
        mtheta = MisspecTheta(mu=[1.0, 1.0], gamma0=[0.0, 1.0], gamma1=[0.0, 0.5])
        with pytest.raises(ContractViolation):
            encode(MisspecifiedProblem(path_graph, mtheta))


class TestSimplex:
    """Testes para o simplex com limites"""

    def test_small_lp(self):
        """Testa max x + y s.a. x + 2y ≤ 4, x ≤ 3"""
        lp = LinearProgram(c=[1.0, 1.0], A_ub=np.array([[1.0, 2.0]]), b_ub=np.array([4.0]),
                           upper=np.array([3.0, np.inf]))
        result = solve_lp(lp)
        assert result.success
        assert result.objective == pytest.approx(3.5)
        assert np.allclose(result.x, [3.0, 0.5])

    def test_matches_highs_on_relaxations(self, make_instance, rng):
        """Testa o valor da relaxação contra o HiGHS"""
        for _ in range(10):
            graph, theta = make_instance(rng, int(rng.integers(3, 12)), k=2, cutoff=2)
            problem = BudgetedProblem(graph, theta, 2, budget=int(rng.integers(1, graph.n + 1)))
            lp = encode(problem).lp
            own = solve_lp(lp, backend="simplex")
            reference = solve_lp(lp, backend="highs")
            assert own.success and reference.success
            assert own.objective == pytest.approx(reference.objective, abs=1e-7)

    def test_unknown_backend(self):
        """Testa backend desconhecido"""
        with pytest.raises(ConfigurationError):
            solve_lp(LinearProgram(c=[1.0]), backend="gurobi")


class TestDispatch:
    """Testes para a seleção do solver"""

    def test_auto_small_uses_bruteforce(self, path_graph: Graph):
        """Testa auto com n pequeno"""
        problem = BudgetedProblem(path_graph, [2.0, 0.0, 0.0, 1.0, 3.0], k=2, budget=2)
        assert solve(problem).solver == "bruteforce"

    def test_auto_large_misspecified_uses_local_search(self, rng):
        """Testa auto com n grande e modelo não aditivo"""
        graph = sample_sbm(protocol_sbm_params(20), 20, rng)
        mtheta = MisspecTheta(mu=[1.0, 2.0], gamma0=[0.0, 1.0], gamma1=[0.0, 0.5])
        problem = MisspecifiedProblem(graph, mtheta, budget=4)
        assert solve(problem, SolverSettings(), rng).solver == "local_search"

    def test_bnb_requires_additive(self, path_graph: Graph):
        """Testa bnb pedido para o modelo não aditivo"""
        mtheta = MisspecTheta(mu=[1.0, 1.0], gamma0=[0.0, 1.0], gamma1=[0.0, 0.5])
        with pytest.raises(ConfigurationError):
            solve(MisspecifiedProblem(path_graph, mtheta), SolverSettings(method="bnb"))

    def test_invalid_settings(self):
        """Testa validação das configurações de solver"""
        with pytest.raises(ConfigurationError) as exc_info:
            SolverSettings(method="gurobi", restarts=0).validate()
        assert len(exc_info.value.problems) == 2

    def test_restart_jobs_same_solution(self, rng):
        """Testa restart_jobs repassado à busca local sem mudar o resultado"""
        graph = sample_sbm(protocol_sbm_params(40), 40, rng)
        theta = sample_theta(ThetaGenSpec(k=4, cutoff=4), rng).as_vector()
        problem = BudgetedProblem(graph, theta, 4, budget=8)
        serial = solve(problem, SolverSettings(method="local_search", restarts=6),
                       np.random.default_rng(9))
        threaded = solve(problem, SolverSettings(method="local_search", restarts=6, restart_jobs=3),
                         np.random.default_rng(9))
        assert np.array_equal(serial.z, threaded.z)
        with pytest.raises(ConfigurationError):
            SolverSettings(restart_jobs=0).validate()

    def test_scale_equivariance(self, make_instance, rng):
        """Testa θ·c: mesmo z e objetivo multiplicado por c"""
        graph, theta = make_instance(rng, 10, k=2, cutoff=3)
        problem = BudgetedProblem(graph, theta, 2, budget=4)
        base = solve(problem, SolverSettings(method="bruteforce"))
        scaled = solve(problem.scaled(2.5), SolverSettings(method="bruteforce"))
        assert np.array_equal(base.z, scaled.z)
        assert scaled.objective == pytest.approx(2.5 * base.objective)
