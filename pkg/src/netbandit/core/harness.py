"""
Orquestração de experimentos: laço por rodada, contabilidade de regret,
replicações semeadas em paralelo e varreduras pareadas.

Regra de sementes: para a semente mestre s, a replicação r usa
SeedSequence(s, spawn_key=(1, r, j)) para o fluxo j em
(theta, graph, agent, noise, oracle); θ fixo entre replicações vem de
SeedSequence(s, spawn_key=(0,)). Braços de uma varredura compartilham s,
logo veem os mesmos θ e redes por replicação.
"""

import logging
import threading
import time
import weakref
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..agents import create_agent
from ..agents.base import BaseAgent
from ..agents.baselines import oracle_step
from ..models.reward import realize_rewards
from ..utils.hashing import graph_digest
from ..utils.logger import get_experiment_logger
from .config import Config, ExperimentConfig, parse_axis_value
from .exceptions import ContractViolation, NetBanditError
from .results import AggregateResult, RoundRecord, RunResult, aggregate_runs

logger = logging.getLogger(__name__)

STREAMS = ("theta", "graph", "agent", "noise", "oracle")
REGRET_TOLERANCE = 1e-9

RoundCallback = Callable[[int, RoundRecord, float], None]
AgentFactory = Callable[[ExperimentConfig, Any], BaseAgent]


def replication_streams(master_seed: int, rep: int) -> Dict[str, np.random.Generator]:
    """
    Fluxos independentes de uma replicação

    Args:
        master_seed: Semente mestre do experimento
        rep: Índice da replicação

    Returns:
        Dicionário nome -> Generator (PCG64)
    """
    return {
        name: np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(1, rep, j)))
        for j, name in enumerate(STREAMS)
    }


def fixed_theta_stream(master_seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(0,)))


def run_experiment(cfg: ExperimentConfig, seed: Optional[int] = None, rep: int = 0,
                   on_round: Optional[RoundCallback] = None,
                   agent_factory: Optional[AgentFactory] = None) -> RunResult:
    """
    Executa uma replicação completa

    θ verdadeiro é sorteado uma vez; a cada rodada uma rede nova é amostrada,
    o agente age, as recompensas são realizadas, o agente é atualizado e o
    regret é medido contra o oráculo na mesma rede, com recompensas esperadas.

    Args:
        cfg: Configuração resolvida
        seed: Semente mestre (padrão: cfg.seed)
        rep: Índice da replicação
        on_round: Callback (rep, registro, regret acumulado) após cada rodada
        agent_factory: Constrói o agente a partir de (cfg, θ verdadeiro); padrão é o
            registro de agentes com cfg.agent

    Returns:
        RunResult; se algo falhar, `error` descreve a falha e os registros
        contêm as rodadas concluídas
    """
    seed = cfg.seed if seed is None else seed
    streams = replication_streams(seed, rep)
    result = RunResult(rep=rep, seed=seed, agent=cfg.agent.kind, config_hash=cfg.config_hash)
    started = time.perf_counter()
    exp_logger = get_experiment_logger()

    try:
        theta_rng = fixed_theta_stream(seed) if cfg.fixed_theta else streams["theta"]
        theta_true = cfg.draw_theta(theta_rng)
        if agent_factory is not None:
            agent = agent_factory(cfg, theta_true)
        else:
            agent = create_agent(cfg.agent, cfg.agent_context(theta_true))
        seen_graphs = weakref.WeakSet()
        cumulative = 0.0
        lower_bound_logged = False

        for t in range(1, cfg.rounds + 1):
            round_started = time.perf_counter()
            graph = cfg.sample_graph(streams["graph"])
            if graph in seen_graphs:
                raise ContractViolation(f"Objeto de grafo reutilizado na rodada {t}")
            seen_graphs.add(graph)
            budget = cfg.budget_at(t)

            z = agent.step(graph, budget, streams["agent"])
            expected = theta_true.expected(graph, z)
            rewards = realize_rewards(expected, cfg.noise, streams["noise"])
            agent.observe(graph, z, rewards)

            oracle = oracle_step(theta_true, graph, budget, cfg.oracle_solver, streams["oracle"])
            chosen_value = float(expected.sum())
            tolerance = REGRET_TOLERANCE * max(1.0, abs(oracle.objective))
            if oracle.is_exact and chosen_value > oracle.objective + tolerance:
                raise ContractViolation(
                    f"Oráculo exato superado na rodada {t}: {chosen_value} > {oracle.objective}"
                )
            oracle_value = max(oracle.objective, chosen_value)
            if not oracle.is_exact and not lower_bound_logged:
                exp_logger.log_solver_fallback(rep, t, oracle.solver, oracle.gap)
                lower_bound_logged = True

            snapshot = agent.snapshot() if cfg.record_posterior else None
            record = RoundRecord(
                t=t,
                budget=budget,
                treated=int(z.sum()),
                chosen_value=chosen_value,
                oracle_value=oracle_value,
                oracle_status=oracle.status,
                oracle_solver=oracle.solver,
                regret_inc=oracle_value - chosen_value,
                realized_total=float(rewards.sum()),
                graph_digest=graph_digest(graph),
                oracle_objective=oracle.objective,
                wall_ms=(time.perf_counter() - round_started) * 1000.0 if cfg.timing else 0.0,
                posterior_mean=None if snapshot is None else tuple(snapshot.mean.tolist()),
                posterior_sd=None if snapshot is None else tuple(snapshot.marginal_sd().tolist()),
            )
            result.records.append(record)
            cumulative += record.regret_inc
            exp_logger.log_round_progress(rep, t, cfg.rounds, cumulative)
            if on_round is not None:
                on_round(rep, record, cumulative)

    except Exception as e:
        result.error = f"{type(e).__name__}: {e}"
        exp_logger.log_replication_failure(rep, result.error)
        logger.debug("Detalhes da falha", exc_info=True)

    result.wall_time = time.perf_counter() - started
    return result


def _replication_worker(cfg: ExperimentConfig, seed: int, rep: int) -> RunResult:
    """Ponto de entrada de nível de módulo para o pool de processos"""
    return run_experiment(cfg, seed=seed, rep=rep)


@dataclass
class SweepResult:
    """Um agregado por valor do eixo varrido"""
    axis: str
    values: List[Any]
    results: List[AggregateResult]

    def items(self):
        return zip(self.values, self.results)

    def table(self) -> pd.DataFrame:
        """Resumo final por braço"""
        rows = []
        for value, agg in self.items():
            rows.append({
                "axis": self.axis,
                "value": "unlimited" if value is None else value,
                "replications": agg.replications,
                "failures": len(agg.failures),
                "final_mean": agg.final_mean,
                "final_se": agg.final_se,
                "heuristic_fraction": agg.heuristic_fraction,
                "curve": agg.curve_label,
            })
        return pd.DataFrame(rows)


class ExperimentHarness:
    """Executa replicações e varreduras e notifica observadores"""

    def __init__(self, jobs: Optional[int] = None, executor: Optional[str] = None):
        """
        Args:
            jobs: Replicações simultâneas (padrão: experiment.jobs da configuração)
            executor: "thread" ou "process" (padrão: experiment.executor)
        """
        self.jobs = jobs
        self.executor = executor
        self._round_callbacks: List[RoundCallback] = []
        self._completion_callbacks: List[Callable[[RunResult], None]] = []
        self._lock = threading.RLock()
        self.exp_logger = get_experiment_logger()

    def add_round_callback(self, callback: RoundCallback) -> None:
        """Callback por rodada; só é chamado com o executor de threads ou jobs=1"""
        self._round_callbacks.append(callback)

    def add_completion_callback(self, callback: Callable[[RunResult], None]) -> None:
        """Callback chamado ao fim de cada replicação"""
        self._completion_callbacks.append(callback)

    def _notify_round(self, rep: int, record: RoundRecord, cumulative: float) -> None:
        with self._lock:
            for callback in self._round_callbacks:
                try:
                    callback(rep, record, cumulative)
                except Exception as e:
                    logger.error(f"Erro em callback de rodada: {e}")

    def _notify_completion(self, run: RunResult) -> None:
        with self._lock:
            for callback in self._completion_callbacks:
                try:
                    callback(run)
                except Exception as e:
                    logger.error(f"Erro em callback de conclusão: {e}")

    def run_replications(self, cfg: ExperimentConfig, reps: Optional[int] = None,
                         seed: Optional[int] = None, label: Optional[str] = None) -> AggregateResult:
        """
        Executa as replicações e agrega o regret acumulado

        Args:
            cfg: Configuração resolvida
            reps: Número de replicações (padrão: cfg.replications)
            seed: Semente mestre (padrão: cfg.seed)
            label: Rótulo do agregado (padrão: agente)

        Returns:
            AggregateResult idêntico para qualquer grau de paralelismo

        Raises:
            NetBanditError: se nenhuma replicação terminar
        """
        reps = cfg.replications if reps is None else reps
        if reps < 1:
            raise ContractViolation(f"reps deve ser >= 1 (recebido {reps})")
        seed = cfg.seed if seed is None else seed
        jobs = max(1, self.jobs or cfg.jobs)
        executor_kind = self.executor or cfg.executor
        label = label or cfg.label

        self.exp_logger.log_run_start(label, reps, cfg.rounds, cfg.n, jobs)
        started = time.perf_counter()
        runs: Dict[int, RunResult] = {}
        on_round = self._notify_round if self._round_callbacks else None

        if jobs == 1:
            for rep in range(reps):
                runs[rep] = run_experiment(cfg, seed=seed, rep=rep, on_round=on_round)
                self._notify_completion(runs[rep])
        else:
            pool_class = ProcessPoolExecutor if executor_kind == "process" else ThreadPoolExecutor
            with pool_class(max_workers=min(jobs, reps)) as pool:
                if executor_kind == "process":
                    futures = {pool.submit(_replication_worker, cfg, seed, rep): rep
                               for rep in range(reps)}
                else:
                    futures = {pool.submit(run_experiment, cfg, seed, rep, on_round): rep
                               for rep in range(reps)}
                for future in as_completed(futures):
                    rep = futures[future]
                    try:
                        runs[rep] = future.result()
                    except Exception as e:
                        runs[rep] = RunResult(rep=rep, seed=seed, agent=cfg.agent.kind,
                                              config_hash=cfg.config_hash,
                                              error=f"{type(e).__name__}: {e}")
                        self.exp_logger.log_replication_failure(rep, runs[rep].error)
                    self._notify_completion(runs[rep])

        duration = time.perf_counter() - started
        aggregate = aggregate_runs([runs[rep] for rep in range(reps)], label, wall_time=duration)
        self.exp_logger.log_run_complete(label, duration, aggregate.replications,
                                         len(aggregate.failures))
        if aggregate.replications == 0:
            raise NetBanditError(f"Todas as {reps} replicações falharam; "
                                 f"primeira falha: {aggregate.failures[0][1]}")
        return aggregate

    def sweep(self, config: Config, axis: str, values: Sequence[Any],
              reps: Optional[int] = None, seed: Optional[int] = None) -> SweepResult:
        """
        Um agregado por valor do eixo, com sementes compartilhadas entre braços

        Args:
            config: Configuração base (não é alterada)
            axis: n, budget, prior_mean ou agent
            values: Valores do eixo (texto ou já convertidos)
            reps: Replicações por braço
            seed: Semente mestre comum

        Returns:
            SweepResult na ordem dos valores
        """
        parsed = [parse_axis_value(axis, v) if isinstance(v, str) else v for v in values]
        # valida todos os braços antes de rodar qualquer um
        arms = [config.with_axis(axis, value).to_experiment() for value in parsed]
        seed = arms[0].seed if seed is None else seed

        results = []
        for value, cfg in zip(parsed, arms):
            label = f"{axis}={'unlimited' if value is None else value}"
            results.append(self.run_replications(cfg, reps=reps, seed=seed, label=label))
        return SweepResult(axis=axis, values=parsed, results=results)


def run_replications(cfg: ExperimentConfig, reps: Optional[int] = None,
                     parallelism: Optional[int] = None, executor: Optional[str] = None,
                     seed: Optional[int] = None) -> AggregateResult:
    """Atalho funcional para ExperimentHarness.run_replications"""
    return ExperimentHarness(jobs=parallelism, executor=executor).run_replications(
        cfg, reps=reps, seed=seed)


def sweep(config: Config, axis: str, values: Sequence[Any], reps: Optional[int] = None,
          parallelism: Optional[int] = None, seed: Optional[int] = None) -> SweepResult:
    """Atalho funcional para ExperimentHarness.sweep"""
    return ExperimentHarness(jobs=parallelism).sweep(config, axis, values, reps=reps, seed=seed)
