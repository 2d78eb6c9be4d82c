"""
Estruturas de resultado: registros por rodada, execuções e agregados entre replicações
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..optimize.problem import STATUS_HEURISTIC

logger = logging.getLogger(__name__)

LOWER_BOUND_LABEL = "regret lower bound"
REGRET_LABEL = "cumulative regret"


@dataclass(frozen=True)
class RoundRecord:
    """Uma rodada de uma replicação"""
    t: int
    budget: Optional[int]
    treated: int
    chosen_value: float
    oracle_value: float
    oracle_status: str
    oracle_solver: str
    regret_inc: float
    realized_total: float
    graph_digest: str
    oracle_objective: float = float("nan")
    wall_ms: float = 0.0
    posterior_mean: Optional[Tuple[float, ...]] = None
    posterior_sd: Optional[Tuple[float, ...]] = None

    @property
    def is_lower_bound(self) -> bool:
        """O oráculo não foi provado ótimo: o regret da rodada é cota inferior"""
        return self.oracle_status == STATUS_HEURISTIC


@dataclass
class RunResult:
    """Resultado de uma replicação"""
    rep: int
    seed: int
    agent: str
    config_hash: str
    records: List[RoundRecord] = field(default_factory=list)
    wall_time: float = 0.0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def rounds(self) -> int:
        return len(self.records)

    @property
    def increments(self) -> np.ndarray:
        return np.array([r.regret_inc for r in self.records], dtype=float)

    @property
    def cumulative(self) -> np.ndarray:
        """Regret acumulado: soma de prefixos dos incrementos"""
        return np.cumsum(self.increments)

    @property
    def final_regret(self) -> float:
        cumulative = self.cumulative
        return float(cumulative[-1]) if len(cumulative) else 0.0

    @property
    def heuristic_rounds(self) -> int:
        return sum(1 for r in self.records if r.is_lower_bound)

    @property
    def repeated_graphs(self) -> int:
        """Rodadas cujo grafo repetiu a estrutura de uma rodada anterior"""
        digests = [r.graph_digest for r in self.records]
        return len(digests) - len(set(digests))

    def to_frame(self) -> pd.DataFrame:
        """Uma linha por rodada"""
        frame = pd.DataFrame({
            "rep": self.rep,
            "t": [r.t for r in self.records],
            "cum_regret": self.cumulative,
            "regret_inc": self.increments,
            "oracle_status": [r.oracle_status for r in self.records],
            "budget": [r.budget for r in self.records],
            "treated": [r.treated for r in self.records],
            "wall_ms": [r.wall_ms for r in self.records],
        })
        return frame


def loglog_slope(cumulative: Sequence[float], start: Optional[int] = None,
                 stop: Optional[int] = None) -> float:
    """
    Inclinação de mínimos quadrados de log(regret acumulado) contra log(t)

    Args:
        cumulative: Série de regret acumulado (índice 0 = rodada 1)
        start: Primeira rodada da janela (padrão T/2)
        stop: Última rodada (padrão T)

    Returns:
        Inclinação; nan se houver menos de dois pontos positivos
    """
    values = np.asarray(cumulative, dtype=float)
    horizon = len(values)
    if horizon == 0:
        return float("nan")
    start = max(1, horizon // 2) if start is None else start
    stop = horizon if stop is None else stop
    t = np.arange(start, stop + 1)
    window = values[start - 1:stop]
    mask = window > 0
    if mask.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(t[mask]), np.log(window[mask]), 1)
    return float(slope)


@dataclass
class AggregateResult:
    """Média e erro padrão do regret acumulado por rodada, entre replicações"""
    label: str
    frame: pd.DataFrame
    runs: List[RunResult]
    failures: List[Tuple[int, str]] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def replications(self) -> int:
        return len(self.runs)

    @property
    def rounds(self) -> int:
        return len(self.frame)

    @property
    def mean(self) -> np.ndarray:
        return self.frame["mean"].to_numpy()

    @property
    def se(self) -> np.ndarray:
        return self.frame["se"].to_numpy()

    @property
    def final_mean(self) -> float:
        return float(self.mean[-1]) if self.rounds else float("nan")

    @property
    def final_se(self) -> float:
        return float(self.se[-1]) if self.rounds else float("nan")

    @property
    def heuristic_fraction(self) -> float:
        """Fração de rodadas (todas as replicações) com oráculo heurístico"""
        total = sum(run.rounds for run in self.runs)
        if total == 0:
            return 0.0
        return sum(run.heuristic_rounds for run in self.runs) / total

    @property
    def curve_label(self) -> str:
        return LOWER_BOUND_LABEL if self.heuristic_fraction > 0 else REGRET_LABEL

    @property
    def slope(self) -> float:
        return loglog_slope(self.mean)

    def mean_at(self, t: int) -> float:
        return float(self.mean[t - 1])

    def per_round_mean(self) -> np.ndarray:
        """Média do regret por rodada (incrementos)"""
        return np.diff(np.concatenate([[0.0], self.mean]))

    def run_for(self, rep: int) -> Optional[RunResult]:
        for run in self.runs:
            if run.rep == rep:
                return run
        return None

    def summary(self, include_timing: bool = False) -> Dict[str, Any]:
        """
        Números do resumo impresso e gravado em summary.json

        Args:
            include_timing: Inclui wall_time_s; desligado o resumo só depende de (config, semente)
        """
        data = {
            "label": self.label,
            "replications": self.replications,
            "failures": [{"rep": rep, "error": error} for rep, error in self.failures],
            "rounds": self.rounds,
            "final_cum_regret_mean": self.final_mean,
            "final_cum_regret_se": self.final_se,
            "heuristic_oracle_fraction": self.heuristic_fraction,
            "curve": self.curve_label,
            "loglog_slope": _finite_or_none(self.slope),
            "repeated_graphs": sum(run.repeated_graphs for run in self.runs),
        }
        if include_timing:
            data["wall_time_s"] = self.wall_time
        return data


def aggregate_runs(runs: Sequence[RunResult], label: str, wall_time: float = 0.0) -> AggregateResult:
    """
    Agrega replicações bem-sucedidas em média ± erro padrão por rodada

    Args:
        runs: Resultados de replicações (qualquer ordem)
        label: Rótulo do braço (agente ou valor da varredura)
        wall_time: Duração total, em segundos

    Returns:
        AggregateResult; se = desvio padrão amostral / √reps (0 com uma replicação)
    """
    ordered = sorted(runs, key=lambda run: run.rep)
    succeeded = [run for run in ordered if run.ok]
    failures = [(run.rep, run.error) for run in ordered if not run.ok]
    for rep, error in failures:
        logger.warning(f"Replicação {rep} excluída da agregação: {error}")

    if succeeded:
        long = pd.concat([run.to_frame()[["rep", "t", "cum_regret"]] for run in succeeded],
                         ignore_index=True)
        grouped = long.groupby("t")["cum_regret"]
        frame = pd.DataFrame({
            "mean": grouped.mean(),
            "sd": grouped.std(ddof=1),
            "count": grouped.count(),
        })
        frame["sd"] = frame["sd"].fillna(0.0)
        frame["se"] = frame["sd"] / np.sqrt(frame["count"])
        frame = frame.reset_index()
    else:
        frame = pd.DataFrame(columns=["t", "mean", "sd", "count", "se"])

    return AggregateResult(label=label, frame=frame, runs=succeeded,
                           failures=failures, wall_time=wall_time)


def paired_difference(a: AggregateResult, b: AggregateResult,
                      t: Optional[int] = None) -> Tuple[float, float]:
    """
    Diferença pareada (a - b) do regret acumulado na rodada t

    Replicações de mesmo índice compartilham θ e redes, então a diferença
    por replicação remove a variação comum.

    Args:
        a: Primeiro braço
        b: Segundo braço
        t: Rodada (padrão: a última comum)

    Returns:
        (média, erro padrão) das diferenças por replicação
    """
    common = sorted({run.rep for run in a.runs} & {run.rep for run in b.runs})
    if not common:
        return float("nan"), float("nan")
    t = min(a.rounds, b.rounds) if t is None else t
    diffs = np.array([a.run_for(rep).cumulative[t - 1] - b.run_for(rep).cumulative[t - 1]
                      for rep in common])
    se = float(diffs.std(ddof=1) / math.sqrt(len(diffs))) if len(diffs) > 1 else 0.0
    return float(diffs.mean()), se


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None
