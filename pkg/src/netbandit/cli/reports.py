"""
Gerador de relatórios: séries de regret em CSV, resumo JSON e tabelas no console
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from rich.console import Console
from rich.table import Table

from ..core.config import ExperimentConfig
from ..core.harness import SweepResult
from ..core.results import AggregateResult
from ..utils.hashing import file_digest

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["rep", "t", "agent", "n", "budget", "prior_mean",
               "cum_regret", "regret_inc", "oracle_status", "wall_ms"]
POSTERIOR_COLUMNS = ["rep", "t", "param", "mean", "sd"]
FLOAT_FORMAT = "%.17g"


def parameter_names(k: int, cutoff: int) -> List[str]:
    """Nomes das coordenadas de θ na ordem do design"""
    return [f"mu_{j}" for j in range(1, k + 1)] + [f"gamma_{d}" for d in range(cutoff + 1)]


def regret_frame(aggregate: AggregateResult, cfg: ExperimentConfig) -> pd.DataFrame:
    """
    Tabela no formato estável do CSV: uma linha por (rep, t)

    Args:
        aggregate: Resultado agregado (só replicações bem-sucedidas entram)
        cfg: Configuração usada no braço

    Returns:
        DataFrame com as colunas de CSV_COLUMNS, ordenado por rep e t
    """
    frames = []
    for run in aggregate.runs:
        frames.append(pd.DataFrame({
            "rep": run.rep,
            "t": [r.t for r in run.records],
            "agent": run.agent,
            "n": cfg.n,
            "budget": ["unlimited" if r.budget is None else r.budget for r in run.records],
            "prior_mean": cfg.agent.prior_mean,
            "cum_regret": run.cumulative,
            "regret_inc": run.increments,
            "oracle_status": [r.oracle_status for r in run.records],
            "wall_ms": [r.wall_ms for r in run.records],
        }))
    if not frames:
        return pd.DataFrame(columns=CSV_COLUMNS)
    frame = pd.concat(frames, ignore_index=True)
    return frame.sort_values(["rep", "t"], kind="stable")[CSV_COLUMNS].reset_index(drop=True)


def posterior_frame(aggregate: AggregateResult, cfg: ExperimentConfig) -> pd.DataFrame:
    """Média e desvio marginal da posterior por rodada, formato longo"""
    names = parameter_names(cfg.k, cfg.cutoff)
    rows = []
    for run in aggregate.runs:
        for record in run.records:
            if record.posterior_mean is None:
                continue
            for name, mean, sd in zip(names, record.posterior_mean, record.posterior_sd):
                rows.append((run.rep, record.t, name, mean, sd))
    return pd.DataFrame(rows, columns=POSTERIOR_COLUMNS)


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """CSV UTF-8 com ponto decimal e 17 dígitos significativos"""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8",
                 lineterminator="\n")
    return path


class ReportGenerator:
    """Grava os artefatos de uma execução ou varredura"""

    def __init__(self, output: Path, console: Optional[Console] = None):
        """
        Args:
            output: Diretório de saída, ou caminho .csv para o CSV principal
                (o resumo vai ao lado, como <nome>_summary.json)
        """
        output = Path(output)
        if output.suffix.lower() == ".csv":
            self.output_dir = output.parent
            self.stem = output.stem
        else:
            self.output_dir = output
            self.stem = "regret"
        self.console = console or Console()

    def _path(self, suffix: str, extension: str = "csv") -> Path:
        name = self.stem if not suffix else f"{self.stem}_{suffix}"
        return self.output_dir / f"{name}.{extension}"

    def write_run(self, aggregate: AggregateResult, cfg: ExperimentConfig) -> List[Path]:
        """
        Grava CSV de regret, resumo JSON e (opcional) posterior.csv

        Args:
            aggregate: Resultado de run_replications
            cfg: Configuração usada

        Returns:
            Arquivos gerados
        """
        generated = [write_csv(regret_frame(aggregate, cfg), self._path(""))]
        if cfg.record_posterior:
            generated.append(write_csv(posterior_frame(aggregate, cfg), self._path("posterior")))

        summary = self._summary_header(cfg)
        summary["arms"] = [aggregate.summary(include_timing=cfg.timing)]
        summary["files"] = self._digests(generated)
        generated.append(self._write_json(summary, self._path("summary", "json")))
        return generated

    def write_sweep(self, result: SweepResult, configs: Sequence[ExperimentConfig]) -> List[Path]:
        """
        Um CSV por valor do eixo, um CSV combinado (axis, value + colunas) e o resumo

        Args:
            result: Resultado da varredura
            configs: Configuração de cada braço, na ordem dos valores

        Returns:
            Arquivos gerados
        """
        generated = []
        combined = []
        for (value, aggregate), cfg in zip(result.items(), configs):
            label = "unlimited" if value is None else value
            frame = regret_frame(aggregate, cfg)
            generated.append(write_csv(frame, self._path(f"{result.axis}-{label}")))
            long = frame.copy()
            long.insert(0, "value", label)
            long.insert(0, "axis", result.axis)
            combined.append(long)
            if cfg.record_posterior:
                generated.append(write_csv(posterior_frame(aggregate, cfg),
                                           self._path(f"{result.axis}-{label}_posterior")))

        combined_frame = pd.concat(combined, ignore_index=True)
        generated.append(write_csv(combined_frame, self._path(result.axis)))

        summary = self._summary_header(configs[0])
        summary["axis"] = result.axis
        summary["arms"] = [
            dict(agg.summary(include_timing=cfg.timing), value=("unlimited" if v is None else v))
            for (v, agg), cfg in zip(result.items(), configs)
        ]
        summary["files"] = self._digests(generated)
        generated.append(self._write_json(summary, self._path(f"{result.axis}_summary", "json")))
        return generated

    def print_summary(self, aggregates: Sequence[AggregateResult]) -> None:
        """Tabela com o regret acumulado final (média ± erro padrão) por braço"""
        table = Table(title="[bold green]Regret acumulado[/bold green]")
        table.add_column("Braço", style="bold cyan")
        table.add_column("Reps", justify="right")
        table.add_column("T", justify="right")
        table.add_column("Regret final", justify="right")
        table.add_column("Inclinação log-log", justify="right")
        table.add_column("Oráculo heurístico", justify="right")
        table.add_column("Falhas", justify="right")

        for agg in aggregates:
            slope = agg.slope
            table.add_row(
                agg.label,
                str(agg.replications),
                str(agg.rounds),
                f"{agg.final_mean:.4f} ± {agg.final_se:.4f}",
                "n/d" if slope != slope else f"{slope:.3f}",
                f"{agg.heuristic_fraction:.1%}",
                f"[red]{len(agg.failures)}[/red]" if agg.failures else "0",
            )
        self.console.print(table)
        for agg in aggregates:
            if agg.heuristic_fraction > 0:
                self.console.print(f"[yellow]{agg.label}: curva rotulada como "
                                   f"'{agg.curve_label}'[/yellow]")

    @staticmethod
    def _summary_header(cfg: ExperimentConfig) -> Dict[str, Any]:
        return {
            "config_hash": cfg.config_hash,
            "seed": cfg.seed,
            "n": cfg.n,
            "k": cfg.k,
            "cutoff": cfg.cutoff,
            "D": cfg.dimension,
            "rounds": cfg.rounds,
        }

    @staticmethod
    def _digests(paths: Sequence[Path]) -> Dict[str, str]:
        return {path.name: file_digest(path) for path in paths}

    @staticmethod
    def _write_json(data: Dict[str, Any], path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False, default=str)
        logger.info(f"Resumo salvo em: {path}")
        return path
