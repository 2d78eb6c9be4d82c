"""
Interface de linha de comando do netbandit

Códigos de saída: 0 sucesso, 2 erro de configuração, 3 erro de execução.
"""

import signal
import sys
from pathlib import Path
from typing import List, Optional

import click
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from .. import __version__
from ..core import Config, ConfigurationError, ExperimentConfig, ExperimentHarness, parse_axis_value
from ..utils import setup_from_config
from .reports import ReportGenerator

console = Console()
error_console = Console(stderr=True)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class CLIManager:
    """Gerenciador da interface CLI"""

    def __init__(self):
        self.config: Optional[Config] = None
        self.log_level: Optional[str] = None
        self._handlers_installed = False

    def _signal_handler(self, signum, frame):
        """Handler para sinais de interrupção"""
        error_console.print("\n[yellow]Interrupção recebida. Encerrando experimento...[/yellow]")
        sys.exit(EXIT_RUNTIME)

    def _install_signal_handlers(self) -> None:
        if self._handlers_installed:
            return
        try:
            signal.signal(signal.SIGINT, self._signal_handler)
            signal.signal(signal.SIGTERM, self._signal_handler)
            self._handlers_installed = True
        except ValueError:
            # fora da thread principal
            pass

    def initialize(self, config_path: str, seed: Optional[int] = None,
                   jobs: Optional[int] = None, reps: Optional[int] = None,
                   rounds: Optional[int] = None) -> ExperimentConfig:
        """
        Carrega a configuração, configura o logging e aplica as opções da linha de comando

        Args:
            config_path: Arquivo YAML ou JSON
            seed: Semente mestre (sobrepõe experiment.seed)
            jobs: Replicações simultâneas (sobrepõe experiment.jobs)
            reps: Replicações (sobrepõe experiment.replications)
            rounds: Horizonte T (sobrepõe experiment.rounds)

        Returns:
            ExperimentConfig validado

        Raises:
            ConfigurationError: arquivo ausente ou inválido
        """
        self.config = Config(config_path)
        if seed is not None:
            self.config.experiment.seed = seed
        if jobs is not None:
            self.config.experiment.jobs = jobs
        if reps is not None:
            self.config.experiment.replications = reps
        if rounds is not None:
            self.config.experiment.rounds = rounds
        if self.log_level:
            self.config.logging.level = self.log_level.upper()

        cfg = self.config.to_experiment()
        setup_from_config(self.config.logging)
        self._install_signal_handlers()
        return cfg

    def run(self, config_path: str, seed: Optional[int], out: str, jobs: Optional[int],
            reps: Optional[int] = None, rounds: Optional[int] = None) -> int:
        """Executa as replicações de uma configuração e grava os resultados"""
        cfg = self.initialize(config_path, seed=seed, jobs=jobs, reps=reps, rounds=rounds)
        self._show_header(cfg, config_path)

        harness = ExperimentHarness(jobs=cfg.jobs, executor=cfg.executor)
        aggregate = harness.run_replications(cfg)

        reporter = ReportGenerator(Path(out), console=console)
        generated = reporter.write_run(aggregate, cfg)
        reporter.print_summary([aggregate])
        self._show_files(generated)
        return EXIT_OK

    def sweep(self, config_path: str, axis: str, values: str, seed: Optional[int], out: str,
              jobs: Optional[int], reps: Optional[int] = None, rounds: Optional[int] = None) -> int:
        """Executa uma varredura pareada sobre um eixo"""
        parsed = [parse_axis_value(axis, v) for v in values.split(",") if v.strip()]
        if not parsed:
            raise ConfigurationError("--values não pode ser vazio")
        base = self.initialize(config_path, seed=seed, jobs=jobs, reps=reps, rounds=rounds)
        self._show_header(base, config_path, extra=f"{axis} ∈ {values}")

        configs = [self.config.with_axis(axis, value).to_experiment() for value in parsed]
        harness = ExperimentHarness(jobs=base.jobs, executor=base.executor)
        result = harness.sweep(self.config, axis, parsed)

        reporter = ReportGenerator(Path(out), console=console)
        generated = reporter.write_sweep(result, configs)
        reporter.print_summary(result.results)
        self._show_files(generated)
        return EXIT_OK

    def validate(self, config_path: str) -> int:
        """Valida e mostra as quantidades derivadas, sem executar"""
        cfg = self.initialize(config_path)
        derived = cfg.describe()

        table = Table(title="[bold green]Configuração válida[/bold green]", box=None)
        table.add_column("Quantidade", style="bold cyan")
        table.add_column("Valor", style="white")
        confidence = derived.pop("confidence")
        for key, value in derived.items():
            if key == "expected_degree" and value is not None:
                value = f"{value:.4f}"
            table.add_row(key, "n/d" if value is None else str(value))
        table.add_row("confiança", ", ".join(f"{k}={v:.4g}" for k, v in confidence.items()))
        console.print(table)
        console.print(f"D = {cfg.k} + {cfg.cutoff + 1} = {cfg.dimension}")
        console.print(f"B = {cfg.budget_label(1)}")
        return EXIT_OK

    def _show_header(self, cfg: ExperimentConfig, config_path: str, extra: str = "") -> None:
        header_table = Table(show_header=False, box=None, padding=(0, 1))
        header_table.add_column("Label", style="bold cyan")
        header_table.add_column("Value", style="white")
        header_table.add_row("Configuração", str(config_path))
        header_table.add_row("Agente", cfg.agent.kind)
        header_table.add_row("Rede", f"{cfg.network_model} n={cfg.n} k={cfg.k}")
        header_table.add_row("Horizonte", f"T={cfg.rounds} reps={cfg.replications} seed={cfg.seed}")
        header_table.add_row("Paralelismo", f"{cfg.jobs} ({cfg.executor})")
        if extra:
            header_table.add_row("Varredura", extra)
        console.print(Panel(header_table, title=f"[bold green]netbandit {__version__}[/bold green]",
                            border_style="green"))

    def _show_files(self, generated: List[Path]) -> None:
        console.print("\n[green]Arquivos gerados:[/green]")
        for file_path in generated:
            console.print(f"   {file_path}")


cli_manager = CLIManager()


def _execute(action, *args, **kwargs) -> None:
    """Executa um comando convertendo exceções em códigos de saída"""
    try:
        code = action(*args, **kwargs)
    except ConfigurationError as e:
        error_console.print(f"[red]Erro de configuração:[/red] {escape(str(e))}",
                            highlight=False, soft_wrap=True)
        code = EXIT_CONFIG
    except Exception as e:
        error_console.print(f"[red]Erro de execução:[/red] {type(e).__name__}: {escape(str(e))}",
                            highlight=False, soft_wrap=True)
        code = EXIT_RUNTIME
    sys.exit(code)


@click.group(invoke_without_command=True)
@click.option('--log-level', default=None, help='Nível de log (DEBUG, INFO, WARNING, ERROR)')
@click.option('--version', is_flag=True, help='Mostrar versão')
@click.pass_context
def main(ctx, log_level, version):
    """netbandit - aprendizado de políticas sob interferência em rede"""
    if version:
        console.print(f"[bold green]netbandit {__version__}[/bold green]")
        return

    if ctx.invoked_subcommand is None:
        console.print(ctx.get_help())
        return

    cli_manager.log_level = log_level


_jobs_option = click.option('--jobs', '-j', type=int, envvar='NETBANDIT_JOBS', default=None,
                            help='Replicações simultâneas (padrão: NETBANDIT_JOBS ou configuração)')
_seed_option = click.option('--seed', type=int, default=None, help='Semente mestre')
_reps_option = click.option('--reps', type=int, default=None, help='Sobrepõe experiment.replications')
_rounds_option = click.option('--rounds', type=int, default=None, help='Sobrepõe experiment.rounds')


@main.command()
@click.argument('config_path')
@_seed_option
@click.option('--out', '-o', default='results', help='Diretório de saída (ou caminho .csv)')
@_jobs_option
@_reps_option
@_rounds_option
def run(config_path, seed, out, jobs, reps, rounds):
    """Executa um experimento e grava o CSV de regret"""
    _execute(cli_manager.run, config_path, seed, out, jobs, reps, rounds)


@main.command()
@click.argument('config_path')
@click.option('--axis', required=True, help='Eixo: n, budget, prior_mean ou agent')
@click.option('--values', required=True, help='Valores separados por vírgula (ex.: 10,25,50,unlimited)')
@_seed_option
@click.option('--out', '-o', default='results', help='Diretório de saída')
@_jobs_option
@_reps_option
@_rounds_option
def sweep(config_path, axis, values, seed, out, jobs, reps, rounds):
    """Varre um eixo com sementes pareadas entre os valores"""
    _execute(cli_manager.sweep, config_path, axis, values, seed, out, jobs, reps, rounds)


@main.command()
@click.argument('config_path')
def validate(config_path):
    """Valida uma configuração e mostra D, grau esperado e constantes de confiança"""
    _execute(cli_manager.validate, config_path)


if __name__ == '__main__':
    main()
