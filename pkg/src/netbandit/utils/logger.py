"""
Sistema de logging do netbandit
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Optional, Union

import colorama
from colorama import Back, Fore, Style
from rich.console import Console
from rich.logging import RichHandler

colorama.init(autoreset=True)

ROOT_LOGGER_NAME = "netbandit"
DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class ColoredFormatter(logging.Formatter):
    """Formatter colorido para console"""

    COLORS = {
        'DEBUG': Fore.CYAN,
        'INFO': Fore.GREEN,
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.RED + Back.WHITE + Style.BRIGHT,
    }

    def format(self, record):
        color = self.COLORS.get(record.levelname, '')
        record = logging.makeLogRecord(record.__dict__)
        record.levelname = f"{color}{record.levelname}{Style.RESET_ALL}"
        return super().format(record)


class ExperimentLogger:
    """Configura o logger raiz do pacote e oferece mensagens de domínio"""

    def __init__(self, name: str = ROOT_LOGGER_NAME):
        self.name = name
        self.logger = logging.getLogger(name)
        # stdout fica livre para tabelas e resumos da CLI
        self.console = Console(stderr=True)
        self._configured = False

    def setup(
        self,
        level: Union[str, int] = logging.INFO,
        log_file: Optional[Union[str, Path]] = None,
        max_file_size_mb: int = 10,
        backup_count: int = 5,
        console_output: bool = True,
        rich_console: bool = True,
        format_string: Optional[str] = None,
        force: bool = False,
    ) -> logging.Logger:
        """
        Configura o sistema de logging

        Args:
            level: Nível de logging (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_file: Caminho do arquivo de log (None desativa)
            max_file_size_mb: Tamanho máximo do arquivo antes da rotação
            backup_count: Número de arquivos de backup
            console_output: Se deve exibir logs no console (stderr)
            rich_console: Usa RichHandler; senão StreamHandler colorido
            format_string: Formato personalizado
            force: Reconfigura mesmo se já configurado

        Returns:
            Logger configurado
        """
        if self._configured and not force:
            return self.logger

        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

        if isinstance(level, str):
            level = getattr(logging, level.upper(), logging.INFO)
        self.logger.setLevel(level)

        format_string = format_string or DEFAULT_FORMAT

        if log_file:
            self._setup_file_handler(log_file, max_file_size_mb, backup_count, format_string)

        if console_output:
            self._setup_console_handler(rich_console, format_string)

        self.logger.propagate = False
        self._configured = True
        self.logger.debug(f"Sistema de logging configurado - Nível: {logging.getLevelName(level)}")
        return self.logger

    def _setup_file_handler(self, log_file: Union[str, Path], max_size_mb: int,
                            backup_count: int, format_string: str) -> None:
        """Configura handler para arquivo com rotação"""
        try:
            log_path = Path(log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.handlers.RotatingFileHandler(
                filename=log_path,
                maxBytes=max_size_mb * 1024 * 1024,
                backupCount=backup_count,
                encoding='utf-8',
            )
            file_handler.setFormatter(logging.Formatter(format_string))
            self.logger.addHandler(file_handler)
        except OSError as e:
            print(f"Erro ao configurar logging para arquivo: {e}", file=sys.stderr)

    def _setup_console_handler(self, rich_console: bool, format_string: str) -> None:
        """Configura handler para console"""
        if rich_console:
            console_handler = RichHandler(
                console=self.console,
                show_time=True,
                show_level=True,
                show_path=False,
                markup=True,
                rich_tracebacks=True,
            )
            console_handler.setFormatter(logging.Formatter("%(message)s"))
        else:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setFormatter(ColoredFormatter(format_string))
        self.logger.addHandler(console_handler)

    def log_run_start(self, label: str, replications: int, rounds: int, n: int, jobs: int) -> None:
        """Log específico para início de experimento"""
        self.logger.info(
            f"[bold green]EXPERIMENTO INICIADO[/bold green] - "
            f"{label} | Replicações: {replications} | Rodadas: {rounds} | n={n} | jobs={jobs}",
            extra={"markup": True}
        )

    def log_round_progress(self, rep: int, t: int, rounds: int, cum_regret: float) -> None:
        """Log de progresso por rodada (nível debug)"""
        self.logger.debug(f"rep={rep} t={t}/{rounds} regret acumulado={cum_regret:.4f}")

    def log_run_complete(self, label: str, duration: float, succeeded: int, failed: int) -> None:
        """Log específico para conclusão de experimento"""
        self.logger.info(
            f"[bold green]EXPERIMENTO CONCLUÍDO[/bold green] - "
            f"{label} | Duração: {duration:.2f}s | Sucessos: {succeeded} | Falhas: {failed}",
            extra={"markup": True}
        )

    def log_solver_fallback(self, rep: int, t: int, solver: str, gap: Optional[float]) -> None:
        """Rodada cujo oráculo não foi provado ótimo"""
        gap_text = "n/d" if gap is None else f"{gap:.4f}"
        self.logger.warning(
            f"Oráculo heurístico em rep={rep} t={t} (solver {solver}, gap {gap_text}); "
            f"regret da rodada é cota inferior"
        )

    def log_replication_failure(self, rep: int, error: str) -> None:
        """Replicação abortada"""
        self.logger.error(f"Replicação {rep} abortada: {error}")


_global_logger: Optional[ExperimentLogger] = None


def setup_logger(
    name: str = ROOT_LOGGER_NAME,
    level: Union[str, int] = logging.INFO,
    log_file: Optional[Union[str, Path]] = None,
    max_file_size_mb: int = 10,
    backup_count: int = 5,
    console_output: bool = True,
    rich_console: bool = True,
    format_string: Optional[str] = None,
    force: bool = False,
) -> logging.Logger:
    """
    Função principal para configurar logging

    Args:
        name: Nome do logger raiz
        level: Nível de logging
        log_file: Arquivo de log
        max_file_size_mb: Tamanho máximo do arquivo
        backup_count: Número de backups
        console_output: Saída no console
        rich_console: Usar Rich para formatação
        format_string: Formato personalizado
        force: Reconfigura handlers existentes

    Returns:
        Logger configurado
    """
    global _global_logger

    if _global_logger is None:
        _global_logger = ExperimentLogger(name)

    return _global_logger.setup(
        level=level,
        log_file=log_file,
        max_file_size_mb=max_file_size_mb,
        backup_count=backup_count,
        console_output=console_output,
        rich_console=rich_console,
        format_string=format_string,
        force=force,
    )


def setup_from_config(logging_config, force: bool = True) -> logging.Logger:
    """Configura o logging a partir da seção `logging` de Config"""
    return setup_logger(
        level=logging_config.level,
        log_file=logging_config.file_path,
        max_file_size_mb=logging_config.max_file_size_mb,
        backup_count=logging_config.backup_count,
        console_output=logging_config.console_output,
        rich_console=logging_config.rich_console,
        format_string=logging_config.format,
        force=force,
    )


def get_experiment_logger() -> ExperimentLogger:
    """Retorna instância do ExperimentLogger"""
    global _global_logger

    if _global_logger is None:
        _global_logger = ExperimentLogger()
        _global_logger.setup()

    return _global_logger
