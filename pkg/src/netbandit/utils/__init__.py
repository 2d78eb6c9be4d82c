"""
Utilitários do netbandit
"""

from .logger import (
    ExperimentLogger, get_experiment_logger, setup_from_config, setup_logger,
)
from .hashing import config_digest, file_digest, graph_digest, verify_file

__all__ = [
    "ExperimentLogger", "get_experiment_logger", "setup_from_config", "setup_logger",
    "config_digest", "file_digest", "graph_digest", "verify_file",
]
