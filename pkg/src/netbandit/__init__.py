"""
netbandit - aprendizado de políticas ótimas sob interferência em rede

Simulação de bandits com recompensas estruturadas por rede: efeitos diretos
por grupo, efeitos indiretos pela contagem de vizinhos tratados, agentes de
Thompson sampling e UCB, otimizador combinatório com orçamento e um harness
de medição de regret.

Versão: 1.0.0
Licença: MIT
"""

__version__ = "1.0.0"
__license__ = "MIT"

from .core import (
    Config, ConfigurationError, ExperimentConfig, ExperimentHarness, NetBanditError,
    load_config, run_experiment, run_replications, sweep,
)
from .models import Graph, ThetaTrue, build_design, expected_rewards, sample_sbm
from .optimize import BudgetedProblem, SolverSettings, solve
from .utils.logger import setup_logger

__all__ = [
    "__version__",
    "__license__",
    "Config",
    "ConfigurationError",
    "ExperimentConfig",
    "ExperimentHarness",
    "NetBanditError",
    "load_config",
    "run_experiment",
    "run_replications",
    "sweep",
    "Graph",
    "ThetaTrue",
    "build_design",
    "expected_rewards",
    "sample_sbm",
    "BudgetedProblem",
    "SolverSettings",
    "solve",
    "setup_logger",
]
