"""
Núcleo do netbandit: configuração, exceções, resultados e harness de experimentos
"""

from .exceptions import (
    ConfigurationError, ContractViolation, DataError, NetBanditError, NumericalError, SolverRefusal,
)
from .config import (
    SWEEP_AXES, Config, ExperimentConfig, get_config, load_config, parse_axis_value, set_config,
)
from .results import (
    AggregateResult, RoundRecord, RunResult, aggregate_runs, loglog_slope, paired_difference,
)
from .harness import (
    ExperimentHarness, SweepResult, replication_streams, run_experiment, run_replications, sweep,
)

__all__ = [
    "ConfigurationError", "ContractViolation", "DataError", "NetBanditError", "NumericalError",
    "SolverRefusal",
    "SWEEP_AXES", "Config", "ExperimentConfig", "get_config", "load_config", "parse_axis_value",
    "set_config",
    "AggregateResult", "RoundRecord", "RunResult", "aggregate_runs", "loglog_slope",
    "paired_difference",
    "ExperimentHarness", "SweepResult", "replication_streams", "run_experiment",
    "run_replications", "sweep",
]
