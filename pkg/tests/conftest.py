"""
Configurações e fixtures para testes do netbandit
"""

import pytest
import tempfile
import shutil
from pathlib import Path
from typing import Any, Dict, Generator

import numpy as np
import yaml

from src.netbandit.core import Config, ExperimentConfig
from src.netbandit.models import Graph, ThetaTrue
from src.netbandit.utils import setup_logger


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="executa as simulações longas marcadas como slow")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: simulação longa (use --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="precisa de --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Cria um diretório temporário para testes"""
    temp_path = Path(tempfile.mkdtemp())
    try:
        yield temp_path
    finally:
        shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def rng() -> np.random.Generator:
    """Gerador semeado"""
    return np.random.default_rng(12345)


@pytest.fixture
def path_graph() -> Graph:
    """Caminho 1–2–3 com grupos (1, 2, 1)"""
    return Graph.from_edges(3, [(0, 1), (1, 2)], groups=[1, 2, 1])


@pytest.fixture
def k4_graph() -> Graph:
    """Grafo completo com 4 nós, grupo único"""
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def star_graph() -> Graph:
    """Estrela com centro 0 e 5 folhas, dois grupos"""
    return Graph.from_edges(6, [(0, j) for j in range(1, 6)], groups=[1, 1, 2, 2, 1, 2])


@pytest.fixture
def path_theta() -> ThetaTrue:
    """θ do exemplo do caminho: μ=(2,0), γ=(0,1,3)"""
    return ThetaTrue(mu=[2.0, 0.0], gamma=[0.0, 1.0, 3.0])


def _random_instance(rng: np.random.Generator, n: int, k: int = 2, cutoff: int = 3,
                     density: float = 0.4):
    """Grafo Erdős–Rényi com rótulos aleatórios e θ com γ de sinais mistos"""
    rows, cols = np.triu_indices(n, k=1)
    mask = rng.random(len(rows)) < density
    groups = rng.integers(1, k + 1, size=n)
    groups[0] = k
    graph = Graph.from_edges(n, np.column_stack([rows[mask], cols[mask]]), groups)
    theta = np.concatenate([rng.normal(0.5, 1.0, size=k), rng.normal(0.0, 2.0, size=cutoff + 1)])
    return graph, theta


@pytest.fixture
def make_instance():
    """Fábrica de instâncias aleatórias (grafo, θ) para comparar solvers"""
    return _random_instance


@pytest.fixture
def small_config_data() -> Dict[str, Any]:
    """Configuração mínima: n=8, T=5, 3 replicações, oráculo por força bruta"""
    return {
        "network": {"model": "sbm", "n": 8, "k": 2, "within": 0.5, "across": 0.1},
        "reward": {"cutoff": 3, "noise_sigma": 1.0},
        "agent": {"kind": "thompson", "prior_mean": 1.0, "prior_lambda": 0.1},
        "budget": {"mode": "constant", "value": 3},
        "solver": {"agent_method": "bruteforce", "oracle_method": "bruteforce"},
        "experiment": {"rounds": 5, "replications": 3, "seed": 7, "jobs": 1},
        "logging": {"level": "WARNING", "console_output": False},
    }


@pytest.fixture
def small_config(small_config_data) -> Config:
    return Config.from_dict(small_config_data)


@pytest.fixture
def small_experiment(small_config: Config) -> ExperimentConfig:
    return small_config.to_experiment()


@pytest.fixture
def config_file(temp_dir: Path, small_config_data) -> Path:
    """Arquivo YAML com a configuração mínima"""
    path = temp_dir / "experiment.yaml"
    path.write_text(yaml.safe_dump(small_config_data, sort_keys=False), encoding="utf-8")
    return path


@pytest.fixture
def setup_logging():
    """Configura logging para testes"""
    setup_logger(level="DEBUG", console_output=False, force=True)
