"""
Sistema de configuração centralizado do netbandit

Uma seção por dataclass (network, reward, agent, budget, solver, experiment,
logging, output). `Config` carrega YAML ou JSON, aplica variáveis de ambiente
e produz o `ExperimentConfig` imutável consumido pelo harness.
"""

import copy
import json
import logging
import math
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union, get_args, get_origin

import numpy as np
import yaml

from ..agents.base import AGENT_KINDS, AgentContext, AgentSpec
from ..agents.ucl import confidence_params_for
from ..models.netgen import (
    Graph, LatentSpaceParams, SbmParams, protocol_sbm_params, sample_latent_space, sample_sbm,
)
from ..models.reward import (
    MisspecTheta, NoiseSpec, ThetaGenSpec, ThetaTrue, sample_misspec_theta, sample_theta,
)
from ..optimize.bnb import DEFAULT_MAX_LP_CELLS
from ..optimize.solvers import SolverSettings
from ..utils.hashing import config_digest
from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

NETWORK_MODELS = ("sbm", "latent")
REWARD_MODELS = ("additive", "misspecified")
BUDGET_MODES = ("fraction", "constant", "unlimited")
EXECUTORS = ("thread", "process")
SWEEP_AXES = ("n", "budget", "prior_mean", "agent")
UNLIMITED_TOKENS = ("unlimited", "none", "inf")

AGENT_ALIASES = {
    "ts": "thompson",
    "ucl": "network_ucl",
    "random": "random_policy",
}


@dataclass
class NetworkConfig:
    """Configurações do gerador de redes"""
    model: str = "sbm"
    n: int = 100
    k: Optional[int] = None
    membership: Optional[List[float]] = None
    edge_matrix: Optional[List[List[float]]] = None
    within: float = 0.3
    across: Optional[float] = None
    latent_alpha: float = -2.0
    latent_dim: int = 2
    latent_u_scale: float = 1.0
    latent_a_scale: float = 0.0
    latent_b_scale: float = 0.0


@dataclass
class RewardConfig:
    """Configurações do modelo de recompensa"""
    model: str = "additive"
    cutoff: int = 15
    environment_cutoff: Optional[int] = None
    noise_sigma: float = 1.0
    mu: Optional[List[float]] = None
    gamma: Optional[List[float]] = None
    gamma1: Optional[List[float]] = None
    fixed_theta: bool = False
    mu_mean: float = 2.0
    mu_sd: float = 1.0
    gamma_sd: float = 1.0
    misspec_slope: float = 0.5


@dataclass
class AgentConfig:
    """Configurações do agente"""
    kind: str = "thompson"
    prior_mean: float = 1.0
    prior_lambda: float = 0.1
    obs_noise_var: float = 1.0
    ucl_S: Optional[float] = None
    ucl_R: Optional[float] = None
    ucl_L: Optional[float] = None
    ucl_delta: float = 0.05
    ucl_draws: int = 10
    ucl_restarts: int = 5
    ucl_exact_max_n: int = 12


@dataclass
class BudgetConfig:
    """Orçamento por rodada: fração de n, constante ou ilimitado"""
    mode: str = "fraction"
    value: Optional[float] = 0.2
    schedule: Optional[List[Optional[int]]] = None


@dataclass
class SolverConfig:
    """Solvers do agente e do oráculo"""
    agent_method: str = "local_search"
    oracle_method: str = "auto"
    time_limit: float = 60.0
    gap_tolerance: float = 0.01
    restarts: int = 20
    restart_jobs: int = 1
    lp_backend: str = "simplex"
    max_lp_cells: int = DEFAULT_MAX_LP_CELLS


@dataclass
class ExperimentSection:
    """Horizonte, replicações e paralelismo"""
    rounds: int = 100
    replications: int = 50
    seed: int = 0
    jobs: int = 1
    executor: str = "thread"


@dataclass
class LoggingConfig:
    """Configurações de logging"""
    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    file_path: Optional[str] = None
    max_file_size_mb: int = 10
    backup_count: int = 5
    console_output: bool = True
    rich_console: bool = True


@dataclass
class OutputConfig:
    """O que além do CSV principal é gravado"""
    record_posterior: bool = False
    timing: bool = False


SECTIONS = {
    'network': NetworkConfig,
    'reward': RewardConfig,
    'agent': AgentConfig,
    'budget': BudgetConfig,
    'solver': SolverConfig,
    'experiment': ExperimentSection,
    'logging': LoggingConfig,
    'output': OutputConfig,
}

# seções que não mudam nenhum número produzido
_HASH_EXCLUDED = {'logging': None, 'experiment': ('jobs', 'executor'), 'solver': ('restart_jobs',)}


def resolve_agent_kind(kind: str) -> str:
    return AGENT_ALIASES.get(kind, kind)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Configuração resolvida e imutável de um experimento.

    Tudo que o harness precisa para rodar uma replicação; pode ser enviada
    a processos filhos (picklable).
    """
    n: int
    k: int
    network_model: str
    sbm: Optional[SbmParams]
    latent: Optional[LatentSpaceParams]
    reward_model: str
    cutoff: int
    environment_cutoff: int
    theta_gen: ThetaGenSpec
    explicit_theta: Any
    fixed_theta: bool
    noise: NoiseSpec
    agent: AgentSpec
    budget_mode: str
    budget_value: Optional[float]
    budget_schedule: Optional[Tuple[Optional[int], ...]]
    agent_solver: SolverSettings
    oracle_solver: SolverSettings
    rounds: int
    replications: int
    seed: int = 0
    jobs: int = 1
    executor: str = "thread"
    record_posterior: bool = False
    timing: bool = False
    config_hash: str = ""

    @property
    def dimension(self) -> int:
        """D = k + C + 1 do agente"""
        return self.k + self.cutoff + 1

    @property
    def environment_dimension(self) -> int:
        return self.k + self.environment_cutoff + 1

    @property
    def label(self) -> str:
        return self.agent.kind

    def budget_at(self, t: int) -> Optional[int]:
        """
        Orçamento B_t da rodada t (base 1)

        Args:
            t: Rodada

        Returns:
            Inteiro em [0, n], ou None quando ilimitado
        """
        if self.budget_schedule:
            entry = self.budget_schedule[min(t, len(self.budget_schedule)) - 1]
            return None if entry is None else min(int(entry), self.n)
        if self.budget_mode == "unlimited":
            return None
        if self.budget_mode == "fraction":
            return min(int(math.floor(self.budget_value * self.n + 1e-9)), self.n)
        return min(int(self.budget_value), self.n)

    def budget_label(self, t: int) -> Union[int, str]:
        budget = self.budget_at(t)
        return "unlimited" if budget is None else budget

    def sample_graph(self, rng: np.random.Generator) -> Graph:
        """Rede nova da população configurada"""
        if self.network_model == "sbm":
            return sample_sbm(self.sbm, self.n, rng)
        groups = rng.choice(self.k, size=self.n) + 1
        return sample_latent_space(self.latent, self.n, rng, groups=groups)

    def draw_theta(self, rng: np.random.Generator):
        """θ verdadeiro: o explícito da configuração ou um sorteio do gerador"""
        if self.explicit_theta is not None:
            return self.explicit_theta
        if self.reward_model == "misspecified":
            return sample_misspec_theta(self.theta_gen, rng)
        return sample_theta(self.theta_gen, rng)

    def agent_context(self, theta_true=None) -> AgentContext:
        # o agente oráculo resolve com as mesmas configurações do oráculo de regret
        solver = self.oracle_solver if self.agent.kind == "oracle" else self.agent_solver
        return AgentContext(k=self.k, cutoff=self.cutoff, solver=solver,
                            noise_sigma=self.noise.sigma, theta_true=theta_true,
                            theta_gen=self.theta_gen)

    def expected_degree(self) -> Optional[float]:
        """(n-1) pᵀWp para o SBM; None para o modelo latente"""
        if self.sbm is None:
            return None
        return self.sbm.expected_degree(self.n)

    def describe(self) -> Dict[str, Any]:
        """Quantidades derivadas exibidas por `netbandit validate`"""
        derived: Dict[str, Any] = {
            "n": self.n,
            "k": self.k,
            "cutoff": self.cutoff,
            "environment_cutoff": self.environment_cutoff,
            "D": self.dimension,
            "budget": self.budget_label(1),
            "expected_degree": self.expected_degree(),
            "rounds": self.rounds,
            "replications": self.replications,
            "agent": self.agent.kind,
            "agent_solver": self.agent_solver.method,
            "oracle_solver": self.oracle_solver.method,
        }
        params = confidence_params_for(self.agent, self.agent_context())
        derived["confidence"] = {"S": params.S, "R": params.R, "L": params.L,
                                 "delta": params.delta, "lambda": params.lam}
        return derived


def parse_axis_value(axis: str, text: Union[str, int, float]) -> Any:
    """
    Converte um valor de varredura vindo da linha de comando

    Args:
        axis: n, budget, prior_mean ou agent
        text: Valor textual (ou já numérico)

    Returns:
        int para n; None/int/float para budget; float para prior_mean; str para agent
    """
    if axis not in SWEEP_AXES:
        raise ConfigurationError(f"Eixo desconhecido: {axis} (use {', '.join(SWEEP_AXES)})")
    raw = str(text).strip()
    try:
        if axis == "n":
            return int(raw)
        if axis == "prior_mean":
            return float(raw)
        if axis == "agent":
            kind = resolve_agent_kind(raw)
            if kind not in AGENT_KINDS:
                raise ConfigurationError(f"Agente desconhecido na varredura: {raw}")
            return kind
        if raw.lower() in UNLIMITED_TOKENS:
            return None
        if raw.lstrip("-").isdigit():
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigurationError(f"Valor inválido para o eixo {axis}: {raw}") from None


class Config:
    """Classe principal de configuração"""

    def __init__(self, config_file: Optional[Union[str, Path]] = None, load_env: bool = True):
        self.config_file = Path(config_file) if config_file else None

        self.network = NetworkConfig()
        self.reward = RewardConfig()
        self.agent = AgentConfig()
        self.budget = BudgetConfig()
        self.solver = SolverConfig()
        self.experiment = ExperimentSection()
        self.logging = LoggingConfig()
        self.output = OutputConfig()

        if self.config_file:
            self.load_from_file()

        if load_env:
            self.load_from_env()

    @classmethod
    def from_dict(cls, data: Dict[str, Any], load_env: bool = False) -> "Config":
        """Configuração a partir de um dicionário já carregado"""
        config = cls(load_env=load_env)
        config.update(data)
        return config

    def load_from_file(self) -> None:
        """Carrega configurações de arquivo YAML ou JSON"""
        path = self.config_file
        if not path.exists():
            raise ConfigurationError(f"Arquivo de configuração não encontrado: {path}")

        suffix = path.suffix.lower()
        text = path.read_text(encoding='utf-8')
        try:
            if suffix in ('.yaml', '.yml'):
                data = yaml.safe_load(text)
            elif suffix == '.json':
                data = json.loads(text)
            else:
                raise ConfigurationError(f"Formato de arquivo não suportado: {path.suffix}")
        except yaml.YAMLError as e:
            mark = getattr(e, 'problem_mark', None)
            where = f" (linha {mark.line + 1}, coluna {mark.column + 1})" if mark else ""
            raise ConfigurationError(f"YAML inválido em {path}{where}: "
                                     f"{getattr(e, 'problem', None) or e}") from None
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"JSON inválido em {path} (linha {e.lineno}): {e.msg}") from None

        self.update(data or {})
        logger.info(f"Configurações carregadas de: {path}")

    def update(self, data: Dict[str, Any]) -> None:
        """Aplica um dicionário {seção: {chave: valor}} sobre a configuração atual"""
        if not isinstance(data, dict):
            raise ConfigurationError("A configuração deve ser um mapeamento de seções")
        for section, values in data.items():
            if section not in SECTIONS:
                raise ConfigurationError(f"Seção desconhecida: {section} "
                                         f"(válidas: {', '.join(SECTIONS)})")
            if values is None:
                continue
            if not isinstance(values, dict):
                raise ConfigurationError(f"A seção {section} deve ser um mapeamento")
            self._update_config(section, getattr(self, section), values)

    def load_from_env(self) -> None:
        """Carrega configurações de variáveis de ambiente"""
        if os.getenv('NETBANDIT_JOBS'):
            try:
                self.experiment.jobs = int(os.getenv('NETBANDIT_JOBS'))
            except ValueError:
                logger.warning(f"NETBANDIT_JOBS ignorado: {os.getenv('NETBANDIT_JOBS')!r} não é inteiro")

        if os.getenv('NETBANDIT_LOG_LEVEL'):
            self.logging.level = os.getenv('NETBANDIT_LOG_LEVEL').upper()

        if os.getenv('NETBANDIT_LOG_FILE'):
            self.logging.file_path = os.getenv('NETBANDIT_LOG_FILE')

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return {name: asdict(getattr(self, name)) for name in SECTIONS}

    def save_to_file(self, file_path: Optional[Union[str, Path]] = None) -> Path:
        """Salva configurações em arquivo YAML"""
        target_file = Path(file_path) if file_path else self.config_file
        if not target_file:
            target_file = Path("netbandit.yaml")

        target_file.parent.mkdir(parents=True, exist_ok=True)
        with open(target_file, 'w', encoding='utf-8') as f:
            yaml.safe_dump(self.to_dict(), f, default_flow_style=False,
                           allow_unicode=True, indent=2, sort_keys=False)

        logger.info(f"Configurações salvas em: {target_file}")
        return target_file

    def copy(self) -> "Config":
        return copy.deepcopy(self)

    def digest(self) -> str:
        """Hash das seções que determinam os resultados"""
        data = self.to_dict()
        for section, keys in _HASH_EXCLUDED.items():
            if keys is None:
                data.pop(section, None)
            else:
                for key in keys:
                    data[section].pop(key, None)
        return config_digest(data)

    def with_axis(self, axis: str, value: Any) -> "Config":
        """
        Cópia com um eixo de varredura fixado

        Args:
            axis: n, budget, prior_mean ou agent
            value: Valor já convertido por parse_axis_value

        Returns:
            Nova Config (a original não é alterada)
        """
        if axis not in SWEEP_AXES:
            raise ConfigurationError(f"Eixo desconhecido: {axis} (use {', '.join(SWEEP_AXES)})")
        config = self.copy()
        if axis == "n":
            config.network.n = int(value)
        elif axis == "prior_mean":
            config.agent.prior_mean = float(value)
        elif axis == "agent":
            config.agent.kind = resolve_agent_kind(str(value))
        else:
            config.budget.schedule = None
            if value is None:
                config.budget.mode, config.budget.value = "unlimited", None
            elif isinstance(value, int):
                config.budget.mode, config.budget.value = "constant", float(value)
            else:
                config.budget.mode, config.budget.value = "fraction", float(value)
        return config

    def _update_config(self, section: str, config_obj: object, data: Dict[str, Any]) -> None:
        """Atualiza objeto de configuração com dados, rejeitando chaves desconhecidas"""
        known = {f.name: f.type for f in fields(config_obj)}
        for key, value in data.items():
            if key not in known:
                raise ConfigurationError(f"Chave desconhecida: {section}.{key}")
            setattr(config_obj, key, _coerce(f"{section}.{key}", value, known[key]))

    def to_experiment(self) -> ExperimentConfig:
        """
        Resolve a configuração em um ExperimentConfig validado

        Returns:
            ExperimentConfig imutável

        Raises:
            ConfigurationError: listando todos os problemas encontrados
        """
        problems: List[str] = []

        def check(label: str, build):
            try:
                return build()
            except ConfigurationError as e:
                problems.extend(f"{label}: {p}" for p in (e.problems or [str(e)]))
            except (TypeError, ValueError) as e:
                problems.append(f"{label}: {e}")
            return None

        net, rew, ag, bud, sol, exp = (self.network, self.reward, self.agent,
                                       self.budget, self.solver, self.experiment)

        if net.model not in NETWORK_MODELS:
            problems.append(f"network.model: use {', '.join(NETWORK_MODELS)} (recebido {net.model})")
        if net.n < 1:
            problems.append(f"network.n deve ser >= 1 (recebido {net.n})")
        n = max(int(net.n), 1)
        k = self._resolve_k()
        if k < 1:
            problems.append(f"network.k deve ser >= 1 (recebido {k})")

        sbm = latent = None
        if net.model == "sbm":
            sbm = check("network", lambda: self._sbm_params(n, k))
        elif net.model == "latent":
            latent = check("network", self._latent_params)

        if rew.model not in REWARD_MODELS:
            problems.append(f"reward.model: use {', '.join(REWARD_MODELS)} (recebido {rew.model})")
        if rew.cutoff < 0:
            problems.append(f"reward.cutoff deve ser >= 0 (recebido {rew.cutoff})")
        env_cutoff = rew.cutoff if rew.environment_cutoff is None else rew.environment_cutoff
        if env_cutoff < 0:
            problems.append(f"reward.environment_cutoff deve ser >= 0 (recebido {env_cutoff})")

        theta_gen = ThetaGenSpec(k=max(k, 1), cutoff=max(env_cutoff, 0), mu_mean=rew.mu_mean,
                                 mu_sd=rew.mu_sd, gamma_sd=rew.gamma_sd,
                                 misspec_slope=rew.misspec_slope)
        check("reward", theta_gen.validate)
        noise = NoiseSpec(sigma=rew.noise_sigma)
        check("reward", noise.validate)
        explicit = check("reward", lambda: self._explicit_theta(k, env_cutoff))

        agent = AgentSpec(
            kind=resolve_agent_kind(ag.kind), prior_mean=ag.prior_mean,
            prior_lambda=ag.prior_lambda, obs_noise_var=ag.obs_noise_var,
            ucl_S=ag.ucl_S, ucl_R=ag.ucl_R, ucl_L=ag.ucl_L, ucl_delta=ag.ucl_delta,
            ucl_draws=ag.ucl_draws, ucl_restarts=ag.ucl_restarts,
            ucl_exact_max_n=ag.ucl_exact_max_n,
        )
        check("agent", agent.validate)

        problems.extend(self._budget_problems())

        settings = {}
        for role, method in (("agent", sol.agent_method), ("oracle", sol.oracle_method)):
            settings[role] = SolverSettings(method=method, time_limit=sol.time_limit,
                                            gap_tolerance=sol.gap_tolerance, restarts=sol.restarts,
                                            restart_jobs=sol.restart_jobs,
                                            lp_backend=sol.lp_backend, max_lp_cells=sol.max_lp_cells)
            check(f"solver.{role}", settings[role].validate)

        if exp.rounds < 1:
            problems.append(f"experiment.rounds deve ser >= 1 (recebido {exp.rounds})")
        if exp.replications < 1:
            problems.append(f"experiment.replications deve ser >= 1 (recebido {exp.replications})")
        if exp.jobs < 1:
            problems.append(f"experiment.jobs deve ser >= 1 (recebido {exp.jobs})")
        if exp.seed < 0:
            problems.append(f"experiment.seed deve ser >= 0 (recebido {exp.seed})")
        if exp.executor not in EXECUTORS:
            problems.append(f"experiment.executor: use {', '.join(EXECUTORS)} (recebido {exp.executor})")

        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if str(self.logging.level).upper() not in valid_levels:
            problems.append(f"logging.level inválido: {self.logging.level}")

        if problems:
            raise ConfigurationError("Configuração inválida", problems)

        schedule = tuple(bud.schedule) if bud.schedule else None
        return ExperimentConfig(
            n=n, k=k, network_model=net.model, sbm=sbm, latent=latent,
            reward_model=rew.model, cutoff=rew.cutoff, environment_cutoff=env_cutoff,
            theta_gen=theta_gen, explicit_theta=explicit, fixed_theta=rew.fixed_theta,
            noise=noise, agent=agent, budget_mode=bud.mode, budget_value=bud.value,
            budget_schedule=schedule, agent_solver=settings["agent"],
            oracle_solver=settings["oracle"], rounds=exp.rounds,
            replications=exp.replications, seed=exp.seed, jobs=exp.jobs,
            executor=exp.executor, record_posterior=self.output.record_posterior,
            timing=self.output.timing, config_hash=self.digest(),
        )

    def validate(self) -> bool:
        """Valida configurações; levanta ConfigurationError com todos os problemas"""
        self.to_experiment()
        return True

    def is_valid(self) -> bool:
        """Versão booleana de validate(), registrando os problemas no log"""
        try:
            return self.validate()
        except ConfigurationError as e:
            logger.error(f"Erro na validação de configurações: {e}")
            return False

    def _resolve_k(self) -> int:
        net = self.network
        if net.k is not None:
            return int(net.k)
        if net.membership:
            return len(net.membership)
        if net.edge_matrix:
            return len(net.edge_matrix)
        return max(1, math.ceil(max(net.n, 1) / 10))

    def _sbm_params(self, n: int, k: int) -> SbmParams:
        net = self.network
        if net.membership is None and net.edge_matrix is None:
            params = protocol_sbm_params(n, within=net.within, across=net.across, k=k)
        else:
            p = net.membership if net.membership is not None else [1.0 / k] * k
            if net.edge_matrix is not None:
                W = net.edge_matrix
            else:
                across = (1.0 / n) if net.across is None else net.across
                W = [[net.within if i == j else across for j in range(k)] for i in range(k)]
            params = SbmParams(k=k, p=tuple(p), W=tuple(tuple(row) for row in W))
        params.validate()
        return params

    def _latent_params(self) -> LatentSpaceParams:
        net = self.network
        params = LatentSpaceParams(alpha=net.latent_alpha, latent_dim=net.latent_dim,
                                   u_scale=net.latent_u_scale, a_scale=net.latent_a_scale,
                                   b_scale=net.latent_b_scale)
        params.validate()
        return params

    def _explicit_theta(self, k: int, env_cutoff: int):
        rew = self.reward
        if rew.mu is None and rew.gamma is None and rew.gamma1 is None:
            return None
        problems = []
        if rew.mu is None or rew.gamma is None:
            problems.append("θ explícito exige mu e gamma")
        else:
            if len(rew.mu) != k:
                problems.append(f"mu deve ter k={k} entradas (recebido {len(rew.mu)})")
            if len(rew.gamma) != env_cutoff + 1:
                problems.append(f"gamma deve ter C+1={env_cutoff + 1} entradas (recebido {len(rew.gamma)})")
        if rew.model == "misspecified" and rew.gamma1 is None:
            problems.append("modelo misspecified com θ explícito exige gamma1")
        if rew.model == "additive" and rew.gamma1 is not None:
            problems.append("gamma1 só se aplica ao modelo misspecified")
        if problems:
            raise ConfigurationError("θ explícito inválido", problems)
        if rew.model == "misspecified":
            return MisspecTheta(mu=rew.mu, gamma0=rew.gamma, gamma1=rew.gamma1)
        return ThetaTrue(mu=rew.mu, gamma=rew.gamma)

    def _budget_problems(self) -> List[str]:
        bud = self.budget
        problems = []
        if bud.schedule is not None:
            if len(bud.schedule) == 0:
                problems.append("budget.schedule não pode ser vazio")
            for entry in bud.schedule:
                if entry is not None and (not isinstance(entry, int) or entry < 0):
                    problems.append(f"budget.schedule: entradas devem ser inteiros >= 0 ou null "
                                    f"(recebido {entry!r})")
            return problems
        if bud.mode not in BUDGET_MODES:
            problems.append(f"budget.mode: use {', '.join(BUDGET_MODES)} (recebido {bud.mode})")
        elif bud.mode == "fraction":
            if bud.value is None or not 0 <= bud.value <= 1:
                problems.append(f"budget.value deve estar em [0, 1] no modo fraction (recebido {bud.value})")
        elif bud.mode == "constant":
            if bud.value is None or bud.value < 0 or float(bud.value) != int(bud.value):
                problems.append(f"budget.value deve ser inteiro >= 0 no modo constant (recebido {bud.value})")
        return problems

    def __str__(self) -> str:
        """Representação string das configurações"""
        return f"""netbandit Configuration:
Network: {self.network.model} n={self.network.n} k={self._resolve_k()}
Reward: {self.reward.model} C={self.reward.cutoff} sigma={self.reward.noise_sigma}
Agent: {self.agent.kind} prior_mean={self.agent.prior_mean} lambda={self.agent.prior_lambda}
Budget: {self.budget.mode} {self.budget.value}
Experiment: T={self.experiment.rounds} reps={self.experiment.replications} seed={self.experiment.seed} jobs={self.experiment.jobs}"""


def _coerce(name: str, value: Any, annotation: Any) -> Any:
    """Confere o tipo de um valor lido do arquivo contra a anotação do campo"""
    if get_origin(annotation) is Union:
        args = [a for a in get_args(annotation) if a is not type(None)]
        if value is None:
            return None
        annotation = args[0]
    origin = get_origin(annotation) or annotation

    if annotation is bool:
        if isinstance(value, bool):
            return value
    elif annotation is int:
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)
    elif annotation is float:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    elif annotation is str:
        if isinstance(value, str):
            return value
    elif origin is list:
        if isinstance(value, (list, tuple)):
            return list(value)
    else:
        return value
    raise ConfigurationError(f"Tipo inválido para {name}: {value!r}")


_global_config: Optional[Config] = None


def get_config() -> Config:
    """Retorna instância global de configuração"""
    global _global_config
    if _global_config is None:
        _global_config = Config()
    return _global_config


def set_config(config: Config) -> None:
    """Define instância global de configuração"""
    global _global_config
    _global_config = config


def load_config(config_file: Union[str, Path]) -> Config:
    """Carrega e define configuração global"""
    config = Config(config_file)
    set_config(config)
    return config
