"""
Políticas de tratamento
"""

from .base import (
    AGENT_KINDS, AgentContext, AgentRegistry, AgentSpec, BaseAgent, check_budget, get_registry,
)
from .thompson import SumLinearThompsonAgent, ThompsonAgent, sum_linear_ts_step, ts_step
from .ucl import (
    CandidatePolicy, ConfidenceParams, NetworkUCLAgent, confidence_params_for, confidence_radius,
    default_confidence_params, ucb_value, ucl_regret_bound, ucl_step,
)
from .baselines import OracleAgent, RandomAgent, oracle_step, random_policy_step


def register_all_agents() -> AgentRegistry:
    """Registra todos os agentes no registro global"""
    registry = get_registry()
    for agent_class in (ThompsonAgent, NetworkUCLAgent, SumLinearThompsonAgent,
                        RandomAgent, OracleAgent):
        registry.register(agent_class.kind, agent_class)
    return registry


def create_agent(spec: AgentSpec, context: AgentContext) -> BaseAgent:
    """Atalho para instanciar um agente pelo registro global"""
    registry = get_registry()
    if spec.kind not in registry:
        register_all_agents()
    return registry.create(spec, context)


register_all_agents()

__all__ = [
    "AGENT_KINDS", "AgentContext", "AgentRegistry", "AgentSpec", "BaseAgent",
    "check_budget", "get_registry", "register_all_agents", "create_agent",
    "ThompsonAgent", "SumLinearThompsonAgent", "ts_step", "sum_linear_ts_step",
    "CandidatePolicy", "ConfidenceParams", "NetworkUCLAgent", "confidence_params_for", "confidence_radius",
    "default_confidence_params", "ucb_value", "ucl_regret_bound", "ucl_step",
    "OracleAgent", "RandomAgent", "oracle_step", "random_policy_step",
]
