"""
Hierarquia de exceções do netbandit.

Funções de biblioteca levantam estas exceções; o harness as captura por
replicação e a CLI as converte em códigos de saída (2 para configuração,
3 para erros de execução).
"""

from typing import Iterable, List, Optional


class NetBanditError(Exception):
    """Erro base de todas as falhas do netbandit."""


class ConfigurationError(NetBanditError):
    """Parâmetros ou arquivo de configuração inválidos."""

    def __init__(self, message: str, problems: Optional[Iterable[str]] = None):
        self.problems: List[str] = list(problems or [])
        if self.problems:
            message = message + "\n" + "\n".join(f"  - {p}" for p in self.problems)
        super().__init__(message)


class ContractViolation(NetBanditError):
    """Pré-condição de uma operação violada (tamanhos, rótulos, orçamento)."""


class DataError(NetBanditError):
    """Dados observados inutilizáveis (recompensas não finitas, por exemplo)."""


class NumericalError(NetBanditError):
    """Falha numérica persistente, como Cholesky após a política de jitter."""


class SolverRefusal(NetBanditError):
    """O solver recusou a instância (ex.: força bruta acima do limite de tamanho)."""
