"""
Digests para rastreabilidade de experimentos: configuração, grafos e arquivos de saída
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

logger = logging.getLogger(__name__)

SUPPORTED_ALGORITHMS = {
    'md5': hashlib.md5,
    'sha1': hashlib.sha1,
    'sha256': hashlib.sha256,
    'sha512': hashlib.sha512,
    'blake2b': hashlib.blake2b,
}

CHUNK_SIZE = 65536


def _canonical(value: Any) -> Any:
    """Converte valores numpy e tuplas em tipos JSON estáveis"""
    if isinstance(value, dict):
        return {str(k): _canonical(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_canonical(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float):
        # repr preserva todos os dígitos
        return repr(value)
    return value


def config_digest(data: Dict[str, Any], algorithm: str = 'sha256') -> str:
    """
    Digest de um dicionário de configuração em JSON canônico

    Args:
        data: Configuração (chaves ordenadas na serialização)
        algorithm: Algoritmo de hash

    Returns:
        Hex digest estável entre execuções e plataformas
    """
    payload = json.dumps(_canonical(data), sort_keys=True, separators=(",", ":"))
    return _new_hash(algorithm, payload.encode("utf-8")).hexdigest()


def graph_digest(graph) -> str:
    """Digest curto (blake2b, 16 bytes) da estrutura CSR e dos grupos de um grafo"""
    h = hashlib.blake2b(digest_size=16)
    h.update(np.int64(graph.n).tobytes())
    for array in (graph.indptr, graph.indices, graph.groups):
        h.update(np.ascontiguousarray(array, dtype=np.int64).tobytes())
    return h.hexdigest()


def file_digest(file_path: Union[str, Path], algorithm: str = 'sha256') -> str:
    """
    Hash de um arquivo lido em blocos

    Args:
        file_path: Caminho do arquivo
        algorithm: Algoritmo de hash

    Returns:
        Hex digest
    """
    h = _new_hash(algorithm)
    with open(file_path, 'rb') as f:
        for chunk in iter(lambda: f.read(CHUNK_SIZE), b''):
            h.update(chunk)
    return h.hexdigest()


def verify_file(file_path: Union[str, Path], expected: str, algorithm: str = 'sha256') -> bool:
    """Confere o digest de um arquivo"""
    try:
        return file_digest(file_path, algorithm) == expected.lower()
    except OSError as e:
        logger.error(f"Erro ao verificar {file_path}: {e}")
        return False


def _new_hash(algorithm: str, data: bytes = b''):
    if algorithm not in SUPPORTED_ALGORITHMS:
        raise ValueError(f"Algoritmo não suportado: {algorithm}")
    return SUPPORTED_ALGORITHMS[algorithm](data)
