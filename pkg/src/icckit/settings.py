"""
Configurações do icckit

Carrega variáveis do arquivo .env (python-dotenv) e mescla com os padrões.

Variáveis reconhecidas:
- ICCKIT_WORD_CUTOFF: profundidade das buscas limitadas (palavras, expoentes)
- ICCKIT_ORACLE_RADIUS: raio padrão do oráculo de conjugados
- ICCKIT_ORACLE_MAX_CONJUGATES: teto de conjugados enumerados por elemento
- ICCKIT_AUT_CAP: ordem máxima para força bruta em Aut(G)
- ICCKIT_ASSOC_FULL_CHECK: ordem até a qual a associatividade é checada em todas as triplas
- ICCKIT_ASSOC_SAMPLES: número de triplas amostradas acima desse limite
- ICCKIT_LOG_LEVEL / ICCKIT_LOG_FILE: destino dos logs (ver src/main.py)
"""

import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv

# Configurações padrão - EDITE AQUI conforme necessário
DEFAULT_SETTINGS: Dict[str, Any] = {
    "word_cutoff": 8,
    "oracle_radius": 8,
    "oracle_max_conjugates": 200000,
    "aut_cap": 24,
    "assoc_full_check": 64,
    "assoc_samples": 2000,
    "log_level": "WARNING",
    "log_file": None,
}

_ENV_KEYS = {
    "word_cutoff": ("ICCKIT_WORD_CUTOFF", int),
    "oracle_radius": ("ICCKIT_ORACLE_RADIUS", int),
    "oracle_max_conjugates": ("ICCKIT_ORACLE_MAX_CONJUGATES", int),
    "aut_cap": ("ICCKIT_AUT_CAP", int),
    "assoc_full_check": ("ICCKIT_ASSOC_FULL_CHECK", int),
    "assoc_samples": ("ICCKIT_ASSOC_SAMPLES", int),
    "log_level": ("ICCKIT_LOG_LEVEL", str),
    "log_file": ("ICCKIT_LOG_FILE", str),
}


def load_settings(overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Monta o dicionário de configurações: padrões < variáveis de ambiente < overrides.

    Args:
        overrides (Dict, optional): valores explícitos do chamador

    Returns:
        Dict: configurações efetivas
    """
    load_dotenv()

    settings = dict(DEFAULT_SETTINGS)
    for key, (env_name, cast) in _ENV_KEYS.items():
        raw = os.getenv(env_name)
        if raw is None or raw == "":
            continue
        try:
            settings[key] = cast(raw)
        except ValueError as e:
            raise ValueError(f"Valor inválido para {env_name}: {raw!r}") from e

    return {**settings, **(overrides or {})}
